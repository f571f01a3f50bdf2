#include "rlab/cumulants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>

#include "rlab/rng.hpp"
#include "rlab/special_functions.hpp"

namespace rlab {

namespace {

constexpr int kBatches = 32;            // independent QMC randomizations
constexpr std::int64_t kMinBudget = 10000;
constexpr std::int64_t kMaxTotalDraws = 2000000000;  // across all cells

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: r holds binomial(n, i) after the division
        r = r * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
    }
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// One integration cell: m factors around the cycle, factor j coupling
// coordinates (s_{j-1}, s_j), with box edge T[j] for coordinate j.
struct CellScheme {
    int m = 0;
    int closing = 0;               // index of the factor kept as a weight
    std::vector<double> e;         // factor exponents
    std::vector<double> wf, wb;    // forward / backward factor weights
    std::vector<double> T;         // box edges per coordinate
};

int pick_closing(const std::vector<double>& e) {
    // The closing factor is evaluated (not sampled), so choose the least
    // singular exponent; everything else is absorbed by the sampler exactly.
    int jc = 0;
    for (std::size_t j = 1; j < e.size(); ++j)
        if (e[j] > e[jc]) jc = static_cast<int>(j);
    return jc;
}

// Randomized-QMC estimate of the cell integral.  Each batch reuses the same
// Halton point set (one prime base per coordinate) under a fresh
// Cranley-Patterson shift drawn from the (seed, tag, batch) substream, so the
// result depends only on (scheme, budget, seed, tag).
void run_cell(const CellScheme& sc, std::int64_t budget, std::uint64_t seed,
              std::uint64_t tag, double* value_out, double* se_out,
              std::int64_t* n_out) {
    const int m = sc.m;
    const int jc = sc.closing;
    const std::int64_t per_batch = (budget + kBatches - 1) / kBatches;

    std::vector<double> ep1(m), inv_ep1(m);
    for (int j = 0; j < m; ++j) {
        ep1[j] = sc.e[j] + 1.0;
        inv_ep1[j] = 1.0 / ep1[j];
    }

    // At m == 2 the two factors share a single difference coordinate (their
    // directions are collinear), so their product is one two-sided power law
    // with exponent e0 + e1.  Integrate that coordinate in closed form and
    // average only over the first coordinate: the per-sample value is bounded,
    // whereas sampling one factor and weighting by the other produces a
    // heavy-tailed weight whenever e0 + e1 is near -1.
    const bool pair_exact = (m == 2);
    double pe_p1 = 0.0, pe_inv = 0.0, pwf = 0.0, pwb = 0.0, pT = 0.0;
    if (pair_exact) {
        const int js = 1 - jc;
        pe_p1 = sc.e[0] + sc.e[1] + 1.0;  // > 0 inside the convergence domain
        pe_inv = 1.0 / pe_p1;
        pwf = sc.wf[js] * sc.wb[jc];
        pwb = sc.wb[js] * sc.wf[jc];
        pT = sc.T[js];
    }

    double batch_mean[kBatches];
    std::vector<double> shift(m), x(m);
    for (int b = 0; b < kBatches; ++b) {
        Rng shift_rng(mix_seed(seed, 1000 + tag, static_cast<std::uint64_t>(b)));
        for (int j = 0; j < m; ++j) shift[j] = shift_rng.u01();
        std::vector<HaltonDim> halton;
        halton.reserve(m);
        for (int j = 0; j < m; ++j) halton.emplace_back(kHaltonPrimes[j]);

        double sum = 0.0;
        for (std::int64_t i = 0; i < per_batch; ++i) {
            for (int j = 0; j < m; ++j) {
                double v = halton[j].next() + shift[j];
                if (v >= 1.0) v -= 1.0;
                if (v <= 0.0) v = 0x1p-53;
                x[j] = v;
            }
            if (pair_exact) {
                const double start = sc.T[jc] * x[0];
                const double rspan = pT - start;
                const double mass_r =
                    rspan > 0.0 ? pwf * std::pow(rspan, pe_p1) * pe_inv : 0.0;
                const double zmin = start > pT ? start - pT : 0.0;
                const double zminp = zmin > 0.0 ? std::pow(zmin, pe_p1) : 0.0;
                const double zmaxp = start > 0.0 ? std::pow(start, pe_p1) : 0.0;
                const double mass_l = pwb * (zmaxp - zminp) * pe_inv;
                sum += sc.T[jc] * (mass_r + mass_l);
                continue;
            }
            // Start on the closing factor's own coordinate, then walk the
            // cycle forward so each remaining factor conditions on its
            // predecessor.
            const double start = sc.T[jc] * x[0];
            double w = sc.T[jc];
            double prev = start;
            for (int k = 1; k < m; ++k) {
                const int j = (jc + k) % m;
                const double T = sc.T[j];
                // two-sided density wf*(s-prev)_+^e + wb*(prev-s)_+^e on [0,T]
                const double rspan = T - prev;
                const double mass_r =
                    rspan > 0.0 ? sc.wf[j] * std::pow(rspan, ep1[j]) * inv_ep1[j] : 0.0;
                const double zmin = prev > T ? prev - T : 0.0;
                const double zminp = zmin > 0.0 ? std::pow(zmin, ep1[j]) : 0.0;
                const double zmaxp = prev > 0.0 ? std::pow(prev, ep1[j]) : 0.0;
                const double mass_l = sc.wb[j] * (zmaxp - zminp) * inv_ep1[j];
                const double mass = mass_r + mass_l;
                if (!(mass > 0.0)) { w = 0.0; break; }
                const double u = x[k] * mass;
                double s;
                if (u <= mass_r && mass_r > 0.0) {
                    s = prev + rspan * std::pow(u / mass_r, inv_ep1[j]);
                    if (s > T) s = T;
                } else {
                    const double frac = (u - mass_r) / mass_l;
                    const double zp = zminp + frac * (zmaxp - zminp);
                    double zeta = std::pow(zp, inv_ep1[j]);
                    s = prev - zeta;
                    if (s < 0.0) s = 0.0;
                    if (s > T) s = T;
                }
                w *= mass;
                prev = s;
            }
            if (w != 0.0) {
                const double dx = start - prev;
                double q = 0.0;
                if (dx > 0.0)
                    q = sc.wf[jc] * std::pow(dx, sc.e[jc]);
                else if (dx < 0.0)
                    q = sc.wb[jc] * std::pow(-dx, sc.e[jc]);
                // dx == 0 only via floating-point collapse of the whole loop;
                // the true contribution of that event is negligible.
                sum += w * q;
            }
        }
        batch_mean[b] = sum / static_cast<double>(per_batch);
    }

    double mean = 0.0;
    for (int b = 0; b < kBatches; ++b) mean += batch_mean[b];
    mean /= kBatches;
    double var = 0.0;
    for (int b = 0; b < kBatches; ++b) {
        const double d = batch_mean[b] - mean;
        var += d * d;
    }
    var /= (kBatches - 1);
    *value_out = mean;
    *se_out = std::sqrt(var / kBatches);
    *n_out = static_cast<std::int64_t>(kBatches) * per_batch;
}

void set_converged(QuadratureResult* r) {
    const double scale = std::abs(r->value);
    r->converged = scale > 0.0 ? (r->std_error <= 0.05 * scale)
                               : (r->std_error == 0.0);
}

// Fraction-free integer row reduction; returns the rank.  Exact for the
// small 0/+-1 matrices that arise from cycle difference vectors.
int bareiss_rank(std::vector<std::vector<long long>> mat) {
    const int rows = static_cast<int>(mat.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(mat[0].size());
    int rank = 0;
    long long prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (mat[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(mat[piv], mat[rank]);
        for (int i = rank + 1; i < rows; ++i) {
            for (int k = col + 1; k < cols; ++k)
                mat[i][k] = (mat[i][k] * mat[rank][col] - mat[i][col] * mat[rank][k]) / prev;
            mat[i][col] = 0;
        }
        prev = mat[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace

SigmaWord::SigmaWord(std::uint32_t bits, int m) : bits_(bits), m_(m) {
    if (m < 1 || m > 31) throw std::invalid_argument("SigmaWord: length out of range");
    if (bits >> m) throw std::invalid_argument("SigmaWord: bits beyond length");
}

int SigmaWord::label(int j) const {
    if (j < 0 || j >= m_) throw std::out_of_range("SigmaWord::label: index");
    return ((bits_ >> j) & 1u) ? 2 : 1;
}

SigmaWord SigmaWord::complement() const {
    const std::uint32_t mask = (m_ == 31) ? 0x7fffffffu : ((1u << m_) - 1u);
    return SigmaWord(bits_ ^ mask, m_);
}

int SigmaWord::alternations() const {
    int count = 0;
    for (int j = 0; j < m_; ++j) {
        const int prevj = (j + m_ - 1) % m_;
        if (((bits_ >> j) & 1u) != ((bits_ >> prevj) & 1u)) ++count;
    }
    return count;
}

int SigmaWord::r_count() const {
    // positions where the label is 1 and the previous label is 2
    int count = 0;
    for (int j = 0; j < m_; ++j) {
        const int prevj = (j + m_ - 1) % m_;
        if (((bits_ >> j) & 1u) == 0 && ((bits_ >> prevj) & 1u) == 1) ++count;
    }
    return count;
}

std::uint64_t sigma_word_count(int m, int r) {
    if (m < 1 || r < 0 || 2 * r > m)
        throw std::out_of_range("sigma_word_count: need m >= 1 and 0 <= 2r <= m");
    return 2 * binomial(m, 2 * r);
}

bool domain_check(const CircularExponents& e) {
    const std::size_t m = e.alphas.size();
    if (m < 2) throw std::invalid_argument("domain_check: need at least 2 factors");
    double sum = 0.0;
    for (double a : e.alphas) {
        if (!std::isfinite(a)) throw std::invalid_argument("domain_check: non-finite exponent");
        if (a <= -1.0) return false;
        sum += a;
    }
    return sum + static_cast<double>(m) > 1.0;
}

FinitenessVerdict power_counting_check(const CircularExponents& e) {
    const int m = static_cast<int>(e.alphas.size());
    if (m < 2 || m > 12)
        throw std::invalid_argument("power_counting_check: need 2 <= m <= 12");
    for (double a : e.alphas)
        if (!std::isfinite(a))
            throw std::invalid_argument("power_counting_check: non-finite exponent");

    // Direction of factor j: w_j = u_j - u_{j-1} (cyclic).
    std::vector<std::vector<long long>> dirs(m, std::vector<long long>(m, 0));
    for (int j = 0; j < m; ++j) {
        dirs[j][j] += 1;
        dirs[j][(j + m - 1) % m] -= 1;
    }

    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<std::vector<long long>> w;
        for (int j = 0; j < m; ++j)
            if (mask & (1u << j)) w.push_back(dirs[j]);
        const int size = static_cast<int>(w.size());
        if (bareiss_rank(w) != size) continue;  // not linearly independent
        // d = |W| + sum of alphas over factors whose direction lies in span(W)
        double d = static_cast<double>(size);
        for (int j = 0; j < m; ++j) {
            if (mask & (1u << j)) {
                d += e.alphas[j];
                continue;
            }
            std::vector<std::vector<long long>> ext = w;
            ext.push_back(dirs[j]);
            if (bareiss_rank(ext) == size) d += e.alphas[j];
        }
        if (!(d > 0.0)) return FinitenessVerdict::Unverified;
    }
    return FinitenessVerdict::VerifiedFinite;
}

QuadratureResult f_circular(const CircularExponents& e, std::int64_t budget,
                            std::uint64_t seed) {
    const int m = static_cast<int>(e.alphas.size());
    if (m < 2 || m > kMaxHaltonDims)
        throw std::invalid_argument("f_circular: need 2 <= m <= 12 factors");
    if (e.times.size() != e.alphas.size())
        throw std::invalid_argument("f_circular: times/alphas size mismatch");
    for (double t : e.times)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::invalid_argument("f_circular: times must be positive and finite");
    if (!domain_check(e))
        throw std::domain_error("f_circular: exponents outside the convergence domain");
    if (budget < kMinBudget) throw budget_error("f_circular: budget below 10^4");

    CellScheme sc;
    sc.m = m;
    sc.e = e.alphas;
    sc.wf.assign(m, 1.0);
    sc.wb.assign(m, 1.0);
    sc.T = e.times;
    sc.closing = pick_closing(sc.e);

    QuadratureResult out;
    run_cell(sc, budget, seed, 0, &out.value, &out.std_error, &out.n_samples);
    set_converged(&out);
    return out;
}

QuadratureResult C_m(const ExponentPair& p, const LinearCombo& combo, int m,
                     std::int64_t budget, std::uint64_t seed, int jobs) {
    validate_interior(p);
    validate_combo(combo);
    if (m < 2) throw std::invalid_argument("C_m: order must be at least 2");
    if (m > 8) throw budget_error("C_m: orders above 8 are not supported");
    if (budget < kMinBudget) throw budget_error("C_m: budget below 10^4");
    const int n = static_cast<int>(combo.size());
    if (m >= 4 && n > 4)
        throw budget_error("C_m: more than 4 time points at order >= 4");

    const double g[2] = {p.g1, p.g2};
    std::int64_t n_words = std::int64_t{1} << m;
    std::int64_t n_multi = 1;
    for (int j = 0; j < m; ++j) n_multi *= n;
    const std::int64_t n_cells = n_words * n_multi;
    if (n_cells * budget > kMaxTotalDraws)
        throw budget_error("C_m: total draw count exceeds the 2e9 cap");

    struct CellTask {
        CellScheme scheme;
        double coeff = 0.0;
        std::int64_t tag = 0;
    };
    std::vector<CellTask> tasks;
    tasks.reserve(static_cast<std::size_t>(n_cells));

    for (std::int64_t word = 0; word < n_words; ++word) {
        for (std::int64_t multi = 0; multi < n_multi; ++multi) {
            double coeff = 1.0;
            std::vector<double> T(m);
            std::int64_t rem = multi;
            bool degenerate = false;
            for (int j = 0; j < m; ++j) {
                const int ij = static_cast<int>(rem % n);
                rem /= n;
                coeff *= combo[ij].c;
                T[j] = combo[ij].t;
                if (!(T[j] > 0.0)) degenerate = true;  // Z(0) = 0, cell vanishes
            }
            if (degenerate || coeff == 0.0) continue;

            CellTask task;
            task.coeff = coeff;
            task.tag = word * n_multi + multi;
            CellScheme& sc = task.scheme;
            sc.m = m;
            sc.T = std::move(T);
            sc.e.resize(m);
            sc.wf.resize(m);
            sc.wb.resize(m);
            for (int j = 0; j < m; ++j) {
                const int sj = static_cast<int>((word >> j) & 1);
                const int sp = static_cast<int>((word >> ((j + m - 1) % m)) & 1);
                const double gcur = g[sj];        // gamma_{sigma_j}
                const double gpc = g[1 - sp];     // gamma of previous complement
                sc.e[j] = gcur + gpc + 1.0;
                sc.wf[j] = beta_fn(gpc + 1.0, -sc.e[j]);
                sc.wb[j] = beta_fn(gcur + 1.0, -sc.e[j]);
            }
            sc.closing = pick_closing(sc.e);
            tasks.push_back(std::move(task));
        }
    }

    std::vector<double> values(tasks.size()), errors(tasks.size());
    std::vector<std::int64_t> counts(tasks.size());
    auto work = [&](std::size_t i) {
        run_cell(tasks[i].scheme, budget, seed,
                 static_cast<std::uint64_t>(tasks[i].tag), &values[i], &errors[i],
                 &counts[i]);
    };

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) break;
                    work(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Cells are independent estimates; the aggregation order is fixed by the
    // task list, so the sum is identical no matter how many workers ran.
    QuadratureResult out;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        out.value += tasks[i].coeff * values[i];
        out.std_error += tasks[i].coeff * tasks[i].coeff * errors[i] * errors[i];
        out.n_samples += counts[i];
    }
    out.std_error = std::sqrt(out.std_error);
    set_converged(&out);
    return out;
}

QuadratureResult kappa_m(const ExponentPair& p, const LinearCombo& combo, int m,
                         std::int64_t budget, std::uint64_t seed, int jobs) {
    QuadratureResult c = C_m(p, combo, m, budget, seed, jobs);
    double pref = 0.5;
    for (int i = 1; i < m; ++i) pref *= i;  // (m-1)!/2
    pref *= ipow(normalization_A(p), m);
    c.value *= pref;
    c.std_error *= pref;
    return c;
}

AsymptoticCheck f_ab_asymptotic_check(double a, double b,
                                      const std::vector<double>& times,
                                      std::int64_t budget, std::uint64_t seed) {
    const int m = static_cast<int>(times.size());
    if (m < 2 || m % 2 != 0 || m > kMaxHaltonDims)
        throw std::invalid_argument("f_ab_asymptotic_check: need an even number of times, 2..12");
    if (!(a > -1.0 && a < 0.0) || !(b > -1.0 && b < 0.0))
        throw std::invalid_argument("f_ab_asymptotic_check: exponents must lie in (-1, 0)");

    CircularExponents e;
    e.times = times;
    e.alphas.resize(m);
    for (int j = 0; j < m; ++j) e.alphas[j] = (j % 2 == 0) ? a : b;

    AsymptoticCheck out;
    out.lhs = f_circular(e, budget, seed);  // throws domain_error if divergent
    out.rhs = std::pow(b + 1.0, -0.5 * m);
    for (int k = 0; k + 1 < m; k += 2)
        out.rhs *= 2.0 * std::min(times[k], times[k + 1]);
    return out;
}

double kappa_corner2_approx(const ExponentPair& p, const LinearCombo& combo, int m) {
    validate_interior(p);
    validate_combo(combo);
    if (m < 2) throw std::invalid_argument("kappa_corner2_approx: order must be at least 2");
    const double d1 = -2.0 * p.g1 - 1.0;
    const double d2 = -2.0 * p.g2 - 1.0;
    const double d12 = -p.g1 - p.g2 - 1.0;
    const double denom_base = 1.0 / (d12 * d12) + 1.0 / (d1 * d2);
    double sum = 0.0;
    for (int r = 0; 2 * r <= m; ++r) {
        const double u = std::pow(d1 * d2, -static_cast<double>(r)) *
                         std::pow(d12, -static_cast<double>(m - 2 * r)) /
                         std::pow(denom_base, 0.5 * m);
        sum += static_cast<double>(binomial(m, 2 * r)) * u;
    }
    double ct = 0.0;
    for (const auto& w : combo) ct += w.c * w.t;
    double fact = 1.0;
    for (int i = 1; i < m; ++i) fact *= i;
    return fact * ipow(ct, m) * sum;
}

}  // namespace rlab
