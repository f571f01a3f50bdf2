#include "rlab/simulate.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "rlab/fft.hpp"
#include "rlab/rng.hpp"
#include "rlab/special_functions.hpp"

namespace rlab {

namespace {

void check_gamma_range(double g, const char* who) {
    if (!(g > -1.0 && g < -0.5))
        throw std::domain_error(std::string(who) +
                                ": exponent must lie in (-1, -1/2)");
}

// Smallest 5-smooth (2^a 3^b 5^c) integer >= n: keeps the FFT fast for any
// series length without padding all the way to a power of two.
std::size_t fast_fft_size(std::size_t n) {
    if (n <= 1) return 1;
    std::size_t best = SIZE_MAX;
    for (std::size_t p5 = 1; p5 < 2 * n; p5 *= 5) {
        for (std::size_t p35 = p5; p35 < 2 * n; p35 *= 3) {
            std::size_t p = p35;
            while (p < n) p *= 2;
            best = std::min(best, p);
        }
    }
    return best;
}

// One-shot plan for generating coupled series pairs: the two coefficient
// vectors are packed into a single complex spectrum (computed once), and the
// truncated-tail covariance factor is precomputed.  run() consumes exactly
// length + trunc + 1 normals from the supplied stream.
struct PairPlan {
    int length = 0;
    int trunc = 0;
    bool symmetric = false;  // equal exponents: the two series coincide
    std::size_t fft_n = 0;
    std::vector<std::complex<double>> spectrum;  // FFT of c1 + i*c2
    double chol11 = 0.0, chol21 = 0.0, chol22 = 0.0;  // tail covariance factor
    double tail_var1 = 0.0, tail_var2 = 0.0;

    PairPlan(double g1, double g2, int length_, int trunc_)
        : length(length_), trunc(trunc_), symmetric(g1 == g2) {
        const std::size_t conv_len =
            static_cast<std::size_t>(length) + trunc - 1;
        fft_n = fast_fft_size(conv_len);
        spectrum.assign(fft_n, {0.0, 0.0});
        for (int l = 0; l < trunc; ++l)
            spectrum[l] = {std::pow(l + 2.0, g1),
                           symmetric ? 0.0 : std::pow(l + 2.0, g2)};
        fft_inplace(spectrum, false);

        // Exact covariance of the dropped tails sum_{i>trunc+1} i^g eps_{n-i},
        // frozen across n (the tail varies on timescales >> the horizon).
        tail_var1 = power_tail_sum(2.0 * g1, trunc + 2L);
        tail_var2 = power_tail_sum(2.0 * g2, trunc + 2L);
        const double v12 = power_tail_sum(g1 + g2, trunc + 2L);
        chol11 = std::sqrt(tail_var1);
        chol21 = chol11 > 0.0 ? v12 / chol11 : 0.0;
        chol22 = std::sqrt(std::max(tail_var2 - chol21 * chol21, 0.0));
    }

    void run(Rng& rng, std::vector<double>& y1, std::vector<double>& y2,
             std::vector<std::complex<double>>& work) const {
        const std::size_t conv_len =
            static_cast<std::size_t>(length) + trunc - 1;
        work.assign(fft_n, {0.0, 0.0});
        for (std::size_t q = 0; q < conv_len; ++q) work[q] = rng.normal();
        const double t1 = rng.normal();
        const double t2 = rng.normal();
        const double tail1 = chol11 * t1;
        const double tail2 = chol21 * t1 + chol22 * t2;

        fft_inplace(work, false);
        for (std::size_t k = 0; k < fft_n; ++k) work[k] *= spectrum[k];
        fft_inplace(work, true);
        const double inv_n = 1.0 / static_cast<double>(fft_n);

        y1.resize(length);
        y2.resize(length);
        if (symmetric) {
            for (int n = 1; n <= length; ++n)
                y1[n - 1] = work[n + trunc - 2].real() * inv_n + tail1;
            y2 = y1;
        } else {
            for (int n = 1; n <= length; ++n) {
                const std::complex<double> v = work[n + trunc - 2] * inv_n;
                y1[n - 1] = v.real() + tail1;
                y2[n - 1] = v.imag() + tail2;
            }
        }
    }
};

}  // namespace

void validate_config(const LatticeConfig& cfg) {
    if (cfg.n_grid < 256 || (cfg.n_grid & (cfg.n_grid - 1)) != 0)
        throw std::invalid_argument(
            "LatticeConfig: n_grid must be a power of two >= 256");
    if (cfg.trunc < 16 * cfg.n_grid)
        throw std::invalid_argument(
            "LatticeConfig: trunc must be at least 16 * n_grid");
    if (cfg.n_paths < 1)
        throw std::invalid_argument("LatticeConfig: n_paths must be >= 1");
}

std::vector<double> linear_coeffs(double gamma, int length) {
    check_gamma_range(gamma, "linear_coeffs");
    if (length < 2)
        throw std::invalid_argument("linear_coeffs: length must be >= 2");
    std::vector<double> c(length);
    for (int l = 0; l < length; ++l) c[l] = std::pow(l + 2.0, gamma);
    return c;
}

LinearPair gen_linear_pair(double gamma1, double gamma2, int length, int trunc,
                           std::uint64_t seed) {
    check_gamma_range(gamma1, "gen_linear_pair");
    check_gamma_range(gamma2, "gen_linear_pair");
    if (length < 1)
        throw std::invalid_argument("gen_linear_pair: length must be >= 1");
    if (trunc < 2)
        throw std::invalid_argument("gen_linear_pair: trunc must be >= 2");
    PairPlan plan(gamma1, gamma2, length, trunc);
    Rng rng(seed);
    LinearPair out;
    std::vector<std::complex<double>> work;
    plan.run(rng, out.y1, out.y2, work);
    return out;
}

PathEnsemble simulate_paths(const ExponentPair& p, double horizon,
                            const LatticeConfig& cfg, int jobs) {
    validate_interior(p);
    validate_config(cfg);
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_paths: horizon must be positive");
    const double ln = horizon * cfg.n_grid;
    const long long L = std::llround(ln);
    if (L < 1 || std::abs(ln - static_cast<double>(L)) > 1e-9)
        throw std::invalid_argument(
            "simulate_paths: horizon * n_grid must be a positive integer");
    if (jobs < 1) throw std::invalid_argument("simulate_paths: jobs must be >= 1");

    const int N = cfg.n_grid;
    const double H = hurst(p);
    const double a_norm = normalization_A(p);
    const double mu12 = power_tail_sum(p.g1 + p.g2, 2L);
    const double scale = a_norm * std::pow(static_cast<double>(N), -H);
    const PairPlan plan(p.g1, p.g2, static_cast<int>(L), cfg.trunc);

    PathEnsemble out;
    out.grid.resize(L + 1);
    for (long long k = 0; k <= L; ++k)
        out.grid[k] = static_cast<double>(k) / N;
    out.paths.assign(cfg.n_paths, {});
    out.meta.label = "lattice";
    out.meta.g1 = p.g1;
    out.meta.g2 = p.g2;
    out.meta.seed = cfg.seed;
    out.meta.a_norm = a_norm;
    out.meta.tail_var1 = plan.tail_var1;
    out.meta.tail_var2 = plan.tail_var2;

    const int n_threads =
        std::max(1, std::min(jobs, cfg.n_paths));
    std::atomic<int> next_path{0};
    auto worker = [&]() {
        std::vector<double> y1, y2;
        std::vector<std::complex<double>> work;
        for (;;) {
            const int pi = next_path.fetch_add(1);
            if (pi >= cfg.n_paths) break;
            Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(pi), 0));
            plan.run(rng, y1, y2, work);
            auto& path = out.paths[pi];
            path.assign(L + 1, 0.0);
            double acc = 0.0;
            for (long long n = 1; n <= L; ++n) {
                acc += y1[n - 1] * y2[n - 1] - mu12;
                path[n] = scale * acc;
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int tI = 0; tI < n_threads; ++tI) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Empirical rescale to unit ensemble variance at t = 1 (the continuum
    // normalizer is only asymptotically exact on the lattice).
    const long long k1 = std::llround(static_cast<double>(N));
    double raw_var1 = 0.0;
    if (k1 <= L && cfg.n_paths >= 2) {
        double mean = 0.0;
        for (const auto& path : out.paths) mean += path[k1];
        mean /= cfg.n_paths;
        for (const auto& path : out.paths) {
            const double d = path[k1] - mean;
            raw_var1 += d * d;
        }
        raw_var1 /= (cfg.n_paths - 1);
    }
    out.meta.raw_var1 = raw_var1;
    if (raw_var1 > 0.0) {
        const double r = 1.0 / std::sqrt(raw_var1);
        out.meta.rescale = r;
        for (auto& path : out.paths)
            for (double& v : path) v *= r;
        out.meta.var_warning = std::abs(raw_var1 - 1.0) > 0.05;
    }
    return out;
}

double discrete_kernel(double s, double x, int N, double gamma) {
    if (N < 1) throw std::invalid_argument("discrete_kernel: N must be >= 1");
    if (!(gamma < 0.0))
        throw std::domain_error("discrete_kernel: gamma must be negative");
    const double ns = std::floor(N * s);
    const double nx = std::floor(N * x);
    if (!(ns > nx)) return 0.0;
    return std::pow((ns - nx + 1.0) / N, gamma);
}

// ---- PathEnsemble helpers (shared container, declared in paths.hpp) -------

std::vector<double> marginal_at(const PathEnsemble& e, double t) {
    std::size_t idx = e.grid.size();
    for (std::size_t k = 0; k < e.grid.size(); ++k) {
        if (e.grid[k] == t) {
            idx = k;
            break;
        }
    }
    if (idx == e.grid.size())
        throw std::invalid_argument("marginal_at: t is not a grid point");
    std::vector<double> col(e.paths.size());
    for (std::size_t p = 0; p < e.paths.size(); ++p) col[p] = e.paths[p][idx];
    return col;
}

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

void write_ensemble_csv(std::ostream& os, const PathEnsemble& e) {
    os << "t";
    for (std::size_t p = 0; p < e.paths.size(); ++p) os << ",path_" << p;
    os << "\n";
    for (std::size_t k = 0; k < e.grid.size(); ++k) {
        os << fmt_g17(e.grid[k]);
        for (std::size_t p = 0; p < e.paths.size(); ++p)
            os << "," << fmt_g17(e.paths[p][k]);
        os << "\n";
    }
}

}  // namespace rlab
