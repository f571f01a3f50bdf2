#include "rlab/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "rlab/fft.hpp"
#include "rlab/rng.hpp"

namespace rlab {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Quadratic form sum_{ij} c_i c_j cov(t_i, t_j) for a positive-semidefinite
// covariance; clamped at zero against rounding on degenerate combos.
template <typename Cov>
double combo_variance(const LinearCombo& combo, Cov cov) {
    double s = 0.0;
    for (const auto& wi : combo)
        for (const auto& wj : combo) s += wi.c * wj.c * cov(wi.t, wj.t);
    return std::max(s, 0.0);
}

// Dense in-place Cholesky (lower), with a tiny diagonal jitter retry for
// matrices that are only just positive definite.
void cholesky(std::vector<double>& a, int n) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<double> m = a;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = m[i * n + j];
                for (int k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
                if (i == j) {
                    if (s <= 0.0) { ok = false; break; }
                    m[i * n + i] = std::sqrt(s);
                } else {
                    m[i * n + j] = s / m[j * n + j];
                }
            }
        }
        if (ok) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) m[i * n + j] = 0.0;
            a = std::move(m);
            return;
        }
        for (int i = 0; i < n; ++i) a[i * n + i] += 1e-12 * (1.0 + a[i * n + i]);
    }
    throw std::runtime_error("cholesky: covariance matrix not positive definite");
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sample grid is empty");
    if (grid.front() != 0.0)
        throw std::invalid_argument("sample grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument("sample grid must be strictly increasing");
}

}  // namespace

LimitLaw LimitLaw::brownian() { return LimitLaw{LimitKind::BrownianMotion, -0.75, 0.0}; }
LimitLaw LimitLaw::product_fbm(double gamma) {
    return LimitLaw{LimitKind::ProductFbm, gamma, 0.0};
}
LimitLaw LimitLaw::corner_x(double rho) {
    return LimitLaw{LimitKind::CornerX, -0.75, rho};
}
LimitLaw LimitLaw::corner_y(double rho) {
    return LimitLaw{LimitKind::CornerY, -0.75, rho};
}

void validate_law(const LimitLaw& law) {
    switch (law.kind) {
        case LimitKind::BrownianMotion:
            return;
        case LimitKind::ProductFbm:
            if (!(law.gamma >= -1.0 && law.gamma < -0.5))
                throw std::domain_error("ProductFbm: gamma must lie in [-1, -1/2)");
            return;
        case LimitKind::CornerX:
        case LimitKind::CornerY:
            if (!(law.rho >= 0.0 && law.rho <= 1.0))
                throw std::domain_error("corner law: rho must lie in [0, 1]");
            return;
    }
    throw std::invalid_argument("validate_law: unknown kind");
}

double fbm_covariance(double H, double s, double t) {
    if (!(H > 0.0 && H <= 1.0)) throw std::domain_error("fbm_covariance: H must lie in (0, 1]");
    if (s < 0.0 || t < 0.0)
        throw std::invalid_argument("fbm_covariance: times must be nonnegative");
    return 0.5 * (std::pow(s, 2 * H) + std::pow(t, 2 * H) - std::pow(std::abs(s - t), 2 * H));
}

double kappa_limit_edge(int m, const LinearCombo& combo, double gamma) {
    if (m < 2) throw std::invalid_argument("kappa_limit_edge: order must be at least 2");
    if (!(gamma >= -1.0 && gamma < -0.5))
        throw std::domain_error("kappa_limit_edge: gamma must lie in [-1, -1/2)");
    validate_combo(combo);
    if (m % 2 == 1) return 0.0;
    const double H = gamma + 1.5;
    const double s2 = combo_variance(combo, [H](double a, double b) {
        return fbm_covariance(H, a, b);
    });
    return factorial(m - 1) * std::pow(s2, 0.5 * m);
}

double kappa_limit_cornerX(int m, const LinearCombo& combo, double rho) {
    if (m < 3) throw std::invalid_argument("kappa_limit_cornerX: order must be at least 3");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("kappa_limit_cornerX: rho must lie in [0, 1]");
    validate_combo(combo);
    if (m % 2 == 1) return 0.0;
    const double s2 = combo_variance(combo, [](double a, double b) {
        return std::min(a, b);
    });
    return std::pow(rho, 0.5 * m) * factorial(m - 1) * std::pow(s2, 0.5 * m);
}

double kappa_limit_cornerY(int m, const LinearCombo& combo, double rho) {
    if (m < 2) throw std::invalid_argument("kappa_limit_cornerY: order must be at least 2");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("kappa_limit_cornerY: rho must lie in [0, 1]");
    validate_combo(combo);
    const double q = 2.0 * std::sqrt(rho) / (1.0 + rho);
    double ct = 0.0;
    for (const auto& w : combo) ct += w.c * w.t;
    const double shape =
        (ipow(1.0 + q, m) + ipow(q - 1.0, m)) / std::pow(1.0 + q * q, 0.5 * m);
    return 0.5 * factorial(m - 1) * ipow(ct, m) * shape;
}

double kappa_limit(const LimitLaw& law, int m, const LinearCombo& combo) {
    validate_law(law);
    if (m < 2) throw std::invalid_argument("kappa_limit: order must be at least 2");
    const auto brownian_var = [&combo]() {
        return combo_variance(combo, [](double a, double b) { return std::min(a, b); });
    };
    switch (law.kind) {
        case LimitKind::BrownianMotion:
            validate_combo(combo);
            return m == 2 ? brownian_var() : 0.0;
        case LimitKind::ProductFbm:
            return kappa_limit_edge(m, combo, law.gamma);
        case LimitKind::CornerX:
            // the lemma formula covers m >= 3; the variance is Brownian
            if (m == 2) {
                validate_combo(combo);
                return brownian_var();
            }
            return kappa_limit_cornerX(m, combo, law.rho);
        case LimitKind::CornerY:
            return kappa_limit_cornerY(m, combo, law.rho);
    }
    throw std::invalid_argument("kappa_limit: unknown kind");
}

double cf_product_normal(double u) { return 1.0 / std::sqrt(1.0 + u * u); }

PathEnsemble sample_fbm(double H, int n_steps, double horizon, int n_paths,
                        std::uint64_t seed) {
    if (!(H > 0.0 && H < 1.0)) throw std::domain_error("sample_fbm: H must lie in (0, 1)");
    if (n_steps < 2 || (n_steps & (n_steps - 1)) != 0)
        throw std::invalid_argument("sample_fbm: n_steps must be a power of two >= 2");
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_fbm: horizon must be positive");
    if (n_paths < 1) throw std::invalid_argument("sample_fbm: need at least one path");

    const int n = n_steps;
    const int M = 2 * n;
    const double dt = horizon / n;
    // increment (fractional Gaussian noise) autocovariance
    auto g = [H, dt](int k) {
        const double ka = std::abs(static_cast<double>(k));
        return 0.5 * std::pow(dt, 2 * H) *
               (std::pow(ka + 1, 2 * H) - 2 * std::pow(ka, 2 * H) +
                std::pow(std::abs(ka - 1), 2 * H));
    };
    std::vector<std::complex<double>> c(M);
    for (int q = 0; q <= n; ++q) c[q] = g(q);
    for (int q = n + 1; q < M; ++q) c[q] = g(M - q);
    fft_inplace(c, false);

    double max_clip = 0.0;
    std::vector<double> lam(M);
    for (int l = 0; l < M; ++l) {
        double v = c[l].real();
        if (v < 0.0) {
            max_clip = std::max(max_clip, -v);
            v = 0.0;
        }
        lam[l] = v;
    }

    PathEnsemble out;
    out.grid.resize(n + 1);
    for (int k = 0; k <= n; ++k) out.grid[k] = dt * k;
    out.grid[n] = horizon;
    out.paths.assign(n_paths, std::vector<double>(n + 1, 0.0));
    out.meta.label = "fbm";
    out.meta.seed = seed;
    out.meta.fbm_max_clip = max_clip;

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(M));
    std::vector<std::complex<double>> y(M);
    for (int p = 0; p < n_paths; ++p) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p), 2));
        y[0] = std::sqrt(lam[0]) * rng.normal();
        y[n] = std::sqrt(lam[n]) * rng.normal();
        for (int l = 1; l < n; ++l) {
            const double a = rng.normal();
            const double b = rng.normal();
            const double r = std::sqrt(0.5 * lam[l]);
            y[l] = std::complex<double>(r * a, r * b);
            y[M - l] = std::conj(y[l]);
        }
        fft_inplace(y, true);  // unnormalized inverse transform
        auto& path = out.paths[p];
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            acc += y[k].real() * inv_sqrt_m;
            path[k + 1] = acc;
        }
    }
    return out;
}

PathEnsemble sample_limit(const LimitLaw& law, const std::vector<double>& grid,
                          int n_paths, std::uint64_t seed) {
    validate_law(law);
    check_grid(grid);
    if (n_paths < 1) throw std::invalid_argument("sample_limit: need at least one path");
    const int G = static_cast<int>(grid.size());

    PathEnsemble out;
    out.grid = grid;
    out.paths.assign(n_paths, std::vector<double>(G, 0.0));
    out.meta.seed = seed;

    switch (law.kind) {
        case LimitKind::BrownianMotion: {
            out.meta.label = "brownian";
            for (int p = 0; p < n_paths; ++p) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p), 1));
                auto& path = out.paths[p];
                for (int k = 1; k < G; ++k)
                    path[k] = path[k - 1] +
                              std::sqrt(grid[k] - grid[k - 1]) * rng.normal();
            }
            break;
        }
        case LimitKind::ProductFbm: {
            out.meta.label = "product-fbm";
            const int n = G - 1;
            if (n > 4096)
                throw std::invalid_argument(
                    "sample_limit: grid too large for the factorizing sampler");
            const double H = law.gamma + 1.5;
            std::vector<double> cov;
            std::vector<double> z(n);
            if (n > 0) {
                cov.resize(static_cast<std::size_t>(n) * n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        cov[i * n + j] = fbm_covariance(H, grid[i + 1], grid[j + 1]);
                cholesky(cov, n);
            }
            for (int p = 0; p < n_paths; ++p) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p), 1));
                const double w = rng.normal();
                for (int k = 0; k < n; ++k) z[k] = rng.normal();
                auto& path = out.paths[p];
                for (int i = 0; i < n; ++i) {
                    double b = 0.0;
                    for (int k = 0; k <= i; ++k) b += cov[i * n + k] * z[k];
                    path[i + 1] = w * b;
                }
            }
            break;
        }
        case LimitKind::CornerX: {
            out.meta.label = "corner-x";
            const double cw = std::sqrt(law.rho);
            const double cb = std::sqrt(1.0 - law.rho);
            for (int p = 0; p < n_paths; ++p) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p), 1));
                const double w = rng.normal();
                auto& path = out.paths[p];
                double b1 = 0.0, b2 = 0.0;
                for (int k = 1; k < G; ++k) {
                    const double sd = std::sqrt(grid[k] - grid[k - 1]);
                    b1 += sd * rng.normal();
                    b2 += sd * rng.normal();
                    path[k] = cw * w * b1 + cb * b2;
                }
            }
            break;
        }
        case LimitKind::CornerY: {
            out.meta.label = "corner-y";
            const double q = 2.0 * std::sqrt(law.rho) / (1.0 + law.rho);
            const double norm = std::sqrt(2.0 * (1.0 + q * q));
            const double a = (1.0 + q) / norm;
            const double b = (q - 1.0) / norm;
            constexpr double inv_sqrt2 = 0.70710678118654752;
            for (int p = 0; p < n_paths; ++p) {
                Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p), 1));
                const double x1 = rng.normal();
                const double x2 = rng.normal();
                const double v = a * (x1 * x1 - 1.0) * inv_sqrt2 +
                                 b * (x2 * x2 - 1.0) * inv_sqrt2;
                auto& path = out.paths[p];
                for (int k = 1; k < G; ++k) path[k] = grid[k] * v;
            }
            break;
        }
    }
    return out;
}

double rate_diag(const ExponentPair& p) {
    if (!(p.g1 > -1.0 && p.g1 < -0.5 && p.g2 > -1.0 && p.g2 < -0.5))
        throw std::domain_error("rate_diag: exponents must lie in (-1, -1/2)");
    const double gap = p.g1 + p.g2 + 1.5;
    if (gap < 0.0)
        throw std::domain_error("rate_diag: pair lies below the diagonal side");
    return std::pow(gap, 1.5);
}

double rate_corner(const ExponentPair& p) {
    validate_interior(p);
    const double gap = p.g1 + p.g2 + 1.5;
    const double rad = 1.0 / (-p.g1 - 0.5) - 1.0 / (p.g2 + 1.0);
    if (rad < 0.0)
        throw std::domain_error("rate_corner: negative radicand (outside the admissible region)");
    const double v = std::pow(gap, 1.5) / (p.g2 + 1.0);
    return v * (1.0 + std::sqrt(rad));
}

double dw_bound_edge(double k3, double k4, double k6) {
    const double inner = 1.0 + k3 * k3 / 6.0 - k4 / 3.0 + k6 / 120.0;
    return std::sqrt(std::max(0.0, inner));
}

double m_statistic(double k3, double k4) { return std::max(std::abs(k3), std::abs(k4)); }

}  // namespace rlab
