#pragma once
// Boundary limit processes of the admissible triangle: closed-form cumulants,
// the product-normal characteristic function, convergence-rate formulas, and
// exact-in-law samplers for each limit family.
//
// The four families, indexed by where the exponent pair approaches the
// boundary:
//   BrownianMotion         diagonal side (Gaussian limit)
//   ProductFbm(gamma)      edge with the other exponent pinned at -1/2:
//                          W * B_{gamma+3/2}(t), W an independent normal
//   CornerX(rho)           corner (-1/2,-1): sqrt(rho) W B(t) + sqrt(1-rho) B'(t)
//   CornerY(rho)           corner (-1/2,-1/2): t (a_rho X1 + b_rho X2) with
//                          X_i independent standardized chi-square(1)

#include <cstdint>
#include <vector>

#include "rlab/exponents.hpp"
#include "rlab/paths.hpp"

namespace rlab {

enum class LimitKind { BrownianMotion, ProductFbm, CornerX, CornerY };

struct LimitLaw {
    LimitKind kind = LimitKind::BrownianMotion;
    double gamma = -0.75;  // ProductFbm index, in [-1, -1/2)
    double rho = 0.0;      // corner mixing parameter, in [0, 1]

    static LimitLaw brownian();
    static LimitLaw product_fbm(double gamma);
    static LimitLaw corner_x(double rho);
    static LimitLaw corner_y(double rho);
};

// Throws std::domain_error if the law's parameter is out of range.
void validate_law(const LimitLaw& law);

// Standard fractional Brownian motion covariance (unit variance at t=1):
// (|s|^{2H} + |t|^{2H} - |s-t|^{2H}) / 2.  Requires H in (0,1], s,t >= 0.
double fbm_covariance(double H, double s, double t);

// m-th cumulant of sum_i c_i L(t_i) for the edge limit W*B_{gamma+3/2}:
// zero for odd m, (m-1)! * [sum_{ij} c_i c_j Cov(B_H(t_i), B_H(t_j))]^{m/2}
// for even m.  gamma in [-1, -1/2).
double kappa_limit_edge(int m, const LinearCombo& combo, double gamma);

// Non-Gaussian part of the corner (-1/2,-1) limit, m >= 3: zero for odd m,
// rho^{m/2} (m-1)! [sum_{ij} c_i c_j min(t_i,t_j)]^{m/2} for even m.
double kappa_limit_cornerX(int m, const LinearCombo& combo, double rho);

// Corner (-1/2,-1/2) limit: with q = 2 sqrt(rho)/(1+rho),
//   (m-1)!/2 * (sum_i c_i t_i)^m * [(1+q)^m + (q-1)^m] / (1+q^2)^{m/2}.
// The q parameterization is the analytic continuation to rho = 0 (q = 0):
// even m gives (m-1)! (sum c t)^m (product-normal), odd m gives 0, with no
// 1/sqrt(rho) blow-up anywhere.
double kappa_limit_cornerY(int m, const LinearCombo& combo, double rho);

// Dispatcher over the law kinds; handles the Gaussian orders directly
// (BrownianMotion: m=2 variance, 0 beyond; CornerX at m=2 is the Brownian
// variance, the lemma formula applying only from m=3 up).
double kappa_limit(const LimitLaw& law, int m, const LinearCombo& combo);

// Characteristic function of a product of two independent standard normals.
double cf_product_normal(double u);

// Fractional Brownian motion paths on the uniform grid {0, dt, ..., horizon}
// by circulant embedding of the increment covariance (exact in law).  A
// negative circulant eigenvalue (rare, borderline H) is clipped to zero and
// the largest clipped magnitude reported in meta.fbm_max_clip.  n_steps must
// be a power of two; H in (0,1).
PathEnsemble sample_fbm(double H, int n_steps, double horizon, int n_paths,
                        std::uint64_t seed);

// Paths of the given limit law on an arbitrary increasing grid starting at 0.
// Per-path substreams make the ensemble reproducible independent of
// scheduling.  ProductFbm on a non-uniform grid factorizes the fBm covariance
// directly (exact).
PathEnsemble sample_limit(const LimitLaw& law, const std::vector<double>& grid,
                          int n_paths, std::uint64_t seed);

// Total-variation convergence-rate surrogates near the boundary.
double rate_diag(const ExponentPair& p);    // (g1+g2+3/2)^{3/2}
double rate_corner(const ExponentPair& p);  // V (1 + L), see implementation
// sqrt of the clamped fourth/sixth-cumulant deficit 1 + k3^2/6 - k4/3 + k6/120.
double dw_bound_edge(double k3, double k4, double k6);
double m_statistic(double k3, double k4);   // max(|k3|, |k4|)

}  // namespace rlab
