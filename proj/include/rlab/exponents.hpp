#pragma once
// Parameter domain of the generalized Rosenblatt process: the open triangle
//   -1 < g1 < -1/2,  -1 < g2 < -1/2,  g1 + g2 > -3/2,
// the variance-normalization constant, closed-form low moments of the
// standardized process at t = 1, the cross-parameter covariance, and a
// boundary classifier used by the sweep tooling.

#include <vector>

namespace rlab {

// Points closer than this to the triangle boundary are rejected by operations
// that require a strict interior point: the beta factors degenerate there and
// quadrature loses all accuracy.
inline constexpr double kBoundaryEps = 1e-9;

struct ExponentPair {
  double g1 = 0.0;
  double g2 = 0.0;
};

// All three strict inequalities, with an optional safety margin
// (margin > 0 shrinks the admissible region by that amount per constraint).
bool in_triangle(const ExponentPair& p, double margin = 0.0);

// Throws std::domain_error unless p is interior with margin kBoundaryEps.
void validate_interior(const ExponentPair& p);

// Self-similarity index H = g1 + g2 + 2, in (1/2, 1) on the interior.
double hurst(const ExponentPair& p);

// One term of a finite linear combination  sum_i c_i Z(t_i).
struct WeightedTime {
  double c = 0.0;  // coefficient
  double t = 0.0;  // time, >= 0
};
using LinearCombo = std::vector<WeightedTime>;

void validate_combo(const LinearCombo& combo);  // nonempty, finite, t >= 0

// Variance-normalization constant A(g1, g2) > 0: the positive root that makes
// Var[Z(1)] = 1.  Symmetric in (g1, g2); tends to 0 toward the diagonal edge.
double normalization_A(const ExponentPair& p);

// Second moment of Z(1) when the kernel is scaled by the supplied constant a
// instead of the canonical A.  mu2_raw(p, normalization_A(p)) == 1.
double mu2_raw(const ExponentPair& p, double a);

// Third cumulant of the standardized Z(1) (closed form, 8-term word sum).
double mu3(const ExponentPair& p);

// E[Z_a(1) Z_g(1)] for two standardized processes driven by the same noise,
// with parameters a and g.  Equals 1 at a == g; <= 1 by Cauchy-Schwarz.
double cross_covariance(const ExponentPair& a, const ExponentPair& g);

// ---- boundary classification -------------------------------------------

enum class BoundaryKind {
  DiagonalD,       // g1 + g2 = -3/2
  EdgeE1,          // g1 = -1/2, g2 interior
  EdgeE2,          // g2 = -1/2, g1 interior
  CornerHalfOne,   // (-1/2, -1)  (or its mirror (-1, -1/2))
  CornerHalfHalf,  // (-1/2, -1/2)
};

struct BoundaryTarget {
  BoundaryKind kind = BoundaryKind::DiagonalD;
  // EdgeE1/EdgeE2: the coordinate that stays interior (the limit parameter).
  double gamma = 0.0;
  // Corner targets: direction parameter rho in [0,1] (clamped).
  double rho = 0.0;
};

struct BoundaryClassification {
  BoundaryTarget target;
  double distance = 0.0;     // Euclidean distance to the feature
  // Direction ratios reported for every point (meaningful near the corners):
  double rho_corner1 = 0.0;  // (g1+g2+3/2)/(g2+1)   [corner (-1/2,-1)]
  double rho_corner2 = 0.0;  // (g1+1/2)/(g2+1/2)    [corner (-1/2,-1/2)]
};

// Nearest boundary feature of an interior point.  Corner zones have radius
// 0.1 and beat edges on ties; the mirror corner (-1, -1/2) is reported as
// CornerHalfOne with the ratio computed in swapped coordinates.
BoundaryClassification classify_boundary(const ExponentPair& p);

}  // namespace rlab
