#include "rlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlab/special_functions.hpp"

namespace rlab {

bool in_triangle(const ExponentPair& p, double margin) {
  // margin is per-constraint slack in coordinate units (the diagonal uses the
  // raw sum inequality, not perpendicular distance).
  return p.g1 > -1.0 + margin && p.g1 < -0.5 - margin && p.g2 > -1.0 + margin &&
         p.g2 < -0.5 - margin && p.g1 + p.g2 > -1.5 + margin;
}

void validate_interior(const ExponentPair& p) {
  if (!in_triangle(p, kBoundaryEps))
    throw std::domain_error(
        "exponent pair outside the admissible open triangle "
        "(-1 < g < -1/2 each, g1+g2 > -3/2)");
}

double hurst(const ExponentPair& p) { return p.g1 + p.g2 + 2.0; }

void validate_combo(const LinearCombo& combo) {
  if (combo.empty()) throw std::invalid_argument("linear combination is empty");
  for (const auto& wt : combo) {
    if (!std::isfinite(wt.c) || !std::isfinite(wt.t) || wt.t < 0.0)
      throw std::invalid_argument("linear combination entries must be finite with t >= 0");
  }
}

namespace {

// The bracket shared by the variance formula and the normalization constant:
//   B(g1+1,-s-1) B(g2+1,-s-1) + B(g1+1,-2g1-1) B(g2+1,-2g2-1),  s = g1+g2.
// Each product is formed in log space; the betas blow up like 1/eps near the
// boundary and naive multiplication would overflow long before that.
double variance_bracket(const ExponentPair& p) {
  const double s = p.g1 + p.g2;
  const double cross =
      std::exp(log_beta(p.g1 + 1.0, -s - 1.0) + log_beta(p.g2 + 1.0, -s - 1.0));
  const double same = std::exp(log_beta(p.g1 + 1.0, -2.0 * p.g1 - 1.0) +
                               log_beta(p.g2 + 1.0, -2.0 * p.g2 - 1.0));
  return cross + same;
}

}  // namespace

double normalization_A(const ExponentPair& p) {
  validate_interior(p);
  const double s = p.g1 + p.g2;
  const double pref = (s + 2.0) * (2.0 * s + 3.0);  // H * (2(g1+g2)+3)
  return std::sqrt(pref / variance_bracket(p));
}

double mu2_raw(const ExponentPair& p, double a) {
  validate_interior(p);
  const double s = p.g1 + p.g2;
  return a * a / ((s + 2.0) * (2.0 * s + 3.0)) * variance_bracket(p);
}

double mu3(const ExponentPair& p) {
  validate_interior(p);
  const double g[2] = {p.g1, p.g2};
  double sum = 0.0;
  // sigma runs over {1,2}^3, encoded in the bits of w; sigma' is the complement.
  for (int w = 0; w < 8; ++w) {
    const int s1 = (w >> 0) & 1, s2 = (w >> 1) & 1, s3 = (w >> 2) & 1;
    const int c1 = 1 - s1, c2 = 1 - s2, c3 = 1 - s3;
    const double lb = log_beta(g[s1] + 1.0, -g[s1] - g[c3] - 1.0) +
                      log_beta(g[c1] + 1.0, -g[c1] - g[s2] - 1.0) +
                      log_beta(g[c2] + 1.0, -g[c2] - g[s3] - 1.0) +
                      log_beta(g[c1] + g[s2] + 2.0, g[c2] + g[s3] + 2.0);
    sum += std::exp(lb);
  }
  const double s = p.g1 + p.g2;
  const double A = normalization_A(p);
  return 2.0 * A * A * A / ((s + 2.0) * (3.0 * s + 5.0)) * sum;
}

double cross_covariance(const ExponentPair& a, const ExponentPair& g) {
  validate_interior(a);
  validate_interior(g);
  const double S = a.g1 + a.g2 + g.g1 + g.g2;
  double bracket =
      std::exp(log_beta(a.g1 + 1.0, -a.g1 - g.g1 - 1.0) +
               log_beta(a.g2 + 1.0, -a.g2 - g.g2 - 1.0)) +
      std::exp(log_beta(g.g1 + 1.0, -a.g1 - g.g1 - 1.0) +
               log_beta(g.g2 + 1.0, -a.g2 - g.g2 - 1.0)) +
      std::exp(log_beta(a.g2 + 1.0, -a.g2 - g.g1 - 1.0) +
               log_beta(a.g1 + 1.0, -a.g1 - g.g2 - 1.0)) +
      std::exp(log_beta(g.g1 + 1.0, -a.g2 - g.g1 - 1.0) +
               log_beta(g.g2 + 1.0, -a.g1 - g.g2 - 1.0));
  return normalization_A(a) * normalization_A(g) / ((S + 3.0) * (S + 4.0)) * bracket;
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

BoundaryClassification classify_boundary(const ExponentPair& p) {
  BoundaryClassification out;
  out.rho_corner1 = (p.g1 + p.g2 + 1.5) / (p.g2 + 1.0);
  out.rho_corner2 = (p.g1 + 0.5) / (p.g2 + 0.5);

  const double dx1 = p.g1 + 0.5, dy1 = p.g2 + 1.0;   // to (-1/2, -1)
  const double dx1m = p.g1 + 1.0, dy1m = p.g2 + 0.5; // to (-1, -1/2), mirror
  const double dx2 = p.g1 + 0.5, dy2 = p.g2 + 0.5;   // to (-1/2, -1/2)
  const double d_c1 = std::hypot(dx1, dy1);
  const double d_c1m = std::hypot(dx1m, dy1m);
  const double d_c2 = std::hypot(dx2, dy2);

  constexpr double kCornerZone = 0.1;  // corner wins over edges inside this radius
  const double d_cmin = std::min({d_c1, d_c1m, d_c2});
  if (d_cmin <= kCornerZone) {
    if (d_c2 <= d_c1 && d_c2 <= d_c1m) {
      double r = out.rho_corner2;
      out.target = {BoundaryKind::CornerHalfHalf, 0.0,
                    clamp01(r <= 1.0 ? r : 1.0 / r)};
      out.distance = d_c2;
    } else if (d_c1 <= d_c1m) {
      out.target = {BoundaryKind::CornerHalfOne, 0.0, clamp01(out.rho_corner1)};
      out.distance = d_c1;
    } else {
      // mirror corner (-1,-1/2): same limit family with coordinates swapped
      out.target = {BoundaryKind::CornerHalfOne, 0.0,
                    clamp01((p.g1 + p.g2 + 1.5) / (p.g1 + 1.0))};
      out.distance = d_c1m;
    }
    return out;
  }

  const double d_e1 = std::abs(p.g1 + 0.5);
  const double d_e2 = std::abs(p.g2 + 0.5);
  const double d_d = std::abs(p.g1 + p.g2 + 1.5) / std::sqrt(2.0);
  if (d_d <= d_e1 && d_d <= d_e2) {
    out.target = {BoundaryKind::DiagonalD, 0.0, 0.0};
    out.distance = d_d;
  } else if (d_e1 <= d_e2) {
    out.target = {BoundaryKind::EdgeE1, p.g2, 0.0};
    out.distance = d_e1;
  } else {
    out.target = {BoundaryKind::EdgeE2, p.g1, 0.0};
    out.distance = d_e2;
  }
  return out;
}

}  // namespace rlab
