#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "rlab/exponents.hpp"
#include "rlab/rng.hpp"

using namespace rlab;

namespace {

// Uniform interior point with a safety margin from the boundary.
ExponentPair random_interior(Rng& rng, double margin) {
  for (;;) {
    ExponentPair p{-1.0 + 0.5 * rng.u01(), -1.0 + 0.5 * rng.u01()};
    if (in_triangle(p, margin)) return p;
  }
}

}  // namespace

TEST_CASE("in_triangle membership") {
  CHECK(in_triangle({-0.7, -0.7}));
  CHECK_FALSE(in_triangle({-0.75, -0.75}));  // vertex of the diagonal is excluded
  CHECK_FALSE(in_triangle({-0.4, -0.7}));    // g1 >= -1/2
  CHECK_FALSE(in_triangle({-0.5, -0.7}));    // open boundary
  CHECK_FALSE(in_triangle({-1.0, -0.6}));
  CHECK_FALSE(in_triangle({-0.55, -0.95}));  // lies exactly on g1+g2 = -3/2
  CHECK(in_triangle({-0.55, -0.93}));
  CHECK_FALSE(in_triangle({-0.7, -0.7}, 0.25));  // margin shrinks the region
}

TEST_CASE("hurst index") {
  CHECK(hurst({-0.7, -0.7}) == doctest::Approx(0.6).epsilon(1e-15));
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    ExponentPair p = random_interior(rng, 1e-6);
    double H = hurst(p);
    CHECK(H > 0.5);
    CHECK(H < 1.0);
  }
}

TEST_CASE("normalization_A frozen values and symmetry") {
  CHECK(normalization_A({-0.7, -0.7}) == doctest::Approx(oracle::A_77).epsilon(1e-11));
  CHECK(normalization_A({-0.6, -0.8}) == doctest::Approx(oracle::A_68).epsilon(1e-11));
  CHECK(normalization_A({-0.501, -0.7}) == doctest::Approx(oracle::A_5017).epsilon(1e-11));
  CHECK(normalization_A({-0.505, -0.505}) ==
        doctest::Approx(oracle::A_505505).epsilon(1e-11));
  CHECK(normalization_A({-0.7, -0.65}) == doctest::Approx(oracle::A_765).epsilon(1e-11));
  CHECK(normalization_A({-0.7, -0.6}) ==
        doctest::Approx(normalization_A({-0.6, -0.7})).epsilon(1e-13));
  // A shrinks toward the diagonal boundary
  CHECK(normalization_A({-0.74, -0.74}) < normalization_A({-0.7, -0.7}));
  CHECK_THROWS_AS(normalization_A({-0.4, -0.7}), std::domain_error);
  CHECK_THROWS_AS(normalization_A({-0.55, -0.95}), std::domain_error);
}

TEST_CASE("edge scaling of the normalization constant") {
  // A^2/(-2 g1 - 1) approaches (2g+3)(g+1)/B(g+1,-2g-1) as g1 -> -1/2
  double A = normalization_A({-0.501, -0.7});
  double lhs = A * A / (-2.0 * -0.501 - 1.0);
  CHECK(lhs == doctest::Approx(oracle::A2_over_gap_5017).epsilon(1e-10));
  CHECK(std::abs(lhs / oracle::sigma2_07 - 1.0) < 0.05);
}

TEST_CASE("mu2_raw standardization identity") {
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    ExponentPair p = random_interior(rng, 1e-6);
    double A = normalization_A(p);
    CHECK(std::abs(mu2_raw(p, A) - 1.0) <= 1e-9);
    CHECK(mu2_raw(p, 2.0 * A) == doctest::Approx(4.0).epsilon(1e-9));
    // mu2 is proportional to the square of the kernel constant
    CHECK(mu2_raw(p, 1.0) * A * A == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("mu3 frozen values, symmetry, positivity") {
  CHECK(mu3({-0.7, -0.7}) == doctest::Approx(oracle::mu3_77).epsilon(1e-10));
  CHECK(mu3({-0.6, -0.8}) == doctest::Approx(oracle::mu3_68).epsilon(1e-10));
  CHECK(mu3({-0.51, -0.8}) == doctest::Approx(oracle::mu3_518).epsilon(1e-10));
  CHECK(mu3({-0.7, -0.65}) == doctest::Approx(oracle::mu3_765).epsilon(1e-10));
  CHECK(mu3({-0.505, -0.505}) == doctest::Approx(oracle::mu3_505505).epsilon(1e-10));
  CHECK(mu3({-0.501, -0.53}) == doctest::Approx(oracle::mu3_50153).epsilon(1e-10));
  CHECK(mu3({-0.7, -0.6}) == doctest::Approx(mu3({-0.6, -0.7})).epsilon(1e-12));
  Rng rng(9);
  for (int i = 0; i < 50; ++i) CHECK(mu3(random_interior(rng, 1e-4)) > 0.0);
}

TEST_CASE("cross_covariance basics") {
  ExponentPair p{-0.7, -0.65};
  CHECK(cross_covariance(p, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cross_covariance({-0.7, -0.7}, {-0.6, -0.8}) ==
        doctest::Approx(oracle::xcov_77_68).epsilon(1e-10));
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    ExponentPair a = random_interior(rng, 1e-4);
    ExponentPair g = random_interior(rng, 1e-4);
    double v = cross_covariance(a, g);
    CHECK(v == doctest::Approx(cross_covariance(g, a)).epsilon(1e-12));
    CHECK(v <= 1.0 + 1e-9);  // Cauchy-Schwarz for standardized variables
    CHECK(v > 0.0);
  }
}

TEST_CASE("cross_covariance near-boundary limits") {
  const double h = 1e-3, r = 0.25;
  // two points closing on the same edge point (-1/2, -0.7) at speed ratio r
  double edge = cross_covariance({-0.5 - r * h, -0.7}, {-0.5 - h, -0.7});
  CHECK(edge == doctest::Approx(oracle::xcov_edge_r025).epsilon(1e-9));
  CHECK(std::abs(edge - 2.0 * std::sqrt(r) / (1.0 + r)) < 0.02);

  // corner (-1/2,-1), rho = 1 direction (bent interior proxy rays)
  double h15 = std::pow(h, 1.5);
  double c1 = cross_covariance({-0.5 - r * h15, -1.0 + r * h}, {-0.5 - h15, -1.0 + h});
  CHECK(c1 == doctest::Approx(oracle::xcov_corner1_r025).epsilon(1e-9));
  CHECK(std::abs(c1 - 2.0 * std::sqrt(r) / (1.0 + r)) < 0.02);

  // corner (-1/2,-1/2), common direction rho = 0.5, offset ratio r
  const double rho = 0.5, eps = 1e-3;
  double c2 = cross_covariance({-0.5 - r * rho * eps, -0.5 - r * eps},
                               {-0.5 - rho * eps, -0.5 - eps});
  CHECK(c2 == doctest::Approx(oracle::xcov_corner2_r025).epsilon(1e-9));
  CHECK(std::abs(c2 - oracle::xcov_corner2_r025_limit) < 0.05);
}

TEST_CASE("classify_boundary worked examples") {
  {
    auto c = classify_boundary({-0.51, -0.7});
    CHECK(c.target.kind == BoundaryKind::EdgeE1);
    CHECK(c.target.gamma == doctest::Approx(-0.7));
    CHECK(c.distance == doctest::Approx(0.01).epsilon(1e-12));
  }
  {
    auto c = classify_boundary({-0.74, -0.74});
    CHECK(c.target.kind == BoundaryKind::DiagonalD);
    CHECK(c.distance == doctest::Approx(0.02 / std::sqrt(2.0)).epsilon(1e-10));
  }
  {
    auto c = classify_boundary({-0.52, -0.96});
    CHECK(c.target.kind == BoundaryKind::CornerHalfOne);
    CHECK(c.target.rho == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c.rho_corner1 == doctest::Approx(0.5).epsilon(1e-10));
  }
  {
    auto c = classify_boundary({-0.7, -0.51});
    CHECK(c.target.kind == BoundaryKind::EdgeE2);
    CHECK(c.target.gamma == doctest::Approx(-0.7));
  }
  {
    // mirror corner (-1, -1/2): same family, ratio in swapped coordinates
    auto c = classify_boundary({-0.96, -0.52});
    CHECK(c.target.kind == BoundaryKind::CornerHalfOne);
    CHECK(c.target.rho == doctest::Approx(0.5).epsilon(1e-10));
  }
  {
    auto c = classify_boundary({-0.52, -0.53});
    CHECK(c.target.kind == BoundaryKind::CornerHalfHalf);
    // convention: report the ratio folded into [0,1]
    CHECK(c.target.rho == doctest::Approx(0.02 / 0.03).epsilon(1e-10));
    CHECK(c.rho_corner2 == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("combo validation") {
  CHECK_THROWS_AS(validate_combo({}), std::invalid_argument);
  CHECK_THROWS_AS(validate_combo({{1.0, -0.5}}), std::invalid_argument);
  CHECK_NOTHROW(validate_combo({{1.0, 1.0}, {-2.0, 0.5}}));
}
