#pragma once
// Sample-side estimators used to compare simulated ensembles against the
// analytic predictions: unbiased low-order cumulant estimates (k-statistics)
// with jackknife standard errors, the empirical characteristic function, the
// one-dimensional Wasserstein-1 distance, and log-log slope extraction.

#include <vector>

namespace rlab {

struct SampleStats {
    double k2 = 0.0, k3 = 0.0, k4 = 0.0, k6 = 0.0;  // cumulant estimates
    double se2 = 0.0, se3 = 0.0, se4 = 0.0, se6 = 0.0;  // jackknife SEs
    long long n = 0;
};

// Unbiased k-statistics through order 4 plus a central-moment-based sixth
// cumulant (bias O(1/n)); standard errors by delete-block jackknife over
// min(32, n) near-equal blocks.  Requires n >= 8.
SampleStats k_statistics(const std::vector<double>& sample);

struct CfEstimate {
    double re = 0.0;  // mean cos(u x)
    double im = 0.0;  // mean sin(u x)
    double se = 0.0;  // sqrt((Var cos + Var sin) / n)
};

// Empirical characteristic function at frequency u.  Requires n >= 1.
CfEstimate empirical_cf(const std::vector<double>& sample, double u);

// Empirical Wasserstein-1 distance between two one-dimensional samples:
// the quantile-function L1 distance, which for equal lengths is the mean
// absolute difference of the sorted samples.  Unequal lengths are handled
// exactly through the merged quantile grid (no resampling noise).
double wasserstein1(const std::vector<double>& a, const std::vector<double>& b);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;  // OLS standard error of the slope
};

// Least-squares slope of log y against log x.  Requires >= 3 points, all
// positive; throws std::domain_error on nonpositive values.
SlopeFit loglog_slope(const std::vector<double>& xs,
                      const std::vector<double>& ys);

}  // namespace rlab
