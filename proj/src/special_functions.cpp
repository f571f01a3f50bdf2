#include "rlab/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab {

namespace {

// Lanczos approximation, g = 7, 9 coefficients (the widely used double-precision
// set).  Valid for x >= 0.5; reflection handles (0, 0.5).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;  // ln(2*pi)/2

double log_gamma_lanczos(double x) {
  // x >= 0.5 here
  double z = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + i);
  double base = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double log_beta(double x, double y) {
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta_fn: arguments must be > 0");
  // Near the pole B(a,b) = 1/a - psi(b) - euler_gamma + O(a); for a < 1e-8 the
  // 1/a term dominates to ~1e-8 relative and is free of cancellation.
  if (x < 1e-8 && y < 1e-8) return 1.0 / x + 1.0 / y;
  if (x < 1e-8) return 1.0 / x;
  if (y < 1e-8) return 1.0 / y;
  return std::exp(log_beta(x, y));
}

double power_tail_sum(double gamma, long start) {
  if (!(gamma < -1.0))
    throw std::domain_error("power_tail_sum: divergent for gamma >= -1");
  if (start < 1) throw std::domain_error("power_tail_sum: start must be >= 1");
  const long cutoff = start > 10000 ? start : 10000;  // first index of the tail
  double s = 0.0;
  for (long i = cutoff - 1; i >= start; --i)  // ascending magnitude
    s += std::pow(static_cast<double>(i), gamma);
  // Euler-Maclaurin from K = cutoff:
  //   sum_{i>=K} f(i) = int_K^inf f + f(K)/2 - f'(K)/12 + f'''(K)/720 - ...
  const double K = static_cast<double>(cutoff);
  const double fK = std::pow(K, gamma);
  double tail = -fK * K / (gamma + 1.0)      // integral
                + 0.5 * fK                   // f(K)/2
                - gamma * fK / K / 12.0      // f'(K)/12
                + gamma * (gamma - 1.0) * (gamma - 2.0) * fK / (K * K * K) / 720.0;
  return s + tail;
}

}  // namespace rlab
