#pragma once
// Lattice simulator for the generalized Rosenblatt process: normalized
// partial sums of the product of two long-memory linear (moving-average)
// series driven by one shared Gaussian noise stream.
//
// Construction per path:
//   Y_g(n)   = sum_{i=2}^{M+1} i^g eps_{n-i}        (truncated at M = trunc)
//   Z(t_k)   = A * N^{-H} * sum_{n<=N t_k} [ Y_{g1}(n) Y_{g2}(n) - mu12 ]
// with N = n_grid, mu12 the exact infinite-sum product mean, and a final
// empirical rescale to unit ensemble variance at t = 1.  The truncated tail
// (lags i > M+1) is reinstated as a per-path pair of frozen correlated
// Gaussian offsets with the exact tail covariance, so the product mean mu12
// stays exact under truncation.

#include <cstdint>
#include <vector>

#include "rlab/exponents.hpp"
#include "rlab/paths.hpp"

namespace rlab {

struct LatticeConfig {
    int n_grid = 256;    // grid points per unit time (power of two, >= 256)
    int trunc = 4096;    // moving-average truncation length M (>= 16 * n_grid)
    int n_paths = 1;
    std::uint64_t seed = 12345;
};

// Throws std::invalid_argument on a config violating the field constraints.
void validate_config(const LatticeConfig& cfg);

// Moving-average coefficients (i^gamma) for i = 2 .. length+1.
// gamma must lie in (-1, -1/2); length >= 2.
std::vector<double> linear_coeffs(double gamma, int length);

struct LinearPair {
    std::vector<double> y1, y2;
};

// Two stationary series of the given length driven by the SAME noise stream
// (the product structure of the process needs this coupling), computed by one
// FFT convolution with both coefficient vectors packed into a complex signal.
// Includes the frozen-tail augmentation described above.
LinearPair gen_linear_pair(double gamma1, double gamma2, int length, int trunc,
                           std::uint64_t seed);

// Simulated ensemble on the uniform grid {0, 1/N, ..., horizon}.
// Requires an interior exponent pair and horizon * n_grid integral.
// jobs > 1 distributes paths across threads; the result is byte-identical
// regardless of jobs (per-path substreams, deterministic assembly).
PathEnsemble simulate_paths(const ExponentPair& p, double horizon,
                            const LatticeConfig& cfg, int jobs = 1);

// Discretized kernel (([Ns]-[Nx]+1)/N)^gamma for [Ns] > [Nx], else 0.
double discrete_kernel(double s, double x, int N, double gamma);

}  // namespace rlab
