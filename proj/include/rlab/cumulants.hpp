#pragma once
// Joint cumulants of the two-parameter Rosenblatt field, evaluated from the
// circular-integral representation: the m-th cumulant of a linear combination
// sum_i c_i Z(t_i) expands over words sigma in {1,2}^m and multi-indices of
// time points, each cell contributing a box integral of a product of factors
//
//   (s_j - s_{j-1})_+^{e_j} * Bf_j + (s_{j-1} - s_j)_+^{e_j} * Bb_j
//
// with cyclic index arithmetic (s_0 == s_m).  The exponents e_j depend only on
// whether the word repeats or alternates at position j, and the Bf/Bb weights
// are Beta factors.  Cells are estimated by randomized quasi Monte Carlo with
// a sequential importance sampler that absorbs every singular factor except
// the tamest one, which is kept as the closing weight.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/exponents.hpp"

namespace rlab {

// Thrown when a request is structurally too expensive (budget below the
// floor, too many time points for a high order, total draw count over the
// cap) rather than mathematically invalid.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// A word sigma in {1,2}^m, stored little-endian in bits: bit j == 0 means
// sigma_{j+1} = 1, bit j == 1 means sigma_{j+1} = 2.
class SigmaWord {
  public:
    SigmaWord(std::uint32_t bits, int m);

    int length() const { return m_; }
    // Label at position j (0-based), returns 1 or 2.
    int label(int j) const;
    SigmaWord complement() const;  // swap labels 1 <-> 2
    // Number of positions j (cyclic) with sigma_j != sigma_{j-1}.
    int alternations() const;
    // Number of positions j (cyclic) where sigma_j = 1 and the previous
    // label's complement is also 1 (i.e. sigma_j = 1, sigma_{j-1} = 2).
    int r_count() const;
    std::uint32_t bits() const { return bits_; }

  private:
    std::uint32_t bits_;
    int m_;
};

// Exact count of words sigma in {1,2}^m whose r_count equals r; equals
// 2 * binomial(m, 2r).  Throws std::out_of_range unless m >= 1 and
// 0 <= 2r <= m.
std::uint64_t sigma_word_count(int m, int r);

// Parameters of a circular integral over the box prod_j [0, times[j]] of
// prod_j |s_j - s_{j-1}|^{alphas[j]} with s_0 = s_m.
struct CircularExponents {
    std::vector<double> alphas;  // one exponent per factor
    std::vector<double> times;   // box edge lengths, all > 0
};

// True iff the circular integral converges absolutely by the elementary
// sufficient condition: every alphas[j] > -1 and sum(alphas) + m > 1.
bool domain_check(const CircularExponents& e);

// Outcome of the power-counting criterion below.  VerifiedFinite means every
// independent subset passed the strict inequality; Unverified means at least
// one failed (the integral may still converge conditionally, but the
// criterion cannot certify it).
enum class FinitenessVerdict { VerifiedFinite, Unverified };

// Power-counting finiteness check for the circular integrand.  The factor
// directions w_j = u_j - u_{j-1} (cyclic, u = standard basis) are collected
// into a set T; for every linearly independent subset W of T the criterion
// requires |W| + sum of alphas[j] over factors whose direction lies in
// span(W) to be strictly positive.  Rank computations use fraction-free
// integer elimination, so independence is decided exactly.  Requires
// 2 <= m <= 12.
FinitenessVerdict power_counting_check(const CircularExponents& e);

// Result of a randomized-QMC quadrature: point estimate, standard error from
// independent randomization batches, total draw count, and a convergence flag
// (false when std_error exceeds 5% of |value|).
struct QuadratureResult {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    bool converged = true;
};

// Circular integral over the box, via the cell estimator with unit forward
// and backward weights.  Throws std::domain_error if domain_check fails,
// std::invalid_argument on malformed input, budget_error if budget < 10^4.
QuadratureResult f_circular(const CircularExponents& e,
                            std::int64_t budget = 500000,
                            std::uint64_t seed = 12345);

// The word-and-multi-index sum C_m for the linear combination: every cell is
// an independent QMC task with `budget` draws.  kappa_m multiplies by
// (m-1)!/2 * A^m to produce the joint cumulant of sum_i c_i Z(t_i) under the
// standardized normalization.  jobs >= 1 worker threads; results are
// byte-identical for any jobs value.
QuadratureResult C_m(const ExponentPair& p, const LinearCombo& combo, int m,
                     std::int64_t budget = 2000000, std::uint64_t seed = 12345,
                     int jobs = 1);
QuadratureResult kappa_m(const ExponentPair& p, const LinearCombo& combo,
                         int m, std::int64_t budget = 2000000,
                         std::uint64_t seed = 12345, int jobs = 1);

// Pairing of the alternating circular integral f(a,b,a,b,...) against its
// separable small-(a, b+1) approximation
//   (b+1)^{-m/2} * prod over pairs (2 min(t_{2k-1}, t_{2k})).
// Returns the QMC estimate of the integral and the closed-form right side.
struct AsymptoticCheck {
    QuadratureResult lhs;
    double rhs = 0.0;
};
AsymptoticCheck f_ab_asymptotic_check(double a, double b,
                                      const std::vector<double>& times,
                                      std::int64_t budget = 500000,
                                      std::uint64_t seed = 12345);

// Closed-form approximation of kappa_m near the corner where both indices
// approach -1/2: (m-1)! (sum_i c_i t_i)^m  sum_r binom(m, 2r) U(r) with
//   U(r) = d1^{-r} d2^{-r} d12^{-(m-2r)} / (d12^{-2} + (d1 d2)^{-1})^{m/2},
//   d1 = -2 g1 - 1,  d2 = -2 g2 - 1,  d12 = -g1 - g2 - 1.
double kappa_corner2_approx(const ExponentPair& p, const LinearCombo& combo,
                            int m);

}  // namespace rlab
