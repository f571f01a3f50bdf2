#pragma once
// Deterministic random-number plumbing.
//
// Everything stochastic in this library flows through substreams derived from
// (seed, tag_a, tag_b) triples, so results are byte-identical regardless of
// how work is scheduled across threads.  We deliberately avoid
// std::normal_distribution / std::uniform_real_distribution: their output
// sequences are implementation-defined, which would silently break the
// reproducibility contract across standard libraries.  mt19937_64 itself is
// fully specified, so it is a safe engine.

#include <cstdint>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace rlab {

// splitmix64 finalizer (Steele-Lea-Flood constants).  Good avalanche, cheap.
inline std::uint64_t sm64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent substream seed from a base seed and two tags
// (e.g. (cell index, batch) or (path index, purpose)).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return sm64(sm64(sm64(seed) ^ a) ^ b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on the open interval (0,1): top 53 bits, offset by half an ulp,
  // so log(u01()) is always finite.
  double u01() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

  // Standard normal via Box-Muller (pair cached).  Hand-rolled for the
  // cross-platform determinism noted above.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    double r = std::sqrt(-2.0 * std::log(u01()));
    double a = two_pi * u01();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One dimension of a Halton sequence: base-b radical inverse, generated
// incrementally (digit counter with carries), amortized O(1) per point.
// Starts at index 0 (value 0); call next() to advance.
class HaltonDim {
 public:
  explicit HaltonDim(unsigned base) : base_(base), inv_(1.0 / base) {
    if (base < 2) throw std::invalid_argument("HaltonDim: base must be >= 2");
  }

  double next() {
    std::size_t i = 0;
    double place = inv_;
    while (i < digits_.size() && digits_[i] + 1 == base_) {
      value_ -= digits_[i] * place;  // digit wraps to 0
      digits_[i] = 0;
      place *= inv_;
      ++i;
    }
    if (i == digits_.size()) digits_.push_back(0);
    digits_[i] += 1;
    value_ += place;
    return value_;
  }

 private:
  unsigned base_;
  double inv_;
  double value_ = 0.0;
  std::vector<unsigned> digits_;
};

// First few primes, used as Halton bases (one per integration coordinate).
inline constexpr int kMaxHaltonDims = 12;
inline constexpr unsigned kHaltonPrimes[kMaxHaltonDims] = {2,  3,  5,  7,  11, 13,
                                                           17, 19, 23, 29, 31, 37};

}  // namespace rlab
