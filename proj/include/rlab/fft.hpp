#pragma once
// Minimal FFTW3 front-end: unnormalized in-place complex transforms with a
// process-wide plan cache.  Plan creation is serialized (FFTW requirement);
// execution uses the new-array interface and is safe from multiple threads.

#include <complex>
#include <vector>

namespace rlab {

// Forward (sign -1) or inverse (sign +1) DFT of data, in place, unnormalized
// (inverse(forward(x)) == n * x, FFTW convention).
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace rlab
