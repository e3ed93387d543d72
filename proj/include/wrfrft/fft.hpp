#pragma once

#include <complex>
#include <span>

namespace wrfrft::fft {

using cdouble = std::complex<double>;

// Unnormalized in-place DFT. sign = -1 is forward, +1 inverse.
// Plans are cached per (n, sign); execution is thread-safe.
void transform(std::span<cdouble> data, int sign = -1);

/// Unitary DFT on the centered index grid m, k in {0..n-1} - (n-1)/2:
/// X_k = n^{-1/2} sum_m x_m exp(sign * j 2 pi (k-c)(m-c) / n).
void centered_dft(std::span<cdouble> data, int sign = -1);

}  // namespace wrfrft::fft
