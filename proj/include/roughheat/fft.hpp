#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace roughheat::fft {

/// In-place radix-2 complex FFT; n must be a power of two.
/// inverse=true applies the conjugate transform and the 1/n normalization.
void transform(std::complex<double>* a, std::size_t n, bool inverse);

/// 2-d transform of a row-major n2 x n1 array (index j2*n1 + j1).
void transform_2d(std::complex<double>* a, std::size_t n1, std::size_t n2, bool inverse);

bool is_pow2(std::size_t n);

}  // namespace roughheat::fft
