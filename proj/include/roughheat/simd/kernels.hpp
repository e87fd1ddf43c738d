#pragma once

#include <cstddef>
#include <string>

namespace roughheat::simd {

/// Flat kernel table for the arithmetic inner loops shared by the spectral
/// calculus (multiplier application, pointwise field algebra, reductions).
/// Every entry has a scalar reference implementation and, on machines with
/// AVX2, a vectorized variant selected once at startup.  Both paths are
/// written to produce bit-identical results (same accumulation order, no FMA)
/// so the equivalence tests can assert exact equality.
struct Kernels {
    /// x[i] *= s
    void (*scale_inplace)(double* x, double s, std::size_t n);
    /// interleaved complex c (length 2n) : c[i] *= m[i] with real m (length n)
    void (*cmul_real)(double* c, const double* m, std::size_t n);
    /// interleaved complex c (length 2n) : c[i] *= (mre[i] + i*mim[i])
    void (*cmul_complex)(double* c, const double* mre, const double* mim, std::size_t n);
    /// dst[i] = a[i] * b[i]
    void (*mul)(double* dst, const double* a, const double* b, std::size_t n);
    /// y[i] = alpha * x[i] + beta * y[i]
    void (*axpby)(double* y, double alpha, const double* x, double beta, std::size_t n);
    /// max_i |x[i]|
    double (*max_abs)(const double* x, std::size_t n);
    /// max_i |a[i] - b[i]|
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    /// sum_i x[i] (4-lane blocked accumulation in both variants)
    double (*sum)(const double* x, std::size_t n);
    /// sum_i (absx1[i] + sqx2)^alpha * absf[i]; fast path for alpha in {0, 3/4}
    double (*weighted_moment_sum)(const double* absf, const double* absx1, double sqx2,
                                  double alpha, std::size_t n);

    const char* name;
};

/// Kernel table chosen at startup (ROUGHHEAT_SIMD=scalar|avx2|auto overrides).
const Kernels& active();

/// Reference table, always available.
const Kernels& scalar();

/// AVX2 table; null when unsupported by the build or the CPU.
const Kernels* avx2();

}  // namespace roughheat::simd
