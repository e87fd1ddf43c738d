// AVX2 variants of the arithmetic kernels.  Compiled with -mavx2 only; the
// dispatcher checks cpuid before handing this table out.  No FMA is used and
// reductions keep the 4-lane accumulation order of the scalar reference, so
// results match the scalar path bit for bit.

#include "roughheat/simd/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace roughheat::simd {

namespace {

void scale_inplace_avx2(double* x, double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
    for (; i < n; ++i) x[i] *= s;
}

void cmul_real_avx2(double* c, const double* m, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // two complex numbers = 4 doubles; duplicate each multiplier across re/im
        __m128d mp = _mm_loadu_pd(m + i);
        __m256d mm = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mp), 0x50);  // m0 m0 m1 m1
        __m256d cc = _mm256_loadu_pd(c + 2 * i);
        _mm256_storeu_pd(c + 2 * i, _mm256_mul_pd(cc, mm));
    }
    for (; i < n; ++i) {
        c[2 * i] *= m[i];
        c[2 * i + 1] *= m[i];
    }
}

void cmul_complex_avx2(double* c, const double* mre, const double* mim, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d cc = _mm256_loadu_pd(c + 2 * i);  // re0 im0 re1 im1
        __m128d rp = _mm_loadu_pd(mre + i);
        __m128d ip = _mm_loadu_pd(mim + i);
        __m256d rr = _mm256_permute4x64_pd(_mm256_castpd128_pd256(rp), 0x50);
        __m256d ii = _mm256_permute4x64_pd(_mm256_castpd128_pd256(ip), 0x50);
        __m256d swapped = _mm256_permute_pd(cc, 0x5);  // im0 re0 im1 re1
        // (re*mre - im*mim, re*mim + im*mre) via addsub on (re*mre, im*mre) +/- (im*mim, re*mim)
        __m256d t0 = _mm256_mul_pd(cc, rr);
        __m256d t1 = _mm256_mul_pd(swapped, ii);
        _mm256_storeu_pd(c + 2 * i, _mm256_addsub_pd(t0, t1));
    }
    for (; i < n; ++i) {
        const double re = c[2 * i];
        const double im = c[2 * i + 1];
        c[2 * i] = re * mre[i] - im * mim[i];
        c[2 * i + 1] = re * mim[i] + im * mre[i];
    }
}

void mul_avx2(double* dst, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpby_avx2(double* y, double alpha, const double* x, double beta, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                  _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double max_abs_avx2(const double* x, std::size_t n) {
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, abs_pd(_mm256_loadu_pd(x + i)));
    double lanes[4];
    _mm256_storeu_pd(lanes, vm);
    double m = lanes[0];
    for (int l = 1; l < 4; ++l)
        if (lanes[l] > m) m = lanes[l];
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vm = _mm256_max_pd(vm, abs_pd(d));
    }
    double lanes[4];
    _mm256_storeu_pd(lanes, vm);
    double m = lanes[0];
    for (int l = 1; l < 4; ++l)
        if (lanes[l] > m) m = lanes[l];
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

double weighted_moment_sum_avx2(const double* absf, const double* absx1, double sqx2,
                                double alpha, std::size_t n) {
    if (alpha == 0.0) return sum_avx2(absf, n);
    if (alpha == 0.75) {
        const __m256d vx2 = _mm256_set1_pd(sqx2);
        __m256d acc = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            __m256d d = _mm256_add_pd(_mm256_loadu_pd(absx1 + i), vx2);
            __m256d w = _mm256_sqrt_pd(_mm256_mul_pd(d, _mm256_sqrt_pd(d)));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(absf + i)));
        }
        double lanes[4];
        _mm256_storeu_pd(lanes, acc);
        double tail = 0.0;
        for (; i < n; ++i) {
            const double d = absx1[i] + sqx2;
            tail += std::sqrt(d * std::sqrt(d)) * absf[i];
        }
        return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(absx1[i] + sqx2, alpha) * absf[i];
    return s;
}

const Kernels kAvx2 = {
    scale_inplace_avx2, cmul_real_avx2, cmul_complex_avx2, mul_avx2,
    axpby_avx2,         max_abs_avx2,   max_abs_diff_avx2, sum_avx2,
    weighted_moment_sum_avx2, "avx2",
};

}  // namespace

const Kernels* avx2() {
#if defined(__GNUC__)
    if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
    return nullptr;
}

}  // namespace roughheat::simd
