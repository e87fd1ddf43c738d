#include "roughheat/simd/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace roughheat::simd {

namespace {

void scale_inplace_scalar(double* x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void cmul_real_scalar(double* c, const double* m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        c[2 * i] *= m[i];
        c[2 * i + 1] *= m[i];
    }
}

void cmul_complex_scalar(double* c, const double* mre, const double* mim, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = c[2 * i];
        const double im = c[2 * i + 1];
        c[2 * i] = re * mre[i] - im * mim[i];
        c[2 * i + 1] = re * mim[i] + im * mre[i];
    }
}

void mul_scalar(double* dst, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void axpby_scalar(double* y, double alpha, const double* x, double beta, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

// 4-lane blocked accumulation; the AVX2 variant reduces its lanes in the same
// order, so both paths return the same bits.
double sum_scalar(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc[0] += x[i];
        acc[1] += x[i + 1];
        acc[2] += x[i + 2];
        acc[3] += x[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

// (d)^(3/4) = sqrt(d * sqrt(d)) for d >= 0
inline double pow34(double d) { return std::sqrt(d * std::sqrt(d)); }

double weighted_moment_sum_scalar(const double* absf, const double* absx1, double sqx2,
                                  double alpha, std::size_t n) {
    if (alpha == 0.0) return sum_scalar(absf, n);
    if (alpha == 0.75) {
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            acc[0] += pow34(absx1[i] + sqx2) * absf[i];
            acc[1] += pow34(absx1[i + 1] + sqx2) * absf[i + 1];
            acc[2] += pow34(absx1[i + 2] + sqx2) * absf[i + 2];
            acc[3] += pow34(absx1[i + 3] + sqx2) * absf[i + 3];
        }
        double tail = 0.0;
        for (; i < n; ++i) tail += pow34(absx1[i] + sqx2) * absf[i];
        return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(absx1[i] + sqx2, alpha) * absf[i];
    return s;
}

const Kernels kScalar = {
    scale_inplace_scalar, cmul_real_scalar, cmul_complex_scalar, mul_scalar,
    axpby_scalar,         max_abs_scalar,   max_abs_diff_scalar, sum_scalar,
    weighted_moment_sum_scalar, "scalar",
};

const Kernels* pick_active() {
    const char* env = std::getenv("ROUGHHEAT_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
    const Kernels* a = avx2();
    if (env && std::strcmp(env, "avx2") == 0) return a ? a : &kScalar;
    return a ? a : &kScalar;
}

}  // namespace

const Kernels& scalar() { return kScalar; }

#if !defined(ROUGHHEAT_HAVE_AVX2_TU)
const Kernels* avx2() { return nullptr; }
#endif

const Kernels& active() {
    static const Kernels* chosen = pick_active();
    return *chosen;
}

}  // namespace roughheat::simd
