#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "roughheat/simd/kernels.hpp"

using namespace roughheat;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

}  // namespace

// The AVX2 variants are written to be bit-identical to the scalar reference
// (same accumulation order, no FMA), so equality here is exact.
TEST_CASE("simd variants match the scalar reference bit for bit") {
    const simd::Kernels* vec = simd::avx2();
    if (!vec) return;  // machine without AVX2: dispatch already covered by scalar
    const simd::Kernels& ref = simd::scalar();

    for (std::size_t n : {1u, 3u, 8u, 63u, 1024u, 4097u}) {
        auto a = random_vec(n, 10 + n);
        auto b = random_vec(n, 20 + n);

        SUBCASE("") {}
        {
            auto x = a, y = a;
            ref.scale_inplace(x.data(), 1.7, n);
            vec->scale_inplace(y.data(), 1.7, n);
            CHECK(x == y);
        }
        {
            std::vector<double> x(n), y(n);
            ref.mul(x.data(), a.data(), b.data(), n);
            vec->mul(y.data(), a.data(), b.data(), n);
            CHECK(x == y);
        }
        {
            auto x = a, y = a;
            ref.axpby(x.data(), 0.3, b.data(), -1.2, n);
            vec->axpby(y.data(), 0.3, b.data(), -1.2, n);
            CHECK(x == y);
        }
        CHECK(ref.max_abs(a.data(), n) == vec->max_abs(a.data(), n));
        CHECK(ref.max_abs_diff(a.data(), b.data(), n) == vec->max_abs_diff(a.data(), b.data(), n));
        CHECK(ref.sum(a.data(), n) == vec->sum(a.data(), n));
        {
            auto absf = a;
            auto absx = b;
            for (double& v : absf) v = std::fabs(v);
            for (double& v : absx) v = std::fabs(v);
            CHECK(ref.weighted_moment_sum(absf.data(), absx.data(), 0.37, 0.75, n) ==
                  vec->weighted_moment_sum(absf.data(), absx.data(), 0.37, 0.75, n));
            CHECK(ref.weighted_moment_sum(absf.data(), absx.data(), 0.37, 0.0, n) ==
                  vec->weighted_moment_sum(absf.data(), absx.data(), 0.37, 0.0, n));
        }
        {
            // interleaved complex kernels
            auto c1 = random_vec(2 * n, 30 + n);
            auto c2 = c1;
            auto m = random_vec(n, 40 + n);
            ref.cmul_real(c1.data(), m.data(), n);
            vec->cmul_real(c2.data(), m.data(), n);
            CHECK(c1 == c2);
            auto d1 = random_vec(2 * n, 50 + n);
            auto d2 = d1;
            auto mi = random_vec(n, 60 + n);
            ref.cmul_complex(d1.data(), m.data(), mi.data(), n);
            vec->cmul_complex(d2.data(), m.data(), mi.data(), n);
            CHECK(d1 == d2);
        }
    }
}

TEST_CASE("scalar kernels compute what they claim") {
    const simd::Kernels& k = simd::scalar();
    std::vector<double> a = {1.0, -2.0, 3.0, -4.0, 5.0};
    CHECK(k.max_abs(a.data(), a.size()) == 5.0);
    CHECK(k.sum(a.data(), a.size()) == doctest::Approx(3.0));
    std::vector<double> b = {1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(k.max_abs_diff(a.data(), b.data(), a.size()) == 5.0);
    std::vector<double> y = {1.0, 2.0};
    std::vector<double> x = {10.0, 20.0};
    k.axpby(y.data(), 2.0, x.data(), 3.0, 2);
    CHECK(y[0] == 23.0);
    CHECK(y[1] == 46.0);
}
