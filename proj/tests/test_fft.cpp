#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "roughheat/fft.hpp"

using namespace roughheat;

TEST_CASE("fft round trip and single-mode spectrum") {
    const std::size_t n = 64;
    std::vector<std::complex<double>> a(n);
    for (std::size_t j = 0; j < n; ++j)
        a[j] = std::cos(2.0 * M_PI * 3.0 * j / n) + 0.5 * std::sin(2.0 * M_PI * 7.0 * j / n);
    auto b = a;
    fft::transform(b.data(), n, false);
    // cos mode 3 splits into +-3 with weight n/2
    CHECK(b[3].real() == doctest::Approx(n / 2.0));
    CHECK(b[n - 3].real() == doctest::Approx(n / 2.0));
    CHECK(b[7].imag() == doctest::Approx(-0.5 * n / 2.0));
    fft::transform(b.data(), n, true);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(b[j] - a[j]) < 1e-12);
}

TEST_CASE("fft rejects non-power-of-two lengths") {
    std::vector<std::complex<double>> a(12);
    CHECK_THROWS(fft::transform(a.data(), 12, false));
}

TEST_CASE("2-d transform is separable") {
    const std::size_t n1 = 16, n2 = 8;
    std::vector<std::complex<double>> a(n1 * n2);
    for (std::size_t j2 = 0; j2 < n2; ++j2)
        for (std::size_t j1 = 0; j1 < n1; ++j1)
            a[j2 * n1 + j1] = std::cos(2.0 * M_PI * (2.0 * j1 / n1 + 3.0 * j2 / n2));
    auto b = a;
    fft::transform_2d(b.data(), n1, n2, false);
    CHECK(std::abs(b[3 * n1 + 2]) == doctest::Approx(n1 * n2 / 2.0));
    fft::transform_2d(b.data(), n1, n2, true);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] - a[i]) < 1e-12);
}
