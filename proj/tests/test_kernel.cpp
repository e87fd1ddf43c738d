#include <doctest.h>

#include <cmath>

#include "roughheat/grid.hpp"
#include "roughheat/kernel.hpp"
#include "roughheat/noise.hpp"

using namespace roughheat;
using grid::Field;
using grid::GridSpec;

namespace {

GridSpec torus(int n) {
    GridSpec g;
    g.n1 = g.n2 = n;
    return g;
}

}  // namespace

TEST_CASE("psi_hat values and scaling") {
    CHECK(kernel::psi_hat(0.0, 0.0, 3.7) == 1.0);
    const double k = 2.0 * M_PI;
    CHECK(kernel::psi_hat(k, 0.0, 1.0) == doctest::Approx(std::exp(-k * k * k * k)));
    // psi_hat(k, T) = psi_hat((T^{1/4} k1, T^{1/2} k2), 1)
    for (double T : {0.5, 2.0, 11.0}) {
        const double k1 = 1.3, k2 = -0.4;
        CHECK(kernel::psi_hat(k1, k2, T) ==
              doctest::Approx(kernel::psi_hat(std::pow(T, 0.25) * k1, std::sqrt(T) * k2, 1.0)));
    }
}

TEST_CASE("convolve: unit mass, single-mode damping, semigroup") {
    GridSpec g = torus(32);
    SUBCASE("constants are preserved") {
        Field c = Field::sample(g, [](double, double) { return 2.5; });
        CHECK(grid::sup_abs_diff(kernel::convolve(c, 0.37), c) < 1e-12);
    }
    SUBCASE("cos(2 pi x1) is damped by the multiplier") {
        Field f = Field::sample(g, [](double x1, double) { return std::cos(2.0 * M_PI * x1); });
        const double T = 1e-4;
        const double mult = std::exp(-T * std::pow(2.0 * M_PI, 4));
        Field fT = kernel::convolve(f, T);
        for (int j1 = 0; j1 < g.n1; ++j1)
            CHECK(fT.at(j1, 3) == doctest::Approx(mult * f.at(j1, 3)).epsilon(1e-10));
    }
    SUBCASE("semigroup identity at spectral exactness") {
        noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1.0, 15);
        Field f = noise::sample_forcing(spec, g, 3).field;
        const Field a = kernel::convolve(kernel::convolve(f, 1.0 / 64), 1.0 / 16);
        const Field b = kernel::convolve(f, 1.0 / 64 + 1.0 / 16);
        CHECK(grid::sup_abs_diff(a, b) <= 1e-10 * grid::sup_abs(f));
    }
}

TEST_CASE("mollifier bases") {
    GridSpec g = torus(16);
    Field f = Field::sample(g, [](double x1, double x2) {
        return std::cos(2.0 * M_PI * x1) + std::sin(2.0 * M_PI * x2);
    });
    SUBCASE("psi base equals convolve at the same scale") {
        kernel::MollifierSpec ms;
        ms.epsilon = 1e-3;
        CHECK(grid::sup_abs_diff(kernel::mollify(f, ms), kernel::convolve(f, 1e-3)) < 1e-13);
    }
    SUBCASE("zero and constants are fixed") {
        kernel::MollifierSpec ms;
        ms.epsilon = 0.2;
        ms.base = kernel::MollifierSpec::Base::Gaussian;
        Field z(g);
        CHECK(grid::sup_abs(kernel::mollify(z, ms)) == 0.0);
        Field c = Field::sample(g, [](double, double) { return -1.25; });
        CHECK(grid::sup_abs_diff(kernel::mollify(c, ms), c) < 1e-13);
    }
    SUBCASE("gaussian base damps mode (2 pi, 0) by its multiplier") {
        kernel::MollifierSpec ms;
        ms.epsilon = 1.0;
        ms.base = kernel::MollifierSpec::Base::Gaussian;
        Field m = Field::sample(g, [](double x1, double) { return std::cos(2.0 * M_PI * x1); });
        const double mult = kernel::mollifier_hat(2.0 * M_PI, 0.0, ms);
        Field mm = kernel::mollify(m, ms);
        CHECK(mm.at(1, 1) == doctest::Approx(mult * m.at(1, 1)).epsilon(1e-10));
    }
}

TEST_CASE("moment integral: mass, rescaling oracle, truncation report") {
    // alpha = 0, i = j = 0: the L1 mass of psi_T, >= 1 with equality iff psi >= 0
    const kernel::MomentResult m0 = kernel::moment_integral(0.0, 0, 0, 1.0);
    CHECK(m0.value >= 1.0 - 1e-9);
    CHECK(m0.value == doctest::Approx(kernel::psi1_mass().l1).epsilon(1e-6));

    // rescaling: moment(alpha=1) at 16 T vs T differ by 16^{1/4} = 2
    const double a = kernel::moment_integral(1.0, 0, 0, 1.0 / 64).value;
    const double b = kernel::moment_integral(1.0, 0, 0, 16.0 / 64).value;
    CHECK(b / a == doctest::Approx(2.0).epsilon(1e-3));

    CHECK(m0.truncation_estimate < 1e-6);
}

TEST_CASE("coordinate commutator kills constants and matches the multiplier oracle") {
    GridSpec g = torus(32);
    SUBCASE("constants commute") {
        Field c = Field::sample(g, [](double, double) { return 3.0; });
        CHECK(grid::sup_abs(kernel::coordinate_commutator(c, 0.01)) < 1e-12);
    }
    SUBCASE("single cosine lands on the sine with weight 4 T k^3 psi_hat") {
        Field f = Field::sample(g, [](double x1, double) { return std::cos(2.0 * M_PI * x1); });
        const double T = 1e-4;
        const double k = 2.0 * M_PI;
        const double w = 4.0 * T * k * k * k * kernel::psi_hat(k, 0.0, T);
        Field c = kernel::coordinate_commutator(f, T);
        for (int j1 = 0; j1 < g.n1; ++j1)
            CHECK(c.at(j1, 0) ==
                  doctest::Approx(w * std::sin(2.0 * M_PI * g.x1(j1))).epsilon(1e-8));
    }
}

TEST_CASE("sup norm monotone in the convolution scale up to the kernel mass") {
    GridSpec g = torus(64);
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1.0, 31);
    Field f = noise::sample_forcing(spec, g, 17).field;
    const double mass = kernel::psi1_mass().l1;
    for (double t : {1e-6, 1e-4, 1e-2}) {
        const double base = grid::sup_abs(kernel::convolve(f, t));
        for (double T : {4.0 * t, 64.0 * t}) {
            const double later = grid::sup_abs(kernel::convolve(f, T));
            CHECK(later <= (1.0 + 1e-9) * mass * base);
        }
    }
}
