#pragma once

#include <vector>

#include "roughheat/grid.hpp"

namespace roughheat::kernel {

/// psi_T in Fourier: exp(-T (k1^4 + k2^2)), unit mass (value 1 at k = 0).
double psi_hat(double k1, double k2, double T);

struct MollifierSpec {
    double epsilon = 1e-4;
    enum class Base { Psi, Gaussian } base = Base::Psi;
};

/// Multiplier of the mollifier psi'_eps at frequency k.  The gaussian base
/// kernel is the unit-mass Gaussian with parabolic rescaling
/// psi'_eps(x) = eps^{-3/4} psi'_1(x1/eps^{1/4}, x2/eps^{1/2}).
double mollifier_hat(double k1, double k2, const MollifierSpec& spec);

/// Convolution with psi_T as an exact Fourier multiplier on the resolved
/// modes of an x2-periodic field.
grid::Field convolve(const grid::Field& f, double T);

grid::Field mollify(const grid::Field& f, const MollifierSpec& spec);

/// Commutator with the coordinate: [x1, (.)_T] h = x1 h_T - (x1 h)_T, a
/// convolution with s1 psi_T(s); multiplier -4 i T k1^3 psi_hat(k).
grid::Field coordinate_commutator(const grid::Field& h, double T);

struct MomentResult {
    double value = 0.0;
    double truncation_estimate = 0.0;  // kernel mass outside the quadrature box + aliasing
};

/// Quadrature of  int d^alpha(x,0) |d1^i d2^j psi_T(x)| dx  over [-L,L]^2.
/// Physical kernel values come from a 1-d inverse transform of the quartic
/// factor on a fine grid (the kernel is separable; the x2 factor is an exact
/// Gaussian).
MomentResult moment_integral(double alpha, int i, int j, double T);

/// Quadrature value of ||psi_1||_L1 together with min psi_1 (the kernel is
/// not relied on to be positive anywhere; the minimum is recorded).
struct KernelMass {
    double l1 = 0.0;
    double min_value = 0.0;
};
KernelMass psi1_mass();

}  // namespace roughheat::kernel
