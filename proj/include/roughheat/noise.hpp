#pragma once

#include <cstdint>
#include <vector>

#include "roughheat/grid.hpp"
#include "roughheat/kernel.hpp"

namespace roughheat::noise {

/// Spectral envelope of the stationary centered Gaussian forcing:
///   Chat(k) = amplitude * (1+|k1|)^(-lambda1) * (sqrt(1+|k2|))^(-lambda2)
/// taken at equality (the amplitude knob is the experiment-facing smallness
/// proxy).  Frequencies are k = 2*pi*m on the unit torus.
struct CovarianceSpec {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double alpha_prime = 0.875;
    double amplitude = 1e-2;
    int cutoff = 32;  // max |m| retained per direction

    void validate() const;
    double chat(double k1, double k2) const;

    /// Preset: forcing white in the time-like variable (lambda2 = 0).
    static CovarianceSpec white_in_time(double alpha_prime, double amplitude, int cutoff);
};

struct ForcingSample {
    grid::Field field;
    std::int64_t seed = 0;
    CovarianceSpec spec;
};

/// Counter-based uniform stream: the draw for mode (m1, m2) depends only on
/// (seed, m1, m2, index), so restricting the mode set never shifts other
/// modes' draws.
double uniform01(std::uint64_t seed, std::int64_t m1, std::int64_t m2, std::uint32_t idx);

/// Hermitian Gaussian coefficients with E|fhat(k)|^2 = Chat(k); fhat(0) real.
ForcingSample sample_forcing(const CovarianceSpec& spec, const grid::GridSpec& g,
                             std::int64_t seed);

grid::Field mollified_forcing(const ForcingSample& f, double eps,
                              kernel::MollifierSpec::Base base = kernel::MollifierSpec::Base::Psi);

/// Binary field dump plus a sidecar JSON recording the seed and the spectral
/// envelope parameters.
void export_forcing(const ForcingSample& f, const std::string& path_prefix);

}  // namespace roughheat::noise
