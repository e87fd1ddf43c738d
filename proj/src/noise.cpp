#include "roughheat/noise.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "roughheat/field_io.hpp"

namespace roughheat::noise {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::int64_t m1, std::int64_t m2,
                           std::uint32_t idx) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ (static_cast<std::uint64_t>(m1) * 0xd6e8feb86659fd93ULL));
    h = splitmix(h ^ (static_cast<std::uint64_t>(m2) * 0xa5a5a5a5a5a5a5a5ULL));
    h = splitmix(h ^ idx);
    return h;
}

// two independent standard normals per mode via Box-Muller
void gauss_pair(std::uint64_t seed, std::int64_t m1, std::int64_t m2, double& z0, double& z1) {
    const double u1 = uniform01(seed, m1, m2, 0);
    const double u2 = uniform01(seed, m1, m2, 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * M_PI * u2);
    z1 = r * std::sin(2.0 * M_PI * u2);
}

}  // namespace

double uniform01(std::uint64_t seed, std::int64_t m1, std::int64_t m2, std::uint32_t idx) {
    const std::uint64_t h = counter_hash(seed, m1, m2, idx);
    // (0,1]: never returns 0, so log() below is safe
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

void CovarianceSpec::validate() const {
    if (std::fabs(lambda1 + lambda2 - (-1.0 + 2.0 * alpha_prime)) > 1e-12)
        throw std::invalid_argument("covariance: lambda1 + lambda2 must equal -1 + 2*alpha'");
    if (!(lambda1 < 1.0) || !(lambda2 / 2.0 < 1.0))
        throw std::invalid_argument("covariance: need lambda1 < 1 and lambda2/2 < 1");
    if (!(alpha_prime > 0.25 && alpha_prime < 1.0))
        throw std::invalid_argument("covariance: alpha' must lie in (1/4, 1)");
    if (amplitude <= 0.0) throw std::invalid_argument("covariance: amplitude must be positive");
    if (cutoff < 0) throw std::invalid_argument("covariance: cutoff must be >= 0");
}

double CovarianceSpec::chat(double k1, double k2) const {
    return amplitude * std::pow(1.0 + std::fabs(k1), -lambda1) *
           std::pow(std::sqrt(1.0 + std::fabs(k2)), -lambda2);
}

CovarianceSpec CovarianceSpec::white_in_time(double alpha_prime, double amplitude, int cutoff) {
    CovarianceSpec s;
    s.alpha_prime = alpha_prime;
    s.lambda2 = 0.0;
    s.lambda1 = -1.0 + 2.0 * alpha_prime;
    s.amplitude = amplitude;
    s.cutoff = cutoff;
    s.validate();
    return s;
}

ForcingSample sample_forcing(const CovarianceSpec& spec, const grid::GridSpec& g,
                             std::int64_t seed) {
    spec.validate();
    if (!g.periodic_x2()) throw std::invalid_argument("sample_forcing: grid must be a torus");
    if (spec.cutoff >= g.n1 / 2 || spec.cutoff >= g.n2 / 2)
        throw std::invalid_argument("sample_forcing: cutoff exceeds the grid Nyquist range");

    grid::Spectrum s{g, std::vector<std::complex<double>>(g.size(), {0.0, 0.0})};
    const double scale = static_cast<double>(g.n1) * g.n2;
    const std::uint64_t us = static_cast<std::uint64_t>(seed);

    for (int s2 = -spec.cutoff; s2 <= spec.cutoff; ++s2) {
        for (int s1 = -spec.cutoff; s1 <= spec.cutoff; ++s1) {
            const bool positive_half = (s2 > 0) || (s2 == 0 && s1 > 0);
            const bool origin = (s1 == 0 && s2 == 0);
            if (!positive_half && !origin) continue;
            const double k1 = 2.0 * M_PI * s1;
            const double k2 = 2.0 * M_PI * s2 / g.x2_period();
            const double c = spec.chat(k1, k2);
            double z0, z1;
            gauss_pair(us, s1, s2, z0, z1);
            const int i1 = (s1 % g.n1 + g.n1) % g.n1;
            const int i2 = (s2 % g.n2 + g.n2) % g.n2;
            if (origin) {
                s.c[static_cast<std::size_t>(i2) * g.n1 + i1] = std::sqrt(c) * z0 * scale;
            } else {
                const std::complex<double> coeff =
                    std::sqrt(0.5 * c) * std::complex<double>(z0, z1) * scale;
                s.c[static_cast<std::size_t>(i2) * g.n1 + i1] = coeff;
                const int j1 = (g.n1 - i1) % g.n1;
                const int j2 = (g.n2 - i2) % g.n2;
                s.c[static_cast<std::size_t>(j2) * g.n1 + j1] = std::conj(coeff);
            }
        }
    }
    ForcingSample out{grid::field_of(s), seed, spec};
    return out;
}

grid::Field mollified_forcing(const ForcingSample& f, double eps,
                              kernel::MollifierSpec::Base base) {
    kernel::MollifierSpec spec;
    spec.epsilon = eps;
    spec.base = base;
    return kernel::mollify(f.field, spec);
}

void export_forcing(const ForcingSample& f, const std::string& path_prefix) {
    io::write_binary(f.field, path_prefix + ".bin");
    std::ofstream side(path_prefix + ".json", std::ios::binary);
    if (!side) throw std::runtime_error("export_forcing: cannot write sidecar");
    side << "{\"seed\":" << f.seed << ",\"lambda1\":" << io::format_double(f.spec.lambda1)
         << ",\"lambda2\":" << io::format_double(f.spec.lambda2)
         << ",\"alpha_prime\":" << io::format_double(f.spec.alpha_prime)
         << ",\"amplitude\":" << io::format_double(f.spec.amplitude)
         << ",\"cutoff\":" << f.spec.cutoff << "}";
}

}  // namespace roughheat::noise
