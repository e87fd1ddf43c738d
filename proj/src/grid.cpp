#include "roughheat/grid.hpp"

#include <cmath>

#include "roughheat/fft.hpp"
#include "roughheat/simd/kernels.hpp"

namespace roughheat::grid {

double GridSpec::dx2() const {
    switch (domain) {
        case Domain::Torus: return period2 / n2;
        case Domain::HalfPlane: return cell_centered ? t_max / n2 : t_max / (n2 - 1);
        case Domain::TwoSided: return 2.0 * t_max / n2;
    }
    return 0.0;
}

double GridSpec::x2(int j2) const {
    const double off = cell_centered ? 0.5 : 0.0;
    switch (domain) {
        case Domain::Torus: return (j2 + off) * dx2();
        case Domain::HalfPlane: return (j2 + off) * dx2();
        case Domain::TwoSided: return -t_max + (j2 + off) * dx2();
    }
    return 0.0;
}

double GridSpec::x2_period() const {
    return domain == Domain::TwoSided ? 2.0 * t_max : period2;
}

bool GridSpec::operator==(const GridSpec& o) const {
    return n1 == o.n1 && n2 == o.n2 && domain == o.domain && t_max == o.t_max &&
           period2 == o.period2 && cell_centered == o.cell_centered;
}

void GridSpec::validate() const {
    if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("grid: n1, n2 must be positive");
    if (!fft::is_pow2(static_cast<std::size_t>(n1)))
        throw std::invalid_argument("grid: n1 must be a power of two");
    const int rows = (domain == Domain::HalfPlane && !cell_centered) ? n2 - 1 : n2;
    if (!fft::is_pow2(static_cast<std::size_t>(rows)))
        throw std::invalid_argument("grid: row count must be a power of two");
    if (domain != Domain::Torus && t_max <= 0.0)
        throw std::invalid_argument("grid: t_max must be positive");
}

Field Field::sample(const GridSpec& g, const std::function<double(double, double)>& f) {
    Field out(g);
    for (int j2 = 0; j2 < g.n2; ++j2)
        for (int j1 = 0; j1 < g.n1; ++j1) out.at(j1, j2) = f(g.x1(j1), g.x2(j2));
    return out;
}

double min_image(double d, double period) {
    d = std::fmod(d, period);
    if (d > 0.5 * period) d -= period;
    if (d < -0.5 * period) d += period;
    return d;
}

double parabolic_distance(const Point& x, const Point& y) {
    return std::fabs(x.x1 - y.x1) + std::sqrt(std::fabs(x.x2 - y.x2));
}

double parabolic_distance(const GridSpec& g, const Point& x, const Point& y) {
    const double d1 = min_image(x.x1 - y.x1, 1.0);
    double d2 = x.x2 - y.x2;
    if (g.periodic_x2()) d2 = min_image(d2, g.x2_period());
    return std::fabs(d1) + std::sqrt(std::fabs(d2));
}

int signed_index(int m, int n) { return m <= n / 2 ? m : m - n; }

double k1_of(const GridSpec& g, int m1) {
    return 2.0 * M_PI * signed_index(m1, g.n1);
}

double k2_of(const GridSpec& g, int m2) {
    return 2.0 * M_PI * signed_index(m2, g.n2) / g.x2_period();
}

Spectrum spectrum_of(const Field& f) {
    if (!f.grid.periodic_x2())
        throw std::invalid_argument("spectrum_of: field must be x2-periodic");
    Spectrum s{f.grid, std::vector<std::complex<double>>(f.grid.size())};
    for (std::size_t i = 0; i < f.v.size(); ++i) s.c[i] = f.v[i];
    fft::transform_2d(s.c.data(), f.grid.n1, f.grid.n2, false);
    return s;
}

Field field_of(const Spectrum& s) {
    std::vector<std::complex<double>> tmp(s.c);
    fft::transform_2d(tmp.data(), s.grid.n1, s.grid.n2, true);
    Field f(s.grid);
    for (std::size_t i = 0; i < tmp.size(); ++i) f.v[i] = tmp[i].real();
    return f;
}

Field even_reflection(const Field& f) {
    if (f.grid.domain != Domain::HalfPlane)
        throw std::invalid_argument("even_reflection: input must be a half-plane field");
    GridSpec g = f.grid;
    g.domain = Domain::TwoSided;
    g.n2 = f.grid.cell_centered ? 2 * f.grid.n2 : 2 * (f.grid.n2 - 1);
    Field out(g);
    const int j0 = g.n2 / 2;
    for (int j2 = 0; j2 < g.n2; ++j2) {
        const int src = f.grid.cell_centered ? (j2 >= j0 ? j2 - j0 : j0 - j2 - 1)
                                             : std::abs(j2 - j0);
        for (int j1 = 0; j1 < g.n1; ++j1) out.at(j1, j2) = f.at(j1, src);
    }
    return out;
}

Field trivial_extension(const Field& f) {
    if (f.grid.domain != Domain::HalfPlane)
        throw std::invalid_argument("trivial_extension: input must be a half-plane field");
    GridSpec g = f.grid;
    g.domain = Domain::TwoSided;
    g.n2 = f.grid.cell_centered ? 2 * f.grid.n2 : 2 * (f.grid.n2 - 1);
    Field out(g);
    const int j0 = g.n2 / 2;  // first row with x2 >= 0
    for (int j2 = j0; j2 < g.n2; ++j2) {
        const int src = j2 - j0;
        for (int j1 = 0; j1 < g.n1; ++j1) out.at(j1, j2) = f.at(j1, src);
    }
    return out;
}

Field restrict_to_half_plane(const Field& f) {
    if (f.grid.domain != Domain::TwoSided || f.grid.cell_centered)
        throw std::invalid_argument("restrict_to_half_plane: need a node-centered two-sided field");
    GridSpec g = f.grid;
    g.domain = Domain::HalfPlane;
    g.n2 = f.grid.n2 / 2 + 1;
    Field out(g);
    const int j0 = f.grid.n2 / 2;  // row at x2 = 0
    for (int j2 = 0; j2 < g.n2; ++j2) {
        const int src = (j0 + j2) % f.grid.n2;  // top row x2 = t_max wraps to -t_max
        for (int j1 = 0; j1 < g.n1; ++j1) out.at(j1, j2) = f.at(j1, src);
    }
    return out;
}

Field spectral_derivative(const Field& f, int direction, int order) {
    if (order <= 0) throw std::invalid_argument("spectral_derivative: order must be positive");
    if (direction == 2 && !f.grid.periodic_x2())
        throw std::invalid_argument(
            "spectral_derivative: direction 2 requires x2-periodicity; use d2_one_sided for half-plane fields");
    if (direction == 1 && !f.grid.periodic_x2()) {
        // x1 is always periodic: transform each row independently
        Field out(f.grid);
        const int n1 = f.grid.n1;
        std::vector<std::complex<double>> row(n1);
        for (int j2 = 0; j2 < f.grid.n2; ++j2) {
            for (int j1 = 0; j1 < n1; ++j1) row[j1] = f.at(j1, j2);
            fft::transform(row.data(), n1, false);
            for (int m1 = 0; m1 < n1; ++m1) {
                const std::complex<double> ik(0.0, k1_of(f.grid, m1));
                std::complex<double> mult(1.0, 0.0);
                for (int p = 0; p < order; ++p) mult *= ik;
                row[m1] *= mult;
            }
            fft::transform(row.data(), n1, true);
            for (int j1 = 0; j1 < n1; ++j1) out.at(j1, j2) = row[j1].real();
        }
        return out;
    }
    Spectrum s = spectrum_of(f);
    for (int m2 = 0; m2 < f.grid.n2; ++m2) {
        for (int m1 = 0; m1 < f.grid.n1; ++m1) {
            const double k = direction == 1 ? k1_of(f.grid, m1) : k2_of(f.grid, m2);
            std::complex<double> mult(1.0, 0.0);
            const std::complex<double> ik(0.0, k);
            for (int p = 0; p < order; ++p) mult *= ik;
            s.c[static_cast<std::size_t>(m2) * f.grid.n1 + m1] *= mult;
        }
    }
    return field_of(s);
}

Field d2_one_sided(const Field& f) {
    if (f.grid.domain != Domain::HalfPlane)
        throw std::invalid_argument("d2_one_sided: input must be a half-plane field");
    Field out(f.grid);
    const double h = f.grid.dx2();
    for (int j2 = 0; j2 < f.grid.n2; ++j2) {
        for (int j1 = 0; j1 < f.grid.n1; ++j1) {
            if (j2 >= 2) {
                out.at(j1, j2) =
                    (3.0 * f.at(j1, j2) - 4.0 * f.at(j1, j2 - 1) + f.at(j1, j2 - 2)) / (2.0 * h);
            } else if (j2 + 2 < f.grid.n2) {
                out.at(j1, j2) =
                    (-3.0 * f.at(j1, j2) + 4.0 * f.at(j1, j2 + 1) - f.at(j1, j2 + 2)) / (2.0 * h);
            } else {
                out.at(j1, j2) = (f.at(j1, j2) - f.at(j1, j2 - 1)) / h;
            }
        }
    }
    return out;
}

Field tile_to(const Field& f, const GridSpec& target) {
    if (!f.grid.periodic_x2() || !target.periodic_x2())
        throw std::invalid_argument("tile_to: both grids must be x2-periodic");
    if (f.grid.n1 != target.n1) throw std::invalid_argument("tile_to: n1 mismatch");
    const double ratio = f.grid.dx2() / target.dx2();
    if (std::fabs(ratio - 1.0) > 1e-12)
        throw std::invalid_argument("tile_to: row spacings must agree");
    Field out(target);
    const double src_period = f.grid.x2_period();
    for (int j2 = 0; j2 < target.n2; ++j2) {
        double x2 = std::fmod(target.x2(j2) - f.grid.x2(0), src_period);
        if (x2 < 0) x2 += src_period;
        const int src = static_cast<int>(std::lround(x2 / f.grid.dx2())) % f.grid.n2;
        for (int j1 = 0; j1 < target.n1; ++j1) out.at(j1, j2) = f.at(j1, src);
    }
    return out;
}

Field operator+(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("field +: grid mismatch");
    Field out(a);
    simd::active().axpby(out.v.data(), 1.0, b.v.data(), 1.0, out.v.size());
    return out;
}

Field operator-(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("field -: grid mismatch");
    Field out(a);
    simd::active().axpby(out.v.data(), -1.0, b.v.data(), 1.0, out.v.size());
    return out;
}

Field operator*(double s, const Field& a) {
    Field out(a);
    simd::active().scale_inplace(out.v.data(), s, out.v.size());
    return out;
}

Field pointwise(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("pointwise: grid mismatch");
    Field out(a.grid);
    simd::active().mul(out.v.data(), a.v.data(), b.v.data(), out.v.size());
    return out;
}

double sup_abs(const Field& a) { return simd::active().max_abs(a.v.data(), a.v.size()); }

double sup_abs_diff(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("sup_abs_diff: grid mismatch");
    return simd::active().max_abs_diff(a.v.data(), b.v.data(), a.v.size());
}

}  // namespace roughheat::grid
