#include "roughheat/refsol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "roughheat/fft.hpp"

namespace roughheat::refsol {

ParamGrid ParamGrid::uniform(double lambda, int count) {
    if (count < 4) throw std::invalid_argument("param grid: need at least 4 points");
    ParamGrid pg;
    pg.lambda = lambda;
    pg.values.resize(count);
    for (int i = 0; i < count; ++i)
        pg.values[i] = lambda + (1.0 - lambda) * i / (count - 1);
    pg.validate();
    return pg;
}

double ParamGrid::spacing() const { return values.size() > 1 ? values[1] - values[0] : 0.0; }

void ParamGrid::validate() const {
    if (lambda <= 0.0 || lambda > 1.0) throw std::invalid_argument("param grid: lambda in (0,1]");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < lambda - 1e-12 || values[i] > 1.0 + 1e-12)
            throw std::invalid_argument("param grid: values must lie in [lambda, 1]");
        if (i && values[i] <= values[i - 1])
            throw std::invalid_argument("param grid: values must be sorted");
    }
}

namespace {

std::complex<double> lsym(double k1, double k2, double a0, bool massive) {
    return {a0 * k1 * k1 + (massive ? 1.0 : 0.0), k2};
}

grid::Field apply_mode_map(
    const grid::Field& f,
    const std::function<std::complex<double>(double, double)>& mult) {
    grid::Spectrum s = grid::spectrum_of(f);
    for (int m2 = 0; m2 < f.grid.n2; ++m2) {
        const double k2 = grid::k2_of(f.grid, m2);
        for (int m1 = 0; m1 < f.grid.n1; ++m1)
            s.c[static_cast<std::size_t>(m2) * f.grid.n1 + m1] *=
                mult(grid::k1_of(f.grid, m1), k2);
    }
    return grid::field_of(s);
}

}  // namespace

grid::Field solve_periodic_v(const grid::Field& f, double a0, bool massive) {
    if (!f.grid.periodic_x2()) throw std::invalid_argument("solve_periodic_v: torus field required");
    if (!massive) {
        grid::Spectrum probe = grid::spectrum_of(f);
        const double mean = std::abs(probe.c[0]) / f.grid.size();
        if (mean > 1e-10)
            throw std::invalid_argument("solve_periodic_v: massless solve needs a mean-free forcing");
        for (int m2 = 0; m2 < f.grid.n2; ++m2)
            for (int m1 = 0; m1 < f.grid.n1; ++m1) {
                const double k1 = grid::k1_of(f.grid, m1);
                const double k2 = grid::k2_of(f.grid, m2);
                auto& c = probe.c[static_cast<std::size_t>(m2) * f.grid.n1 + m1];
                if (m1 == 0 && m2 == 0)
                    c = 0.0;
                else
                    c /= lsym(k1, k2, a0, false);
            }
        return grid::field_of(probe);
    }
    return apply_mode_map(f, [a0](double k1, double k2) {
        return 1.0 / lsym(k1, k2, a0, true);
    });
}

grid::Field periodic_v_derivative(const grid::Field& f, double a0, int order, bool massive) {
    if (order < 1 || order > 2)
        throw std::invalid_argument("periodic_v_derivative: order must be 1 or 2");
    return apply_mode_map(f, [a0, order, massive](double k1, double k2) {
        const std::complex<double> z = lsym(k1, k2, a0, massive);
        const double k1sq = k1 * k1;
        if (order == 1) return std::complex<double>(-k1sq) / (z * z);
        return std::complex<double>(2.0 * k1sq * k1sq) / (z * z * z);
    });
}

namespace {

std::vector<std::complex<double>> boundary_spectrum(const BoundaryData& g, int n1) {
    if (static_cast<int>(g.values.size()) != n1)
        throw std::invalid_argument("heat layer: boundary data length must equal n1");
    std::vector<std::complex<double>> ghat(n1);
    for (int i = 0; i < n1; ++i) ghat[i] = g.values[i];
    fft::transform(ghat.data(), n1, false);
    return ghat;
}

void layer_rows(grid::Field& out, const std::vector<std::vector<std::complex<double>>>& dghat,
                double a0, int dx1, int da0, bool massive) {
    const grid::GridSpec& g = out.grid;
    const double mu = massive ? 1.0 : 0.0;
    const int n1 = g.n1;
    std::vector<std::complex<double>> row(n1);
    // binomial coefficients for the product rule in a0
    std::vector<double> binom(da0 + 1, 1.0);
    for (int q = 1; q <= da0; ++q) binom[q] = binom[q - 1] * (da0 - q + 1) / q;
    for (int j2 = 0; j2 < g.n2; ++j2) {
        const double x2 = g.x2(j2);
        for (int m1 = 0; m1 < n1; ++m1) {
            const double k1 = grid::k1_of(g, m1);
            const double decay = std::exp(-(a0 * k1 * k1 + mu) * x2);
            std::complex<double> ikp(1.0, 0.0);
            const std::complex<double> ik(0.0, k1);
            for (int p = 0; p < dx1; ++p) ikp *= ik;
            std::complex<double> acc(0.0, 0.0);
            const double base = -k1 * k1 * x2;  // d/da0 of the exponent (linear in a0)
            const int avail = static_cast<int>(dghat.size()) - 1;
            for (int q = 0; q <= da0; ++q) {
                if (q > avail) continue;  // data independent of a0 beyond the supplied orders
                double pw = 1.0;
                for (int p = 0; p < da0 - q; ++p) pw *= base;
                acc += binom[q] * dghat[q][m1] * pw;
            }
            row[m1] = acc * ikp * decay;
        }
        fft::transform(row.data(), n1, true);
        for (int j1 = 0; j1 < n1; ++j1) out.at(j1, j2) = row[j1].real();
    }
}

}  // namespace

grid::Field heat_layer_V(const BoundaryData& g, double a0, const grid::GridSpec& hp,
                         bool massive) {
    return heat_layer_derivative(g, a0, 0, 0, hp, massive);
}

grid::Field heat_layer_derivative(const BoundaryData& g, double a0, int dx1, int da0,
                                  const grid::GridSpec& hp, bool massive) {
    if (hp.domain != grid::Domain::HalfPlane)
        throw std::invalid_argument("heat layer: half-plane grid required");
    grid::Field out(hp);
    std::vector<std::vector<std::complex<double>>> dghat;
    dghat.push_back(boundary_spectrum(g, hp.n1));
    layer_rows(out, dghat, a0, dx1, da0, massive);
    return out;
}

grid::Field heat_layer_derivative(const std::vector<BoundaryData>& dgs, double a0, int dx1,
                                  int da0, const grid::GridSpec& hp, bool massive) {
    if (hp.domain != grid::Domain::HalfPlane)
        throw std::invalid_argument("heat layer: half-plane grid required");
    if (dgs.empty()) throw std::invalid_argument("heat layer: boundary data missing");
    if (static_cast<int>(dgs.size()) <= da0)
        throw std::invalid_argument(
            "heat layer: missing boundary-data derivative for parameter-dependent data");
    grid::Field out(hp);
    std::vector<std::vector<std::complex<double>>> dghat;
    for (const auto& g : dgs) dghat.push_back(boundary_spectrum(g, hp.n1));
    layer_rows(out, dghat, a0, dx1, da0, massive);
    return out;
}

std::vector<double> heat_layer_row(const BoundaryData& g, double a0, double x2, int dx1,
                                   int da0, bool massive) {
    const int n1 = static_cast<int>(g.values.size());
    std::vector<std::complex<double>> ghat = boundary_spectrum(g, n1);
    const double mu = massive ? 1.0 : 0.0;
    for (int m1 = 0; m1 < n1; ++m1) {
        const double k1 = 2.0 * M_PI * grid::signed_index(m1, n1);
        std::complex<double> mult = std::exp(-(a0 * k1 * k1 + mu) * x2);
        const std::complex<double> ik(0.0, k1);
        for (int p = 0; p < dx1; ++p) mult *= ik;
        for (int p = 0; p < da0; ++p) mult *= -k1 * k1 * x2;
        ghat[m1] *= mult;
    }
    fft::transform(ghat.data(), n1, true);
    std::vector<double> row(n1);
    for (int i = 0; i < n1; ++i) row[i] = ghat[i].real();
    return row;
}

grid::Field coefficient_layer(const BoundaryData& a_boundary, const grid::GridSpec& hp) {
    return heat_layer_V(a_boundary, 1.0, hp, /*massive=*/false);
}

grid::Field nu_int(const std::vector<double>& nu_boundary, const grid::Field& a_tr) {
    const grid::GridSpec& g = a_tr.grid;
    const int n1 = g.n1;
    if (static_cast<int>(nu_boundary.size()) != n1)
        throw std::invalid_argument("nu_int: boundary array length must equal n1");
    grid::Field out(g);
    const double ds = 1.0 / n1;
    for (int j2 = 0; j2 < g.n2; ++j2) {
        const double y2 = g.x2(j2);
        if (y2 <= 0.0) {
            for (int j1 = 0; j1 < n1; ++j1) out.at(j1, j2) = nu_boundary[j1];
            continue;
        }
        const double damp = std::exp(-y2);
        for (int j1 = 0; j1 < n1; ++j1) {
            const double a = a_tr.at(j1, j2);
            if (a < 0.0 || a > 1.0 + 1e-12)
                throw std::invalid_argument("nu_int: a_tr must take values in [lambda, 1]");
            const double var = 4.0 * y2 * a;
            double wsum = 0.0, acc = 0.0;
            const double y1 = g.x1(j1);
            for (int l = 0; l < n1; ++l) {
                double d = grid::min_image(y1 - l * ds, 1.0);
                // periodized Gaussian: fold in the neighbouring images
                double w = 0.0;
                for (int p = -2; p <= 2; ++p) {
                    const double dd = d + p;
                    w += std::exp(-dd * dd / var);
                }
                wsum += w;
                acc += w * nu_boundary[l];
            }
            out.at(j1, j2) = damp * acc / wsum;
        }
    }
    return out;
}

double cubic_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const int n = static_cast<int>(xs.size());
    if (n < 4) throw std::invalid_argument("cubic_interp: need at least 4 nodes");
    int i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    i = std::max(1, std::min(n - 3, i));
    const int base = i - 1;
    double result = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (x - xs[base + b]) / (xs[base + a] - xs[base + b]);
        }
        result += w * ys[base + a];
    }
    return result;
}

double ParamFamily::eval(double a0, int j1, int j2) const {
    const int n = static_cast<int>(pg.values.size());
    std::vector<double> ys(4);
    int i = static_cast<int>(std::upper_bound(pg.values.begin(), pg.values.end(), a0) -
                             pg.values.begin()) - 1;
    i = std::max(1, std::min(n - 3, i));
    const int base = i - 1;
    double result = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (a0 - pg.values[base + b]) / (pg.values[base + a] - pg.values[base + b]);
        }
        result += w * entries[base + a].at(j1, j2);
    }
    return result;
}

const grid::Field& ParamFamily::nearest(double a0) const {
    std::size_t best = 0;
    double bd = 1e300;
    for (std::size_t i = 0; i < pg.values.size(); ++i) {
        const double d = std::fabs(pg.values[i] - a0);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return entries[best];
}

grid::Field ParamFamily::interpolated(double a0) const {
    grid::Field out(entries.front().grid);
    for (int j2 = 0; j2 < out.grid.n2; ++j2)
        for (int j1 = 0; j1 < out.grid.n1; ++j1) out.at(j1, j2) = eval(a0, j1, j2);
    return out;
}

grid::Field ParamFamily::central_difference(int order, int index) const {
    const int n = static_cast<int>(entries.size());
    const double h = pg.spacing();
    const int i = std::max(order == 2 ? 1 : 1, std::min(n - 2, index));
    if (order == 1) return (1.0 / (2.0 * h)) * (entries[i + 1] - entries[i - 1]);
    if (order == 2)
        return (1.0 / (h * h)) * ((entries[i + 1] - entries[i]) - (entries[i] - entries[i - 1]));
    throw std::invalid_argument("central_difference: order must be 1 or 2");
}

}  // namespace roughheat::refsol
