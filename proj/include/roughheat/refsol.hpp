#pragma once

#include <vector>

#include "roughheat/grid.hpp"

namespace roughheat::refsol {

struct ParamGrid {
    double lambda = 0.25;
    std::vector<double> values;

    static ParamGrid uniform(double lambda, int count = 17);
    double spacing() const;
    void validate() const;
};

/// Periodic boundary trace, one value per x1 grid point.
struct BoundaryData {
    std::vector<double> values;
};

/// Space-time periodic solve of (d2 - a0 d1^2 + massive) v = f.
grid::Field solve_periodic_v(const grid::Field& f, double a0, bool massive = true);

/// Analytic a0-derivatives of v (orders 1 and 2).
grid::Field periodic_v_derivative(const grid::Field& f, double a0, int order, bool massive = true);

/// Heat-semigroup layer on a half-plane grid: per row x2,
///   Vhat(k1; x2) = ghat(k1) * exp(-(a0 k1^2 + [massive]) x2),
/// with the x2 = 0 row equal to g exactly (node-centered grids).
grid::Field heat_layer_V(const BoundaryData& g, double a0, const grid::GridSpec& hp,
                         bool massive = true);

/// d1^k d_a0^j of the layer for a0-independent boundary data.
grid::Field heat_layer_derivative(const BoundaryData& g, double a0, int dx1, int da0,
                                  const grid::GridSpec& hp, bool massive = true);

/// Same with a0-dependent data: dgs[m] holds the m-th a0-derivative of the
/// boundary data (dgs[0] = g itself); the product rule is applied exactly.
grid::Field heat_layer_derivative(const std::vector<BoundaryData>& dgs, double a0, int dx1,
                                  int da0, const grid::GridSpec& hp, bool massive = true);

/// Rows of the layer evaluated at arbitrary heights (diagnostics).
std::vector<double> heat_layer_row(const BoundaryData& g, double a0, double x2, int dx1,
                                   int da0, bool massive = true);

/// Massless unit-coefficient layer transporting the boundary coefficient:
/// (d2 - d1^2) abar = 0, abar|_{x2=0} = a_boundary.
grid::Field coefficient_layer(const BoundaryData& a_boundary, const grid::GridSpec& hp);

/// Boundary modelling weight: per point y,
///   nu_int(y) = e^{-y2} * (Gaussian of width sqrt(4 y2 a_tr(y)) * nu_boundary)(y1),
/// by direct quadrature over the periodic boundary.
grid::Field nu_int(const std::vector<double>& nu_boundary, const grid::Field& a_tr);

/// A family of fields indexed by the parameter grid, with cubic interpolation
/// in a0 and optional stored parameter derivatives.
struct ParamFamily {
    ParamGrid pg;
    std::vector<grid::Field> entries;                 // one per pg.values
    std::vector<std::vector<grid::Field>> derivs;     // derivs[m-1] = m-th a0-derivative

    double eval(double a0, int j1, int j2) const;
    const grid::Field& nearest(double a0) const;
    grid::Field interpolated(double a0) const;

    /// Second-order central difference in a0 of the stored entries.
    grid::Field central_difference(int order, int index) const;
};

double cubic_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x);

}  // namespace roughheat::refsol
