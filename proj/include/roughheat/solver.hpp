#pragma once

#include <functional>
#include <string>
#include <vector>

#include "roughheat/grid.hpp"
#include "roughheat/norms.hpp"
#include "roughheat/products.hpp"
#include "roughheat/refsol.hpp"

namespace roughheat::solver {

/// Parabolic unit translation: the grid's first spatial mode sits at
/// frequency 2*pi, so order-one scale windows written for unit frequencies
/// map to T -> T / (2 pi)^4 and x2 -> x2 / (2 pi)^2.
inline double scale_T(double t_unit) {
    const double c = 2.0 * M_PI;
    return t_unit / (c * c * c * c);
}
inline double scale_x2(double x_unit) {
    const double c = 2.0 * M_PI;
    return x_unit / (c * c);
}

struct LinearSolveConfig {
    double tau = 0.0;  // optional extra mollification of the u-equation data
    double picard_tol = 1e-11;
    int picard_max = 400;
    enum class FrozenA0 { Mean, Midpoint };
    FrozenA0 frozen_a0 = FrozenA0::Mean;
    double lambda = 0.25;
    double a_seminorm_cap = 0.1;
    int param_count = 17;
    norms::NormConfig norms;

    refsol::ParamGrid param_grid() const { return refsol::ParamGrid::uniform(lambda, param_count); }
};

/// Offline family { (a diamond d1^2 v)(., a0) } consumed by the linear solve.
struct OfflineProducts {
    refsol::ParamGrid pg;
    std::vector<grid::Field> fields;
    products::ProductHandle meta;
};

/// Classical product family a * d1^2 v(., a0) (exact for smooth or
/// band-limited coefficients).
OfflineProducts classical_products(const grid::Field& a, const refsol::ParamFamily& d2v);

struct PicardResult {
    grid::Field u;
    std::vector<double> residuals;
    double contraction_ratio = 0.0;
    double frozen_a0 = 0.0;
    bool converged = false;
};

/// Picard iteration in Fourier space for
///   (d2 - a d1^2 + 1) u = f_tau - E [a, (.)_tau] diamond d1^2 v
/// with coefficients frozen at a0*: u <- L_{a0*}^{-1}(rhs + (a - a0*) d1^2 u).
/// Throws on measured non-contraction.
PicardResult solve_linear_periodic_u(const grid::Field& f, const grid::Field& a,
                                     const refsol::ParamFamily& d2v,
                                     const OfflineProducts& prods,
                                     const LinearSolveConfig& cfg);

/// q = V(., abar, U_int - u|_{x2=0}) with abar the massless unit-coefficient
/// layer grown from a_boundary; the heat family is interpolated at abar(x).
grid::Field boundary_ansatz_q(const std::vector<double>& U_int,
                              const std::vector<double>& u_row0,
                              const std::vector<double>& a_boundary,
                              const grid::GridSpec& hp, const LinearSolveConfig& cfg);

/// Forcing of the correction equation, evaluated on cell-centered rows and
/// trivially extended:
///   g = (abar - a) d1^2 V' + d_a0 V' (1 - a) d1^2 abar
///       - 2 a d1 d_a0 V' d1 abar - a d_a0^2 V' (d1 abar)^2,
/// every V'-factor taken at parameter abar(x).
grid::Field w_forcing_g(const std::vector<double>& U_int, const std::vector<double>& u_row0,
                        const std::vector<double>& a_boundary, const grid::Field& a_hp,
                        const LinearSolveConfig& cfg);

/// Semi-implicit march for (d2 - a d1^2 + 1) w = -g from w(., 0) = 0; the
/// frozen part is implicit, (a - a0*) d1^2 w is lagged inside an inner fixed
/// point; a detected instability halves the step (up to 4 times).
grid::Field solve_correction_w(const grid::Field& g_cells, const grid::Field& a_hp,
                               const LinearSolveConfig& cfg);

struct SolutionBundle {
    grid::Field u;       // torus (period-1 or doubled) coefficient grid
    grid::Field q;       // half-plane nodes
    grid::Field w;       // half-plane nodes
    grid::Field U;       // u|_half_plane + q + w
    grid::Field g_cells; // forcing of the correction equation (two-sided cells)
    grid::Field nu_u;    // fitted Gubinelli weight of u's modelling

    double M_u = 0.0, M_q = 0.0, w_2alpha = 0.0;
    double u_alpha = 0.0, q_alpha = 0.0, w_alpha = 0.0;
    double N0 = 0.0, N0_int = 0.0;
    double picard_ratio = 0.0;
    std::vector<double> picard_residuals;
    std::vector<double> residual_ladder_T;
    std::vector<double> residual_ladder;
    double safonov = 0.0;
};

/// Full linear assembly U = u + q + w with norm, modelling, and residual
/// reports.
SolutionBundle assemble_linear(const grid::Field& f, const std::vector<double>& U_int,
                               const grid::Field& a, const OfflineProducts& prods,
                               const LinearSolveConfig& cfg);

/// Pointwise nonlinearity with its first three derivatives.
struct NonlinearityMaps {
    std::function<double(double)> a, da, d2a, d3a;
};

struct QuasilinearConfig {
    LinearSolveConfig lin;
    int max_outer = 12;
    double d_tol = 1e-7;
    double reconstruct_T = std::pow(2.0, -28);  // smallest product-ladder scale
};

struct OuterIterate {
    double d = 0.0;
    double residual = 0.0;
    double M_u = 0.0;
    double M_q = 0.0;
    double w_2alpha = 0.0;
};

struct QuasilinearResult {
    SolutionBundle bundle;
    std::vector<double> d_history;
    std::vector<OuterIterate> history;
    int iterations = 0;
    bool converged = false;
};

/// Outer contraction loop: (u*, w*, a*) -> q*, a = a_fn(u* + w* + q~*),
/// rebuild { a diamond d1^2 v } by reconstruction, then assemble_linear.
QuasilinearResult quasilinear_fixed_point(const grid::Field& f_period1,
                                          const std::vector<double>& U_int,
                                          const NonlinearityMaps& a_fn,
                                          const QuasilinearConfig& cfg);

struct StabilityReport {
    double du_alpha = 0.0, dq_alpha = 0.0, dw_alpha = 0.0;
    double total = 0.0;
    double delta_proxy = 0.0;  // delta N0 + delta N0_int
    double ratio = 0.0;
};

StabilityReport stability_experiment(const SolutionBundle& b0, const SolutionBundle& b1,
                                     double delta_N0, double delta_N0_int,
                                     const LinearSolveConfig& cfg);

struct SafonovReport {
    double K = 0.0;
    double modelling_plus_norm = 0.0;
    double rhs_scale = 0.0;
    double ratio = 0.0;
};

/// Diagnostic ratio (M + ||u||_alpha) / (K + ||sigma||_alpha N) for an
/// approximate solution u of the frozen-family equation.
SafonovReport safonov_ratio(const grid::Field& u, const grid::Field& a, const grid::Field& f,
                            double M_u, double u_alpha_norm, double N0,
                            const LinearSolveConfig& cfg);

}  // namespace roughheat::solver
