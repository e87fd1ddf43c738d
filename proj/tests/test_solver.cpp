#include <doctest.h>

#include <cmath>

#include "roughheat/grid.hpp"
#include "roughheat/kernel.hpp"
#include "roughheat/noise.hpp"
#include "roughheat/norms.hpp"
#include "roughheat/refsol.hpp"
#include "roughheat/solver.hpp"

using namespace roughheat;
using grid::Field;
using grid::GridSpec;

namespace {

GridSpec torus(int n) {
    GridSpec g;
    g.n1 = g.n2 = n;
    return g;
}

struct Setup {
    GridSpec g;
    Field f;
    refsol::ParamFamily d2v;
    solver::LinearSolveConfig cfg;
    std::vector<double> U_int;
};

Setup make_setup(int n, long seed, double amplitude = 1e-2) {
    Setup s;
    s.g = torus(n);
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, amplitude, n / 2 - 1);
    s.f = noise::sample_forcing(spec, s.g, seed).field;
    s.cfg.lambda = 0.25;
    s.cfg.norms.alpha = 0.75;
    s.cfg.norms.seed = 99;
    const refsol::ParamGrid pg = s.cfg.param_grid();
    s.d2v.pg = pg;
    for (double a0 : pg.values)
        s.d2v.entries.push_back(
            grid::spectral_derivative(refsol::solve_periodic_v(s.f, a0, true), 1, 2));
    s.U_int.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        s.U_int[i] = 1e-2 * std::cos(2.0 * M_PI * i / static_cast<double>(n));
    return s;
}

}  // namespace

TEST_CASE("linear periodic solve") {
    Setup s = make_setup(64, 5);
    SUBCASE("frozen coefficients reproduce v exactly") {
        const double a0 = s.cfg.param_grid().values[8];
        Field a = Field::sample(s.g, [a0](double, double) { return a0; });
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        solver::PicardResult r = solver::solve_linear_periodic_u(s.f, a, s.d2v, prods, s.cfg);
        CHECK(r.converged);
        const Field v = refsol::solve_periodic_v(s.f, a0, true);
        CHECK(grid::sup_abs_diff(r.u, v) <= 1e-12 * grid::sup_abs(v) + 1e-15);
    }
    SUBCASE("zero forcing gives zero") {
        Field a = Field::sample(s.g, [](double x1, double) {
            return 0.6 + 0.02 * std::cos(2.0 * M_PI * x1);
        });
        refsol::ParamFamily d2z;
        d2z.pg = s.d2v.pg;
        for (std::size_t i = 0; i < s.d2v.entries.size(); ++i) d2z.entries.push_back(Field(s.g));
        solver::OfflineProducts prods = solver::classical_products(a, d2z);
        solver::PicardResult r =
            solver::solve_linear_periodic_u(Field(s.g), a, d2z, prods, s.cfg);
        CHECK(grid::sup_abs(r.u) == 0.0);
    }
    SUBCASE("residuals decay geometrically") {
        Field a = Field::sample(s.g, [](double x1, double x2) {
            return 0.625 + 0.1 * std::cos(2.0 * M_PI * x1) * std::cos(2.0 * M_PI * x2);
        });
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        solver::PicardResult r = solver::solve_linear_periodic_u(s.f, a, s.d2v, prods, s.cfg);
        CHECK(r.converged);
        CHECK(r.contraction_ratio < 0.5);
        // log-ratio fit of successive residuals is consistent with the report
        CHECK(r.residuals.size() >= 3);
    }
    SUBCASE("superposition at fixed coefficients") {
        Field a = Field::sample(s.g, [](double x1, double) {
            return 0.7 + 0.05 * std::sin(2.0 * M_PI * x1);
        });
        Setup s2 = make_setup(64, 6);
        auto solve = [&](const Field& rhs) {
            refsol::ParamFamily fam;
            fam.pg = s.d2v.pg;
            for (double a0 : fam.pg.values)
                fam.entries.push_back(
                    grid::spectral_derivative(refsol::solve_periodic_v(rhs, a0, true), 1, 2));
            solver::OfflineProducts prods = solver::classical_products(a, fam);
            return solver::solve_linear_periodic_u(rhs, a, fam, prods, s.cfg).u;
        };
        const Field u12 = solve(s.f + s2.f);
        const Field u1 = solve(s.f);
        const Field u2 = solve(s2.f);
        CHECK(grid::sup_abs_diff(u12, u1 + u2) <=
              100.0 * s.cfg.picard_tol * grid::sup_abs(u12) + 1e-14);
    }
    SUBCASE("coefficient range is validated") {
        Field a = Field::sample(s.g, [](double, double) { return 0.1; });  // below lambda
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        CHECK_THROWS(solver::solve_linear_periodic_u(s.f, a, s.d2v, prods, s.cfg));
    }
}

TEST_CASE("boundary ansatz") {
    Setup s = make_setup(64, 7);
    GridSpec hp;
    hp.n1 = 64;
    hp.n2 = 65;
    hp.domain = grid::Domain::HalfPlane;
    hp.t_max = 1.0;
    const std::vector<double> u0(64, 0.0);
    SUBCASE("constant boundary coefficient hits the frozen layer") {
        const double a0 = s.cfg.param_grid().values[10];
        const std::vector<double> ab(64, a0);
        Field q = solver::boundary_ansatz_q(s.U_int, u0, ab, hp, s.cfg);
        Field direct = refsol::heat_layer_V(refsol::BoundaryData{s.U_int}, a0, hp, true);
        CHECK(grid::sup_abs_diff(q, direct) <= 1e-12);
    }
    SUBCASE("matching data gives a vanishing layer") {
        const std::vector<double> ab(64, 0.5);
        Field q = solver::boundary_ansatz_q(s.U_int, s.U_int, ab, hp, s.cfg);
        CHECK(grid::sup_abs(q) <= 1e-14);
    }
    SUBCASE("boundary row is exact") {
        std::vector<double> ab(64);
        for (int i = 0; i < 64; ++i) ab[i] = 0.6 + 0.05 * std::sin(2.0 * M_PI * i / 64.0);
        Field q = solver::boundary_ansatz_q(s.U_int, u0, ab, hp, s.cfg);
        for (int i = 0; i < 64; ++i)
            CHECK(std::fabs(q.at(i, 0) - s.U_int[i]) <= 1e-10);
    }
    SUBCASE("out-of-range boundary coefficient is rejected") {
        const std::vector<double> ab(64, 0.05);
        CHECK_THROWS(solver::boundary_ansatz_q(s.U_int, u0, ab, hp, s.cfg));
    }
}

TEST_CASE("correction march") {
    Setup s = make_setup(64, 8);
    GridSpec hp;
    hp.n1 = 64;
    hp.n2 = 65;
    hp.domain = grid::Domain::HalfPlane;
    hp.t_max = 1.0;
    Field a_hp = Field::sample(hp, [](double x1, double) {
        return 0.6 + 0.03 * std::cos(2.0 * M_PI * x1);
    });
    SUBCASE("zero forcing keeps w at zero") {
        GridSpec cells = hp;
        cells.cell_centered = true;
        cells.n2 = hp.n2 - 1;
        Field w = solver::solve_correction_w(Field(cells), a_hp, s.cfg);
        CHECK(grid::sup_abs(w) == 0.0);
    }
    SUBCASE("initial row is zero for nontrivial forcing") {
        GridSpec cells = hp;
        cells.cell_centered = true;
        cells.n2 = hp.n2 - 1;
        Field gc = Field::sample(cells, [](double x1, double x2) {
            return std::cos(2.0 * M_PI * x1) * std::pow(x2, -0.25);
        });
        Field w = solver::solve_correction_w(gc, a_hp, s.cfg);
        for (int i = 0; i < 64; ++i) CHECK(w.at(i, 0) == 0.0);
        CHECK(grid::sup_abs(w) > 0.0);
    }
}

TEST_CASE("assemble_linear bundle invariants") {
    Setup s = make_setup(64, 9);
    SUBCASE("zero data gives the zero bundle") {
        Field a = Field::sample(s.g, [](double, double) { return 0.5; });
        refsol::ParamFamily d2z;
        d2z.pg = s.d2v.pg;
        for (std::size_t i = 0; i < s.d2v.entries.size(); ++i) d2z.entries.push_back(Field(s.g));
        solver::OfflineProducts prods = solver::classical_products(a, d2z);
        const std::vector<double> zero_b(64, 0.0);
        solver::SolutionBundle b =
            solver::assemble_linear(Field(s.g), zero_b, a, prods, s.cfg);
        CHECK(grid::sup_abs(b.U) <= 1e-14);
        CHECK(grid::sup_abs(b.w) <= 1e-14);
    }
    SUBCASE("decomposition identity and w support") {
        Field a = Field::sample(s.g, [](double x1, double x2) {
            return 0.625 + 0.02 * std::cos(2.0 * M_PI * x1) * std::cos(2.0 * M_PI * x2);
        });
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        solver::SolutionBundle b = solver::assemble_linear(s.f, s.U_int, a, prods, s.cfg);
        // U - (u + q + w) vanishes on the half-plane grid
        Field recomposed(b.U.grid);
        for (int j2 = 0; j2 < b.U.grid.n2; ++j2)
            for (int j1 = 0; j1 < b.U.grid.n1; ++j1)
                recomposed.at(j1, j2) =
                    b.u.at(j1, j2 % s.g.n2) + b.q.at(j1, j2) + b.w.at(j1, j2);
        CHECK(grid::sup_abs_diff(recomposed, b.U) <= 1e-12);
        // trivially extended w vanishes for x2 <= 0
        const Field w_ext = grid::trivial_extension(b.w);
        for (int j2 = 0; j2 < w_ext.grid.n2; ++j2) {
            if (w_ext.grid.x2(j2) > 0.0) continue;
            for (int j1 = 0; j1 < w_ext.grid.n1; ++j1) CHECK(w_ext.at(j1, j2) == 0.0);
        }
        CHECK(b.N0 > 0.0);
        CHECK(b.N0_int > 0.0);
        CHECK(std::isfinite(b.safonov));
    }
    SUBCASE("determinism: identical inputs give bit-identical bundles") {
        Field a = Field::sample(s.g, [](double x1, double) {
            return 0.6 + 0.02 * std::sin(2.0 * M_PI * x1);
        });
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        solver::SolutionBundle b1 = solver::assemble_linear(s.f, s.U_int, a, prods, s.cfg);
        solver::SolutionBundle b2 = solver::assemble_linear(s.f, s.U_int, a, prods, s.cfg);
        CHECK(b1.U.v == b2.U.v);
        CHECK(b1.M_u == b2.M_u);
        CHECK(b1.picard_residuals == b2.picard_residuals);
    }
    SUBCASE("the smallness cap on [a]_alpha is enforced") {
        Field a = Field::sample(s.g, [](double x1, double) {
            return 0.625 + 0.3 * std::cos(2.0 * M_PI * x1);
        });
        const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
        CHECK_THROWS(solver::assemble_linear(s.f, s.U_int, a, prods, s.cfg));
    }
}

TEST_CASE("quasilinear fixed point") {
    const int n = 32;
    GridSpec g = torus(n);
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1e-2, n / 2 - 1);
    const Field f = noise::sample_forcing(spec, g, 20).field;
    std::vector<double> U_int(n);
    for (int i = 0; i < n; ++i) U_int[i] = 1e-2 * std::cos(2.0 * M_PI * i / n);
    solver::QuasilinearConfig qc;
    qc.lin.lambda = 0.25;
    qc.lin.norms.alpha = 0.75;
    qc.lin.picard_tol = 1e-9;
    qc.d_tol = 1e-9;
    qc.max_outer = 20;

    SUBCASE("constant nonlinearity converges immediately to the frozen solution") {
        solver::NonlinearityMaps maps;
        const double a0 = refsol::ParamGrid::uniform(0.25, qc.lin.param_count).values[8];
        maps.a = [a0](double) { return a0; };
        maps.da = [](double) { return 0.0; };
        maps.d2a = [](double) { return 0.0; };
        maps.d3a = [](double) { return 0.0; };
        solver::QuasilinearResult r = solver::quasilinear_fixed_point(f, U_int, maps, qc);
        CHECK(r.converged);
        CHECK(r.iterations <= 2);
        // matches the directly assembled frozen solution of the regularized
        // equation (the forcing is mollified at the reconstruction scale)
        const Field v =
            refsol::solve_periodic_v(kernel::convolve(f, qc.reconstruct_T), a0, true);
        GridSpec hp = r.bundle.q.grid;
        std::vector<double> data(U_int.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            data[i] = U_int[i] - v.at(static_cast<int>(i), 0);
        const Field Vp = refsol::heat_layer_V(refsol::BoundaryData{data}, a0, hp, true);
        Field reference(hp);
        for (int j2 = 0; j2 < hp.n2; ++j2)
            for (int j1 = 0; j1 < hp.n1; ++j1)
                reference.at(j1, j2) = v.at(j1, j2 % n) + Vp.at(j1, j2);
        CHECK(grid::sup_abs_diff(r.bundle.U, reference) <= 1e-7);
    }
    SUBCASE("zero data fixes the zero solution") {
        solver::NonlinearityMaps maps;
        maps.a = [](double u) { return 0.625 + 0.25 * std::tanh(u); };
        maps.da = [](double u) { const double c = std::cosh(u); return 0.25 / (c * c); };
        maps.d2a = [](double u) {
            const double t = std::tanh(u);
            const double c = std::cosh(u);
            return -0.5 * t / (c * c);
        };
        maps.d3a = [](double u) {
            const double t = std::tanh(u);
            const double c = std::cosh(u);
            return -0.5 * (1.0 - 3.0 * t * t) / (c * c);
        };
        std::vector<double> zeros(n, 0.0);
        solver::QuasilinearResult r =
            solver::quasilinear_fixed_point(Field(g), zeros, maps, qc);
        CHECK(r.converged);
        CHECK(grid::sup_abs(r.bundle.U) <= 1e-12);
    }
}

TEST_CASE("stability report on identical bundles is zero") {
    Setup s = make_setup(32, 21);
    Field a = Field::sample(s.g, [](double, double) { return 0.53125; });
    const solver::OfflineProducts prods = solver::classical_products(a, s.d2v);
    solver::SolutionBundle b = solver::assemble_linear(s.f, s.U_int, a, prods, s.cfg);
    solver::StabilityReport r = solver::stability_experiment(b, b, 0.0, 0.0, s.cfg);
    CHECK(r.total == 0.0);
}

TEST_CASE("stability of the frozen path matches the linear difference oracle") {
    // with a frozen coefficient the difference of two assembled solutions is
    // itself the assembled solution of the data difference
    Setup s0 = make_setup(32, 30);
    Setup s1 = make_setup(32, 31);
    const double a0 = s0.cfg.param_grid().values[8];
    Field a = Field::sample(s0.g, [a0](double, double) { return a0; });
    auto assemble = [&](const Field& f, const std::vector<double>& ub) {
        refsol::ParamFamily fam;
        fam.pg = s0.cfg.param_grid();
        for (double av : fam.pg.values)
            fam.entries.push_back(
                grid::spectral_derivative(refsol::solve_periodic_v(f, av, true), 1, 2));
        return solver::assemble_linear(f, ub, a, solver::classical_products(a, fam), s0.cfg);
    };
    solver::SolutionBundle b0 = assemble(s0.f, s0.U_int);
    solver::SolutionBundle b1 = assemble(s1.f, s1.U_int);
    std::vector<double> dU(s0.U_int.size());
    for (std::size_t i = 0; i < dU.size(); ++i) dU[i] = s1.U_int[i] - s0.U_int[i];
    solver::SolutionBundle bd = assemble(s1.f - s0.f, dU);
    CHECK(grid::sup_abs_diff(b1.U - b0.U, bd.U) <= 1e-10 * grid::sup_abs(bd.U));
    // and the stability report's pieces are the norms of that difference
    solver::StabilityReport r = solver::stability_experiment(b0, b1, 1.0, 1.0, s0.cfg);
    CHECK(r.total > 0.0);
    CHECK(r.du_alpha ==
          doctest::Approx(grid::sup_abs(bd.u) +
                          norms::holder_seminorm(bd.u, 0.75, s0.cfg.norms).value)
              .epsilon(1e-9));
}

TEST_CASE("quasilinear histories are deterministic") {
    const int n = 32;
    GridSpec g = torus(n);
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1e-2, n / 2 - 1);
    const Field f = noise::sample_forcing(spec, g, 44).field;
    std::vector<double> U_int(n);
    for (int i = 0; i < n; ++i) U_int[i] = 1e-2 * std::sin(2.0 * M_PI * i / n);
    solver::NonlinearityMaps maps;
    maps.a = [](double u) { return 0.625 + 0.25 * std::tanh(u); };
    maps.da = [](double u) { const double c = std::cosh(u); return 0.25 / (c * c); };
    maps.d2a = [](double u) {
        const double t = std::tanh(u);
        const double c = std::cosh(u);
        return -0.5 * t / (c * c);
    };
    maps.d3a = [](double u) {
        const double t = std::tanh(u);
        const double c = std::cosh(u);
        return -0.5 * (1.0 - 3.0 * t * t) / (c * c);
    };
    solver::QuasilinearConfig qc;
    qc.lin.norms.alpha = 0.75;
    qc.lin.picard_tol = 1e-8;
    qc.d_tol = 1e-8;
    solver::QuasilinearResult r1 = solver::quasilinear_fixed_point(f, U_int, maps, qc);
    solver::QuasilinearResult r2 = solver::quasilinear_fixed_point(f, U_int, maps, qc);
    CHECK(r1.d_history == r2.d_history);
    CHECK(r1.bundle.U.v == r2.bundle.U.v);
}
