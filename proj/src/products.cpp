#include "roughheat/products.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "roughheat/field_io.hpp"
#include "roughheat/kernel.hpp"
#include "roughheat/util.hpp"

namespace roughheat::products {

std::string ProductHandle::to_json() const {
    std::ostringstream os;
    const char* names[] = {"renormalized", "leibniz", "classical", "combined", "reconstructed"};
    os << "{\"kind\":\"" << names[static_cast<int>(kind)] << "\",\"eps\":"
       << io::format_double(eps) << ",\"inputs\":\"" << inputs << "\",\"counterterm\":[";
    for (std::size_t i = 0; i < counterterm.size(); ++i)
        os << (i ? "," : "") << io::format_double(counterterm[i]);
    os << "]}";
    return os.str();
}

double renorm_constant(const noise::CovarianceSpec& spec, double eps, double a0, double a0p,
                       kernel::MollifierSpec::Base base, double period2) {
    spec.validate();
    kernel::MollifierSpec ms;
    ms.epsilon = eps;
    ms.base = base;
    double sum = 0.0;
    for (int s2 = -spec.cutoff; s2 <= spec.cutoff; ++s2) {
        const double k2 = 2.0 * M_PI * s2 / period2;
        for (int s1 = -spec.cutoff; s1 <= spec.cutoff; ++s1) {
            if (s1 == 0) continue;  // k1^2 factor kills the column
            const double k1 = 2.0 * M_PI * s1;
            const double k1sq = k1 * k1;
            const double m = kernel::mollifier_hat(k1, k2, ms);
            const std::complex<double> za(a0 * k1sq + 1.0, k2);
            const std::complex<double> zb(a0p * k1sq + 1.0, -k2);
            sum += spec.chat(k1, k2) * m * m * (-k1sq) * (1.0 / (za * zb)).real();
        }
    }
    return sum;
}

namespace {

grid::Field mollified_v(const noise::ForcingSample& f, double eps, double a0) {
    return refsol::solve_periodic_v(noise::mollified_forcing(f, eps), a0, true);
}

}  // namespace

grid::Field bare_product(const noise::ForcingSample& f, double eps, double a0, double a0p) {
    const grid::Field feps = noise::mollified_forcing(f, eps);
    const grid::Field va = refsol::solve_periodic_v(feps, a0, true);
    const grid::Field vb = refsol::solve_periodic_v(feps, a0p, true);
    return grid::pointwise(va, grid::spectral_derivative(vb, 1, 2));
}

grid::Field renormalized_product(const noise::ForcingSample& f, double eps, double a0, double a0p,
                                 ProductHandle* meta) {
    grid::Field p = bare_product(f, eps, a0, a0p);
    const double g2 = renorm_constant(f.spec, eps, a0, a0p, kernel::MollifierSpec::Base::Psi,
                                      f.field.grid.x2_period());
    for (double& v : p.v) v -= g2;
    if (meta) {
        meta->kind = Kind::Renormalized;
        meta->eps = eps;
        meta->counterterm = {g2};
        meta->inputs = "v_eps(a0) d1^2 v_eps(a0')";
    }
    return p;
}

grid::Field leibniz_product(const grid::Field& G, const grid::Field& dG, const grid::Field& d2G,
                            const grid::Field& F) {
    if (!(G.grid == F.grid) || !(dG.grid == F.grid) || !(d2G.grid == F.grid))
        throw std::invalid_argument("leibniz_product: grids must match");
    const grid::Field t1 = grid::spectral_derivative(grid::pointwise(F, G), 1, 2);
    const grid::Field t2 = grid::spectral_derivative(grid::pointwise(F, dG), 1, 1);
    const grid::Field t3 = grid::pointwise(F, d2G);
    return (t1 - (2.0 * t2)) + t3;
}

double measure_weight_constant(const grid::Field& d2G, double alpha) {
    double c = 0.0;
    for (int j2 = 0; j2 < d2G.grid.n2; ++j2) {
        const double x2 = d2G.grid.x2(j2);
        if (x2 == 0.0) continue;
        const double w = std::pow(std::fabs(x2), 0.5 * (alpha - 2.0)) +
                         std::pow(std::fabs(x2), 0.5 * (2.0 * alpha - 2.0));
        for (int j1 = 0; j1 < d2G.grid.n1; ++j1)
            c = std::max(c, std::fabs(d2G.at(j1, j2)) / w);
    }
    return c;
}

grid::Field classical_singular_product(const grid::Field& F, const grid::Field& d2G, double alpha,
                                       double weight_cap) {
    const double c = measure_weight_constant(d2G, alpha);
    if (c > weight_cap)
        throw std::runtime_error("classical_singular_product: weight constant exceeds the cap");
    return grid::pointwise(F, d2G);
}

grid::Field combined_product(const std::vector<const grid::Field*>& parts, ProductHandle* meta,
                             Kind kind) {
    if (parts.empty()) throw std::invalid_argument("combined_product: no parts");
    grid::Field sum = *parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (!(parts[i]->grid == sum.grid))
            throw std::invalid_argument("combined_product: grid mismatch between parts");
        sum = sum + *parts[i];
    }
    if (meta) {
        meta->kind = kind;
        meta->inputs = "sum of " + std::to_string(parts.size()) + " parts";
    }
    return sum;
}

norms::CommutatorFamily renormalized_family(const noise::ForcingSample& f, double eps,
                                            const refsol::ParamGrid& pg, ProductHandle* meta,
                                            bool renormalize) {
    const int np = static_cast<int>(pg.values.size());
    norms::CommutatorFamily fam;
    fam.spacingF = pg.spacing();
    fam.spacingH = pg.spacing();
    fam.F.assign(np, grid::Field(f.field.grid));
    fam.h.assign(np, grid::Field(f.field.grid));
    util::parallel_for(np, [&](int i) {
        fam.F[i] = mollified_v(f, eps, pg.values[i]);
        fam.h[i] = grid::spectral_derivative(mollified_v(f, eps, pg.values[i]), 1, 2);
    });
    fam.P.assign(static_cast<std::size_t>(np) * np, grid::Field(f.field.grid));
    std::vector<double> g2(static_cast<std::size_t>(np) * np, 0.0);
    util::parallel_for(np * np, [&](int ij) {
        const int i = ij / np, j = ij % np;
        grid::Field p = grid::pointwise(fam.F[i], fam.h[j]);
        if (renormalize) {
            g2[ij] = renorm_constant(f.spec, eps, pg.values[i], pg.values[j],
                                     kernel::MollifierSpec::Base::Psi, f.field.grid.x2_period());
            for (double& v : p.v) v -= g2[ij];
        }
        fam.P[ij] = std::move(p);
    });
    if (meta) {
        meta->kind = renormalize ? Kind::Renormalized : Kind::Classical;
        meta->eps = eps;
        meta->counterterm = g2;
        meta->inputs = "v_eps family over the parameter grid";
    }
    return fam;
}

grid::Field reconstruct_U_product(const grid::Field& U, const ModelData& model,
                                  const grid::Field& h, double T_eval) {
    if (!model.w || !model.base_products || !model.sigma || !model.nu || !model.aparam)
        throw std::invalid_argument("reconstruct_U_product: incomplete model data");
    const grid::GridSpec& g = U.grid;
    const grid::Field hT = kernel::convolve(h, T_eval);
    const grid::Field xc = kernel::coordinate_commutator(h, T_eval);

    // (w(., a0') diamond h)_T per parameter entry
    refsol::ParamFamily baseT;
    baseT.pg = model.base_products->pg;
    baseT.entries.assign(model.base_products->entries.size(), grid::Field(g));
    util::parallel_for(static_cast<int>(baseT.entries.size()), [&](int i) {
        baseT.entries[i] = kernel::convolve(model.base_products->entries[i], T_eval);
    });

    grid::Field out(g);
    util::parallel_for(g.n2, [&](int j2) {
        for (int j1 = 0; j1 < g.n1; ++j1) {
            const double a0 = model.aparam->at(j1, j2);
            const double s = model.sigma->at(j1, j2);
            const double wdiag = model.w->eval(a0, j1, j2);
            const double commutator_model =
                s * (wdiag * hT.at(j1, j2) - baseT.eval(a0, j1, j2)) +
                model.nu->at(j1, j2) * xc.at(j1, j2);
            out.at(j1, j2) = U.at(j1, j2) * hT.at(j1, j2) - commutator_model;
        }
    });
    return out;
}

grid::Field reconstruct_F_d2U(const grid::Field& F, const grid::Field& U,
                              const MirrorModelData& model, double T_eval) {
    if (!model.d2V || !model.base_products || !model.sigma || !model.aparam)
        throw std::invalid_argument("reconstruct_F_d2U: incomplete model data");
    const grid::GridSpec& g = U.grid;
    const grid::Field d2U_T = kernel::convolve(grid::spectral_derivative(U, 1, 2), T_eval);

    refsol::ParamFamily d2VT, baseT;
    d2VT.pg = model.d2V->pg;
    baseT.pg = model.base_products->pg;
    d2VT.entries.assign(model.d2V->entries.size(), grid::Field(g));
    baseT.entries.assign(model.base_products->entries.size(), grid::Field(g));
    util::parallel_for(static_cast<int>(d2VT.entries.size()), [&](int i) {
        d2VT.entries[i] = kernel::convolve(model.d2V->entries[i], T_eval);
        baseT.entries[i] = kernel::convolve(model.base_products->entries[i], T_eval);
    });

    grid::Field out(g);
    util::parallel_for(g.n2, [&](int j2) {
        for (int j1 = 0; j1 < g.n1; ++j1) {
            const double a0 = model.aparam->at(j1, j2);
            const double s = model.sigma->at(j1, j2);
            const double commutator_model =
                s * (F.at(j1, j2) * d2VT.eval(a0, j1, j2) - baseT.eval(a0, j1, j2));
            out.at(j1, j2) = F.at(j1, j2) * d2U_T.at(j1, j2) - commutator_model;
        }
    });
    return out;
}

std::vector<double> reconstruction_increments(
    const std::function<grid::Field(double)>& at_scale, const std::vector<double>& ladder) {
    std::vector<double> inc;
    if (ladder.size() < 2) return inc;
    grid::Field prev = at_scale(ladder[0]);
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        grid::Field cur = at_scale(ladder[i]);
        inc.push_back(grid::sup_abs_diff(cur, prev));
        prev = std::move(cur);
    }
    return inc;
}

}  // namespace roughheat::products
