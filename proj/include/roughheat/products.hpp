#pragma once

#include <string>
#include <vector>

#include "roughheat/grid.hpp"
#include "roughheat/noise.hpp"
#include "roughheat/norms.hpp"
#include "roughheat/refsol.hpp"

namespace roughheat::products {

enum class Kind { Renormalized, Leibniz, Classical, Combined, Reconstructed };

struct ProductHandle {
    Kind kind = Kind::Classical;
    double eps = 0.0;
    std::vector<double> counterterm;  // flattened (a0, a0') table when renormalized
    std::string inputs;
    std::string to_json() const;
};

/// Renormalization constant g2(eps, a0, a0') = <v_eps(., a0) d1^2 v_eps(., a0')>.
/// Stationarity reduces the expectation to the mode sum
///   sum_k Chat(k) |mhat_eps(k)|^2 (-k1^2) Re[ ((i k2 + a0 k1^2 + 1)(-i k2 + a0' k1^2 + 1))^{-1} ],
/// which is what this evaluates (the Monte-Carlo cross-check lives in the tests).
double renorm_constant(const noise::CovarianceSpec& spec, double eps, double a0, double a0p,
                       kernel::MollifierSpec::Base base = kernel::MollifierSpec::Base::Psi,
                       double period2 = 1.0);

/// v_eps(., a0) * d1^2 v_eps(., a0') - g2(eps, a0, a0').
grid::Field renormalized_product(const noise::ForcingSample& f, double eps, double a0, double a0p,
                                 ProductHandle* meta = nullptr);

/// Same product without the counterterm (divergence diagnostics).
grid::Field bare_product(const noise::ForcingSample& f, double eps, double a0, double a0p);

/// G diamond d1^2 F := d1^2(F G) - 2 d1(F d1 G) + F d1^2 G with the outer
/// derivatives spectral; dG and d2G are the pointwise-evaluable x1-derivatives
/// of G (analytic for heat layers).
grid::Field leibniz_product(const grid::Field& G, const grid::Field& dG, const grid::Field& d2G,
                            const grid::Field& F);

/// Classical product F * d1^2 G for weighted G; the measured weight constant
///   C(G) = sup |d1^2 G| / (|x2|^{(alpha-2)/2} + |x2|^{(2 alpha - 2)/2})
/// is checked against the cap before multiplying.
double measure_weight_constant(const grid::Field& d2G, double alpha);
grid::Field classical_singular_product(const grid::Field& F, const grid::Field& d2G, double alpha,
                                       double weight_cap = 1e12);

/// Sum of constituent product fields ((V~ + v) diamond d1^2 v and the full
/// product are assembled this way).
grid::Field combined_product(const std::vector<const grid::Field*>& parts, ProductHandle* meta,
                             Kind kind = Kind::Combined);

/// Renormalized offline family over a (a0, a0') parameter grid:
/// F[i] = v_eps(., a0_i), h[j] = d1^2 v_eps(., a0'_j), P[i*nh+j] the
/// renormalized products; handle carries the counterterm table.
norms::CommutatorFamily renormalized_family(const noise::ForcingSample& f, double eps,
                                            const refsol::ParamGrid& pg, ProductHandle* meta,
                                            bool renormalize = true);

/// Finite-scale reconstruction of U diamond h for U modelled after w(., a0')
/// according to (sigma, aparam) with linear weight nu:
///   (U dia h)_T = U h_T - sigma E[ w(., a0') h_T - (w(., a0') dia h)_T ]
///                 - nu (x1 h_T - (x1 h)_T),
/// E evaluating a0' at aparam(x) by cubic interpolation.
struct ModelData {
    const refsol::ParamFamily* w = nullptr;              // model family w(., a0')
    const refsol::ParamFamily* base_products = nullptr;  // (w(., a0') dia h) per a0'
    const grid::Field* sigma = nullptr;
    const grid::Field* nu = nullptr;
    const grid::Field* aparam = nullptr;
};

grid::Field reconstruct_U_product(const grid::Field& U, const ModelData& model,
                                  const grid::Field& h, double T_eval);

/// Mirror reconstruction of F diamond d1^2 U for modelled U:
///   (F dia d1^2 U)_T = F (d1^2 U)_T - sigma E[ F (d1^2 V(., a0))_T - (F dia d1^2 V(., a0))_T ].
struct MirrorModelData {
    const refsol::ParamFamily* d2V = nullptr;            // d1^2 V(., a0)
    const refsol::ParamFamily* base_products = nullptr;  // F dia d1^2 V(., a0)
    const grid::Field* sigma = nullptr;
    const grid::Field* aparam = nullptr;
};

grid::Field reconstruct_F_d2U(const grid::Field& F, const grid::Field& U,
                              const MirrorModelData& model, double T_eval);

/// Sup-norm Cauchy increments of a scale-indexed reconstruction along a ladder.
std::vector<double> reconstruction_increments(
    const std::function<grid::Field(double)>& at_scale, const std::vector<double>& ladder);

}  // namespace roughheat::products
