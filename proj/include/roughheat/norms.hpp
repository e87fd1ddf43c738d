#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughheat/grid.hpp"
#include "roughheat/refsol.hpp"

namespace roughheat::norms {

struct NormConfig {
    double alpha = 0.75;
    std::vector<double> dyadic_T;  // descending ladder; default ladder(32)
    int pair_budget = 200000;
    std::uint64_t seed = 1u;
    int exhaustive_limit = 4096;  // grids with <= this many points use all pairs

    static std::vector<double> ladder(int J = 32, double top = 1.0);
    const std::vector<double>& ladder_or_default() const;
};

enum class Method { Exhaustive, Sampled, Ladder };

struct PairWitness {
    int j1a = 0, j2a = 0, j1b = 0, j2b = 0;
};

struct NormReport {
    double value = 0.0;
    Method method = Method::Sampled;
    double alpha = 0.0;
    PairWitness pair;
    double scale = 0.0;  // argmax ladder scale for ladder-type reports
    std::vector<double> ladder;
    std::vector<double> ladder_values;
    std::string to_json() const;
};

/// Parabolic Hoelder seminorm; alpha in (0,1) by pair sup, (1,2) recurses on
/// d1 f, (2,3) on d1^2 f and d2 f.  alpha in {1,2} is rejected.
NormReport holder_seminorm(const grid::Field& f, double alpha, const NormConfig& cfg);

/// Sup restricted to pairs with d(x,y) <= 1.
NormReport local_holder_seminorm(const grid::Field& f, double alpha, const NormConfig& cfg);

/// Re-evaluate the quotient of a stored witness pair (alpha in (0,1)).
double holder_quotient(const grid::Field& f, double alpha, const PairWitness& w);

/// ||f||_{-beta} = max over the ladder of (T^{1/4})^beta ||f_T||_inf.
NormReport neg_norm_conv(const grid::Field& f, double beta, const NormConfig& cfg);

/// Triplet upper bound for [f]_{alpha-2}: solve (d1^4 - d2^2 + 1) u = f
/// spectrally and return [d1^2 u]_a + [d2 u]_a + [u]_a + ||u||.
NormReport neg_norm_triplet(const grid::Field& f, double alpha, const NormConfig& cfg);

/// Elliptic Hoelder norm of periodic boundary data (sup + seminorm).
double holder_norm_boundary(const std::vector<double>& g, double alpha);
double holder_seminorm_boundary(const std::vector<double>& g, double alpha);

struct ModellingReport {
    double M = 0.0;
    grid::Field nu;       // fitted per-point least-squares minimizer
    double alpha = 0.0;   // base exponent; the remainder is weighted by d^(2 alpha)
    Method method = Method::Sampled;
    PairWitness pair;
};

/// Measured modelling constant of U after the families w_i(., a0) according
/// to parameter fields a_i and Gubinelli coefficients sigma_i: fits nu per
/// base point by least squares over the sampled pairs, then takes the sup of
/// the weighted remainder.
ModellingReport modelling_constant(const grid::Field& U,
                                   const std::vector<const refsol::ParamFamily*>& families,
                                   const std::vector<const grid::Field*>& a,
                                   const std::vector<const grid::Field*>& sigma,
                                   const NormConfig& cfg);

/// Same but measuring against an explicitly supplied nu (witness re-check and
/// trivial-modelling oracle).
double modelling_sup_given_nu(const grid::Field& U,
                              const std::vector<const refsol::ParamFamily*>& families,
                              const std::vector<const grid::Field*>& a,
                              const std::vector<const grid::Field*>& sigma,
                              const grid::Field& nu, const NormConfig& cfg);

/// Families entering a commutator sweep: commutator C_ij = F_i * (h_j)_T -
/// (P_ij)_T with P_ij = F_i diamond h_j.  F may be a singleton (no parameter).
struct CommutatorFamily {
    std::vector<grid::Field> F;
    std::vector<grid::Field> h;
    std::vector<grid::Field> P;  // P[i * h.size() + j]
    double spacingF = 0.0;       // parameter spacing for difference quotients
    double spacingH = 0.0;
};

/// max over the ladder, parameters, and difference quotients up to orders
/// (dF, dH) of (T^{1/4})^{2-2alpha} || D^{m,n} [F_i, (.)_T] diamond h_j ||.
NormReport commutator_norm(const CommutatorFamily& fam, double alpha, int dF, int dH,
                           const NormConfig& cfg);

struct TailDecayRow {
    double L = 0.0;
    double T = 0.0;
    double sup = 0.0;
};

struct TailDecayReport {
    std::vector<TailDecayRow> rows;
    double fitted_T_exponent = 0.0;  // d log sup / d log T^{1/4}
    double fitted_L_exponent = 0.0;  // d log sup / d log L
};

/// Decay of ||f_T|| on { x2 <= -L } for trivially extended fields.
TailDecayReport tail_decay(const grid::Field& f, const std::vector<double>& L_ladder,
                           const std::vector<double>& T_ladder);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace roughheat::norms
