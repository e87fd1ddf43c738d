#include "roughheat/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "roughheat/field_io.hpp"
#include "roughheat/kernel.hpp"
#include "roughheat/noise.hpp"
#include "roughheat/simd/kernels.hpp"
#include "roughheat/util.hpp"

namespace roughheat::norms {

std::vector<double> NormConfig::ladder(int J, double top) {
    std::vector<double> l;
    l.reserve(J + 1);
    for (int j = 0; j <= J; ++j) l.push_back(top * std::pow(2.0, -j));
    return l;
}

const std::vector<double>& NormConfig::ladder_or_default() const {
    static const std::vector<double> def = ladder(32, 1.0);
    return dyadic_T.empty() ? def : dyadic_T;
}

std::string NormReport::to_json() const {
    std::ostringstream os;
    os << "{\"value\":" << io::format_double(value) << ",\"method\":\""
       << (method == Method::Exhaustive ? "exhaustive"
                                        : (method == Method::Sampled ? "sampled" : "ladder"))
       << "\",\"alpha\":" << io::format_double(alpha);
    if (method == Method::Ladder) {
        os << ",\"witness\":{\"scale\":" << io::format_double(scale) << "}";
        os << ",\"ladder\":[";
        for (std::size_t i = 0; i < ladder.size(); ++i)
            os << (i ? "," : "") << io::format_double(ladder[i]);
        os << "]";
    } else {
        os << ",\"witness\":{\"pair\":[" << pair.j1a << "," << pair.j2a << "," << pair.j1b << ","
           << pair.j2b << "]}";
    }
    os << "}";
    return os.str();
}

namespace {

using grid::Field;
using grid::GridSpec;
using grid::Point;

double pair_quotient(const Field& f, double alpha, int j1a, int j2a, int j1b, int j2b) {
    const GridSpec& g = f.grid;
    const Point xa{g.x1(j1a), g.x2(j2a)};
    const Point xb{g.x1(j1b), g.x2(j2b)};
    const double d = grid::parabolic_distance(g, xa, xb);
    if (d == 0.0) return 0.0;
    return std::fabs(f.at(j1a, j2a) - f.at(j1b, j2b)) / std::pow(d, alpha);
}

struct SupResult {
    double value = 0.0;
    PairWitness w;
};

/// Deterministic seeded pair stream mixing uniform and dyadic-local offsets.
void sampled_pair(std::uint64_t seed, int idx, const GridSpec& g, PairWitness& p) {
    auto u = [&](std::uint32_t d) { return noise::uniform01(seed, idx, 7777, d); };
    p.j1a = static_cast<int>(u(0) * g.n1) % g.n1;
    p.j2a = static_cast<int>(u(1) * g.n2) % g.n2;
    if (u(2) < 0.5) {
        p.j1b = static_cast<int>(u(3) * g.n1) % g.n1;
        p.j2b = static_cast<int>(u(4) * g.n2) % g.n2;
    } else {
        const double emax = std::log2(static_cast<double>(std::max(g.n1, g.n2)));
        const double e = u(3) * emax;
        const double rho = std::pow(2.0, e) * g.dx1();  // parabolic radius
        const int d1 = static_cast<int>(std::lround((2.0 * u(4) - 1.0) * rho / g.dx1()));
        int d2 = static_cast<int>(std::lround((2.0 * u(5) - 1.0) * rho * rho / g.dx2()));
        if (d1 == 0 && d2 == 0) d2 = 1;
        p.j1b = ((p.j1a + d1) % g.n1 + g.n1) % g.n1;
        int j2b = p.j2a + d2;
        if (g.periodic_x2()) {
            j2b = (j2b % g.n2 + g.n2) % g.n2;
        } else {
            if (j2b < 0) j2b = -j2b;
            if (j2b >= g.n2) j2b = 2 * g.n2 - 2 - j2b;
            j2b = std::clamp(j2b, 0, g.n2 - 1);
        }
        p.j2b = j2b;
    }
}

SupResult sup_over_pairs(const Field& f, double alpha, const NormConfig& cfg, bool local_only) {
    const GridSpec& g = f.grid;
    const std::size_t npts = g.size();
    SupResult best;
    if (npts <= static_cast<std::size_t>(cfg.exhaustive_limit)) {
        for (std::size_t a = 0; a < npts; ++a) {
            const int j1a = static_cast<int>(a) % g.n1;
            const int j2a = static_cast<int>(a) / g.n1;
            for (std::size_t b = a + 1; b < npts; ++b) {
                const int j1b = static_cast<int>(b) % g.n1;
                const int j2b = static_cast<int>(b) / g.n1;
                if (local_only) {
                    const double d = grid::parabolic_distance(
                        g, {g.x1(j1a), g.x2(j2a)}, {g.x1(j1b), g.x2(j2b)});
                    if (d > 1.0) continue;
                }
                const double q = pair_quotient(f, alpha, j1a, j2a, j1b, j2b);
                if (q > best.value) best = {q, {j1a, j2a, j1b, j2b}};
            }
        }
        return best;
    }
    constexpr int kChunks = 64;
    std::vector<SupResult> partial(kChunks);
    const int per = cfg.pair_budget / kChunks;
    util::parallel_for(kChunks, [&](int c) {
        SupResult loc;
        for (int t = 0; t < per; ++t) {
            PairWitness p;
            sampled_pair(cfg.seed, c * per + t, g, p);
            if (p.j1a == p.j1b && p.j2a == p.j2b) continue;
            if (local_only) {
                const double d = grid::parabolic_distance(
                    g, {g.x1(p.j1a), g.x2(p.j2a)}, {g.x1(p.j1b), g.x2(p.j2b)});
                if (d > 1.0) continue;
            }
            const double q = pair_quotient(f, alpha, p.j1a, p.j2a, p.j1b, p.j2b);
            if (q > loc.value) loc = {q, p};
        }
        partial[c] = loc;
    });
    for (const auto& r : partial)
        if (r.value > best.value) best = r;
    return best;
}

NormReport sup_report(const Field& f, double alpha, const NormConfig& cfg, bool local_only) {
    SupResult r = sup_over_pairs(f, alpha, cfg, local_only);
    NormReport rep;
    rep.value = r.value;
    rep.alpha = alpha;
    rep.pair = r.w;
    rep.method = f.grid.size() <= static_cast<std::size_t>(cfg.exhaustive_limit)
                     ? Method::Exhaustive
                     : Method::Sampled;
    return rep;
}

}  // namespace

double holder_quotient(const Field& f, double alpha, const PairWitness& w) {
    return pair_quotient(f, alpha, w.j1a, w.j2a, w.j1b, w.j2b);
}

NormReport holder_seminorm(const Field& f, double alpha, const NormConfig& cfg) {
    if (alpha == 1.0 || alpha == 2.0)
        throw std::invalid_argument("holder_seminorm: alpha in {1,2} is rejected");
    if (alpha <= 0.0 || alpha >= 3.0)
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1) u (1,2) u (2,3)");
    if (alpha < 1.0) return sup_report(f, alpha, cfg, false);
    if (!f.grid.periodic_x2())
        throw std::invalid_argument("holder_seminorm: alpha > 1 needs spectral derivatives (torus)");
    if (alpha < 2.0) {
        NormReport rep = holder_seminorm(grid::spectral_derivative(f, 1, 1), alpha - 1.0, cfg);
        rep.alpha = alpha;
        return rep;
    }
    NormReport a = holder_seminorm(grid::spectral_derivative(f, 1, 2), alpha - 2.0, cfg);
    NormReport b = holder_seminorm(grid::spectral_derivative(f, 2, 1), alpha - 2.0, cfg);
    NormReport rep = a.value >= b.value ? a : b;
    rep.value = a.value + b.value;
    rep.alpha = alpha;
    return rep;
}

NormReport local_holder_seminorm(const Field& f, double alpha, const NormConfig& cfg) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("local_holder_seminorm: alpha must lie in (0,1)");
    return sup_report(f, alpha, cfg, true);
}

NormReport neg_norm_conv(const Field& f, double beta, const NormConfig& cfg) {
    if (beta <= 0.0) throw std::invalid_argument("neg_norm_conv: beta must be positive");
    const std::vector<double>& ladder = cfg.ladder_or_default();
    if (ladder.empty()) throw std::invalid_argument("neg_norm_conv: ladder empty");
    NormReport rep;
    rep.method = Method::Ladder;
    rep.alpha = beta;
    rep.ladder = ladder;
    rep.ladder_values.resize(ladder.size());
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        const double T = ladder[i];
        const double v = std::pow(std::pow(T, 0.25), beta) * grid::sup_abs(kernel::convolve(f, T));
        rep.ladder_values[i] = v;
        if (v > rep.value) {
            rep.value = v;
            rep.scale = T;
        }
    }
    return rep;
}

NormReport neg_norm_triplet(const Field& f, double alpha, const NormConfig& cfg) {
    if (!f.grid.periodic_x2()) throw std::invalid_argument("neg_norm_triplet: torus field required");
    grid::Spectrum s = grid::spectrum_of(f);
    for (int m2 = 0; m2 < f.grid.n2; ++m2) {
        const double k2 = grid::k2_of(f.grid, m2);
        for (int m1 = 0; m1 < f.grid.n1; ++m1) {
            const double k1 = grid::k1_of(f.grid, m1);
            s.c[static_cast<std::size_t>(m2) * f.grid.n1 + m1] /=
                (k1 * k1 * k1 * k1 + k2 * k2 + 1.0);
        }
    }
    const Field u = grid::field_of(s);
    NormReport rep;
    rep.alpha = alpha;
    const NormReport r1 = holder_seminorm(grid::spectral_derivative(u, 1, 2), alpha, cfg);
    const NormReport r2 = holder_seminorm(grid::spectral_derivative(u, 2, 1), alpha, cfg);
    const NormReport r3 = holder_seminorm(u, alpha, cfg);
    rep.value = r1.value + r2.value + r3.value + grid::sup_abs(u);
    rep.method = r3.method;
    rep.pair = r1.value >= r2.value ? r1.pair : r2.pair;
    return rep;
}

double holder_seminorm_boundary(const std::vector<double>& g, double alpha) {
    const int n = static_cast<int>(g.size());
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = std::fabs(grid::min_image((j - i) / static_cast<double>(n), 1.0));
            if (d == 0.0) continue;
            const double q = std::fabs(g[i] - g[j]) / std::pow(d, alpha);
            best = std::max(best, q);
        }
    }
    return best;
}

double holder_norm_boundary(const std::vector<double>& g, double alpha) {
    double sup = 0.0;
    for (double v : g) sup = std::max(sup, std::fabs(v));
    return sup + holder_seminorm_boundary(g, alpha);
}

ModellingReport modelling_constant(const Field& U,
                                   const std::vector<const refsol::ParamFamily*>& families,
                                   const std::vector<const grid::Field*>& a,
                                   const std::vector<const grid::Field*>& sigma,
                                   const NormConfig& cfg) {
    if (families.size() != sigma.size() || families.size() != a.size())
        throw std::invalid_argument("modelling_constant: one sigma and one a per family required");
    const GridSpec& g = U.grid;
    for (std::size_t i = 0; i < families.size(); ++i) {
        if (!(families[i]->entries.front().grid == g))
            throw std::invalid_argument("modelling_constant: family grid mismatch");
        for (double av : a[i]->v)
            if (av < families[i]->pg.lambda - 1e-12 || av > 1.0 + 1e-12)
                throw std::invalid_argument(
                    "modelling_constant: parameter field leaves [lambda, 1]");
    }

    // model increment at (y | base x): sum_i sigma_i(x) (w_i(y, a_i(x)) - w_i(x, a_i(x)))
    auto model_increment = [&](int j1a, int j2a, int j1b, int j2b) {
        double m = 0.0;
        for (std::size_t i = 0; i < families.size(); ++i) {
            const double s = sigma[i]->at(j1a, j2a);
            if (s == 0.0) continue;
            const double a0 = a[i]->at(j1a, j2a);
            m += s * (families[i]->eval(a0, j1b, j2b) - families[i]->eval(a0, j1a, j2a));
        }
        return m;
    };

    // fit nu everywhere: least squares over a fixed per-point offset sample
    ModellingReport rep;
    rep.alpha = cfg.alpha;
    rep.nu = Field(g);
    const int ny = 32;
    util::parallel_for(g.n2, [&](int j2a) {
        for (int j1a = 0; j1a < g.n1; ++j1a) {
            double num = 0.0, den = 0.0;
            for (int t = 0; t < ny; ++t) {
                // local parabolic offsets: the linear weight is a small-scale
                // object, and contamination from the x2-variation enters only
                // at order rho relative to the signal
                auto u = [&](std::uint32_t d) {
                    return noise::uniform01(cfg.seed ^ 0x5bd1e995u,
                                            j2a * g.n1 + j1a + t * 65537, 9999, d);
                };
                const double rho = (1.0 + 3.0 * u(0)) * g.dx1();
                int d1 = static_cast<int>(std::lround((2.0 * u(1) - 1.0) * rho / g.dx1()));
                int d2 = static_cast<int>(std::lround((2.0 * u(2) - 1.0) * rho * rho / g.dx2()));
                if (d1 == 0 && d2 == 0) d1 = u(1) < 0.5 ? 1 : -1;
                int j1b = ((j1a + d1) % g.n1 + g.n1) % g.n1;
                int j2b = j2a + d2;
                if (g.periodic_x2())
                    j2b = (j2b % g.n2 + g.n2) % g.n2;
                else
                    j2b = std::clamp(j2b, 0, g.n2 - 1);
                if (j1b == j1a && j2b == j2a) continue;
                const double t1 = grid::min_image(g.x1(j1b) - g.x1(j1a), 1.0);
                const Point xa{g.x1(j1a), g.x2(j2a)};
                const Point xb{g.x1(j1b), g.x2(j2b)};
                const double d = grid::parabolic_distance(g, xa, xb);
                if (d == 0.0) continue;
                const double w = std::pow(d, -2.0 * cfg.alpha);
                const double r =
                    U.at(j1b, j2b) - U.at(j1a, j2a) - model_increment(j1a, j2a, j1b, j2b);
                num += w * w * r * t1;
                den += w * w * t1 * t1;
            }
            rep.nu.at(j1a, j2a) = den > 0.0 ? num / den : 0.0;
        }
    });

    // sup of the weighted remainder with the fitted nu
    const std::size_t npts = g.size();
    auto remainder = [&](int j1a, int j2a, int j1b, int j2b) {
        const Point xa{g.x1(j1a), g.x2(j2a)};
        const Point xb{g.x1(j1b), g.x2(j2b)};
        const double d = grid::parabolic_distance(g, xa, xb);
        if (d == 0.0) return 0.0;
        const double t1 = grid::min_image(g.x1(j1b) - g.x1(j1a), 1.0);
        const double r = U.at(j1b, j2b) - U.at(j1a, j2a) - model_increment(j1a, j2a, j1b, j2b) -
                         rep.nu.at(j1a, j2a) * t1;
        return std::fabs(r) / std::pow(d, 2.0 * cfg.alpha);
    };

    SupResult best;
    if (npts <= static_cast<std::size_t>(cfg.exhaustive_limit)) {
        rep.method = Method::Exhaustive;
        for (std::size_t ia = 0; ia < npts; ++ia)
            for (std::size_t ib = 0; ib < npts; ++ib) {
                if (ia == ib) continue;
                const int j1a = static_cast<int>(ia) % g.n1, j2a = static_cast<int>(ia) / g.n1;
                const int j1b = static_cast<int>(ib) % g.n1, j2b = static_cast<int>(ib) / g.n1;
                const double q = remainder(j1a, j2a, j1b, j2b);
                if (q > best.value) best = {q, {j1a, j2a, j1b, j2b}};
            }
    } else {
        rep.method = Method::Sampled;
        constexpr int kChunks = 64;
        std::vector<SupResult> partial(kChunks);
        const int per = cfg.pair_budget / kChunks;
        util::parallel_for(kChunks, [&](int c) {
            SupResult loc;
            for (int t = 0; t < per; ++t) {
                PairWitness p;
                sampled_pair(cfg.seed, c * per + t, g, p);
                if (p.j1a == p.j1b && p.j2a == p.j2b) continue;
                const double q = remainder(p.j1a, p.j2a, p.j1b, p.j2b);
                if (q > loc.value) loc = {q, p};
            }
            partial[c] = loc;
        });
        for (const auto& r : partial)
            if (r.value > best.value) best = r;
    }
    rep.M = best.value;
    rep.pair = best.w;
    return rep;
}

double modelling_sup_given_nu(const Field& U,
                              const std::vector<const refsol::ParamFamily*>& families,
                              const std::vector<const grid::Field*>& a,
                              const std::vector<const grid::Field*>& sigma,
                              const Field& nu, const NormConfig& cfg) {
    const GridSpec& g = U.grid;
    auto model_increment = [&](int j1a, int j2a, int j1b, int j2b) {
        double m = 0.0;
        for (std::size_t i = 0; i < families.size(); ++i) {
            const double s = sigma[i]->at(j1a, j2a);
            if (s == 0.0) continue;
            const double a0 = a[i]->at(j1a, j2a);
            m += s * (families[i]->eval(a0, j1b, j2b) - families[i]->eval(a0, j1a, j2a));
        }
        return m;
    };
    double best = 0.0;
    const std::size_t npts = g.size();
    const bool exhaustive = npts <= static_cast<std::size_t>(cfg.exhaustive_limit);
    const int total = exhaustive ? 0 : cfg.pair_budget;
    auto eval_pair = [&](int j1a, int j2a, int j1b, int j2b) {
        const Point xa{g.x1(j1a), g.x2(j2a)};
        const Point xb{g.x1(j1b), g.x2(j2b)};
        const double d = grid::parabolic_distance(g, xa, xb);
        if (d == 0.0) return 0.0;
        const double t1 = grid::min_image(g.x1(j1b) - g.x1(j1a), 1.0);
        const double r = U.at(j1b, j2b) - U.at(j1a, j2a) - model_increment(j1a, j2a, j1b, j2b) -
                         nu.at(j1a, j2a) * t1;
        return std::fabs(r) / std::pow(d, 2.0 * cfg.alpha);
    };
    if (exhaustive) {
        for (std::size_t ia = 0; ia < npts; ++ia)
            for (std::size_t ib = 0; ib < npts; ++ib) {
                if (ia == ib) continue;
                best = std::max(best, eval_pair(static_cast<int>(ia) % g.n1,
                                                static_cast<int>(ia) / g.n1,
                                                static_cast<int>(ib) % g.n1,
                                                static_cast<int>(ib) / g.n1));
            }
    } else {
        for (int t = 0; t < total; ++t) {
            PairWitness p;
            sampled_pair(cfg.seed, t, g, p);
            if (p.j1a == p.j1b && p.j2a == p.j2b) continue;
            best = std::max(best, eval_pair(p.j1a, p.j2a, p.j1b, p.j2b));
        }
    }
    return best;
}

NormReport commutator_norm(const CommutatorFamily& fam, double alpha, int dF, int dH,
                           const NormConfig& cfg) {
    const std::vector<double>& ladder = cfg.ladder_or_default();
    if (ladder.empty()) throw std::invalid_argument("commutator_norm: ladder empty");
    const int nf = static_cast<int>(fam.F.size());
    const int nh = static_cast<int>(fam.h.size());
    if (nf == 0 || nh == 0 || static_cast<int>(fam.P.size()) != nf * nh)
        throw std::invalid_argument("commutator_norm: family sizes inconsistent");
    if (dF > 0 && (nf < 2 * dF + 1 || fam.spacingF <= 0.0))
        throw std::invalid_argument("commutator_norm: not enough F entries for difference quotients");
    if (dH > 0 && (nh < 2 * dH + 1 || fam.spacingH <= 0.0))
        throw std::invalid_argument("commutator_norm: not enough h entries for difference quotients");

    const GridSpec& g = fam.h.front().grid;
    const std::size_t npts = g.size();

    NormReport rep;
    rep.method = Method::Ladder;
    rep.alpha = alpha;
    rep.ladder = ladder;
    rep.ladder_values.assign(ladder.size(), 0.0);

    std::vector<Field> C(static_cast<std::size_t>(nf) * nh, Field(g));
    for (std::size_t it = 0; it < ladder.size(); ++it) {
        const double T = ladder[it];
        const double weight = std::pow(std::pow(T, 0.25), 2.0 - 2.0 * alpha);
        std::vector<Field> hT(nh, Field(g));
        util::parallel_for(nh, [&](int j) { hT[j] = kernel::convolve(fam.h[j], T); });
        util::parallel_for(nf * nh, [&](int ij) {
            const int i = ij / nh, j = ij % nh;
            C[ij] = grid::pointwise(fam.F[i], hT[j]) - kernel::convolve(fam.P[ij], T);
        });
        double supT = 0.0;
        std::vector<double> scratch(npts);
        for (int m = 0; m <= dF; ++m) {
            for (int n = 0; n <= dH; ++n) {
                // central difference stencils of order m (in i) and n (in j)
                auto stencil = [](int ord, double h) -> std::vector<std::pair<int, double>> {
                    if (ord == 0) return {{0, 1.0}};
                    if (ord == 1) return {{-1, -0.5 / h}, {1, 0.5 / h}};
                    return {{-1, 1.0 / (h * h)}, {0, -2.0 / (h * h)}, {1, 1.0 / (h * h)}};
                };
                const auto sf = stencil(m, fam.spacingF);
                const auto sh = stencil(n, fam.spacingH);
                const int i_lo = (m > 0) ? 1 : 0, i_hi = (m > 0) ? nf - 2 : nf - 1;
                const int j_lo = (n > 0) ? 1 : 0, j_hi = (n > 0) ? nh - 2 : nh - 1;
                for (int i = i_lo; i <= i_hi; ++i) {
                    for (int j = j_lo; j <= j_hi; ++j) {
                        std::fill(scratch.begin(), scratch.end(), 0.0);
                        for (const auto& [di, wi] : sf)
                            for (const auto& [dj, wj] : sh)
                                simd::active().axpby(scratch.data(), wi * wj,
                                                     C[(i + di) * nh + (j + dj)].v.data(), 1.0,
                                                     npts);
                        supT = std::max(supT, simd::active().max_abs(scratch.data(), npts));
                    }
                }
            }
        }
        rep.ladder_values[it] = weight * supT;
        if (rep.ladder_values[it] > rep.value) {
            rep.value = rep.ladder_values[it];
            rep.scale = T;
        }
    }
    return rep;
}

TailDecayReport tail_decay(const Field& f, const std::vector<double>& L_ladder,
                           const std::vector<double>& T_ladder) {
    if (f.grid.domain != grid::Domain::TwoSided)
        throw std::invalid_argument("tail_decay: two-sided field required");
    TailDecayReport rep;
    std::vector<double> lx, ly, tx, ty;  // for the joint log-log fit
    for (double T : T_ladder) {
        const Field fT = kernel::convolve(f, T);
        // rows too close to the periodic wrap at -t_max see the truncation
        // artifact of the doubled torus and are excluded from the tail sup
        const double wrap_margin = std::max(6.0 * std::sqrt(T), 0.1 * f.grid.t_max);
        for (double L : L_ladder) {
            double sup = 0.0;
            for (int j2 = 0; j2 < f.grid.n2; ++j2) {
                const double x2 = f.grid.x2(j2);
                if (x2 > -L || x2 < -f.grid.t_max + wrap_margin) continue;
                for (int j1 = 0; j1 < f.grid.n1; ++j1)
                    sup = std::max(sup, std::fabs(fT.at(j1, j2)));
            }
            rep.rows.push_back({L, T, sup});
        }
    }
    // two-variable least squares: log sup = c + eT log T^{1/4} + eL log L
    double s11 = 0, s12 = 0, s22 = 0, s1 = 0, s2 = 0, sy1 = 0, sy2 = 0, sy = 0, n = 0;
    for (const auto& r : rep.rows) {
        if (r.sup <= 0.0) continue;
        const double x1 = std::log(std::pow(r.T, 0.25));
        const double x2 = std::log(r.L);
        const double y = std::log(r.sup);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        s1 += x1;
        s2 += x2;
        sy1 += x1 * y;
        sy2 += x2 * y;
        sy += y;
        n += 1;
    }
    if (n >= 3) {
        // solve the 3x3 normal equations by elimination
        double A[3][4] = {{s11, s12, s1, sy1}, {s12, s22, s2, sy2}, {s1, s2, n, sy}};
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
            std::swap(A[piv], A[col]);
            if (std::fabs(A[col][col]) < 1e-300) return rep;
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double fac = A[r][col] / A[col][col];
                for (int c = col; c < 4; ++c) A[r][c] -= fac * A[col][c];
            }
        }
        rep.fitted_T_exponent = A[0][3] / A[0][0];
        rep.fitted_L_exponent = A[1][3] / A[1][1];
    }
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        n += 1;
    }
    const double den = n * sxx - sx * sx;
    if (std::fabs(den) < 1e-300) return 0.0;
    return (n * sxy - sx * sy) / den;
}

}  // namespace roughheat::norms
