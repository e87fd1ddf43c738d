#include "roughheat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "roughheat/field_io.hpp"
#include "roughheat/kernel.hpp"
#include "roughheat/noise.hpp"
#include "roughheat/norms.hpp"
#include "roughheat/products.hpp"
#include "roughheat/solver.hpp"
#include "roughheat/util.hpp"

namespace roughheat::experiments {

namespace {

using grid::Field;
using grid::GridSpec;

void RunResultAdd(RunResult& r, const std::string& name, bool ok, const std::string& detail) {
    r.checks.push_back({name, ok, detail});
    r.pass = r.pass && ok;
}

std::string fmt(double x) { return io::format_double(x); }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void write_rows(const std::string& dir, const std::string& name,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows, RunResult& res) {
    if (dir.empty()) return;
    std::ostringstream csv;
    for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
    csv << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) csv << (i ? "," : "") << fmt(r[i]);
        csv << '\n';
    }
    const std::string path = dir + "/" + name + ".csv";
    write_text(path, csv.str());
    res.artifacts.push_back(path);

    std::ostringstream schema;
    schema << "{\"file\":\"" << name << ".csv\",\"columns\":[";
    for (std::size_t i = 0; i < columns.size(); ++i)
        schema << (i ? "," : "") << "\"" << columns[i] << "\"";
    schema << "]}";
    const std::string spath = dir + "/" + name + "_schema.json";
    write_text(spath, schema.str());
    res.artifacts.push_back(spath);
}

void write_manifest(const std::string& dir, const std::string& experiment,
                    const config::Config& cfg, const std::vector<long>& seeds, RunResult& res) {
    if (dir.empty()) return;
    std::ostringstream os;
    os << "{\"experiment\":\"" << experiment << "\",\"seeds\":[";
    for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
    os << "],\"simd\":\"" << "auto" << "\",\"config\":" << cfg.echo_json() << "}";
    const std::string path = dir + "/manifest.json";
    write_text(path, os.str());
    res.artifacts.push_back(path);
}

void write_summary(const std::string& dir, const RunResult& res) {
    if (dir.empty()) return;
    std::ostringstream os;
    for (const auto& c : res.checks)
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    os << (res.pass ? "RESULT: PASS" : "RESULT: FAIL") << '\n';
    write_text(dir + "/summary.txt", os.str());
}

std::vector<long> default_seeds(int n, long base = 1) {
    std::vector<long> s(n);
    for (int i = 0; i < n; ++i) s[i] = base + i;
    return s;
}

/// Periodic Hoelder-alpha profile built from dyadic modes with seeded phases.
std::vector<double> weierstrass_boundary(int n1, double alpha, int levels, long seed,
                                         double amplitude) {
    std::vector<double> g(n1, 0.0);
    for (int j = 0; j < levels; ++j) {
        const double phase = 2.0 * M_PI * noise::uniform01(seed, j, 101, 0);
        const double amp = std::pow(2.0, -alpha * j);
        for (int i = 0; i < n1; ++i)
            g[i] += amp * std::cos(2.0 * M_PI * (1 << j) * i / static_cast<double>(n1) + phase);
    }
    double sup = 0.0;
    for (double v : g) sup = std::max(sup, std::fabs(v));
    if (sup > 0.0)
        for (double& v : g) v *= amplitude / sup;
    return g;
}

/// Full-spectrum C^alpha sample: mode m carries amplitude m^{-(alpha + 1/2)}
/// with a seeded phase, so every octave holds its Hoelder share.
std::vector<double> rough_boundary(int n1, double alpha, int max_mode, long seed,
                                   double amplitude) {
    std::vector<double> g(n1, 0.0);
    for (int m = 1; m <= max_mode; ++m) {
        const double phase = 2.0 * M_PI * noise::uniform01(seed, m, 211, 0);
        const double amp = std::pow(static_cast<double>(m), -(alpha + 0.5));
        for (int i = 0; i < n1; ++i)
            g[i] += amp * std::cos(2.0 * M_PI * m * i / static_cast<double>(n1) + phase);
    }
    double sup = 0.0;
    for (double v : g) sup = std::max(sup, std::fabs(v));
    if (sup > 0.0)
        for (double& v : g) v *= amplitude / sup;
    return g;
}

const std::vector<double>& product_ladder() {
    // six dyadic scales placed just below the first resolved parabolic
    // activation scale of the 2 pi frequency grid, where the mollification
    // limit is meaningfully probed
    static const std::vector<double> l = [] {
        std::vector<double> v;
        for (int j = 23; j <= 28; ++j) v.push_back(std::pow(2.0, -j));
        return v;
    }();
    return l;
}

double geometric_mean_ratio(const std::vector<double>& seq) {
    double prod = 1.0;
    int count = 0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (seq[i - 1] <= 0.0) continue;
        prod *= seq[i] / seq[i - 1];
        ++count;
    }
    return count ? std::pow(prod, 1.0 / count) : 0.0;
}

}  // namespace

void RunResult::add(const std::string& name, bool ok, const std::string& detail) {
    RunResultAdd(*this, name, ok, detail);
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "kernel_scaling",      "norm_equivalence", "heat_decay",
        "renorm_convergence",  "commutator_uniformity", "linear_assemble",
        "quasilinear_contraction", "stability"};
    return names;
}

bool is_experiment(const std::string& name) {
    const auto& n = experiment_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

// ---------------------------------------------------------------------------
// kernel_scaling
// ---------------------------------------------------------------------------

RunResult kernel_scaling(const config::Config& cfg, const std::string& out_dir) {
    RunResult res;
    res.add("psi_hat unit mass", kernel::psi_hat(0.0, 0.0, 0.37) == 1.0, "psi_hat(0) = 1");

    // semigroup identity on a seeded rough field
    {
        GridSpec g;
        g.n1 = g.n2 = cfg.get_int("kernel.semigroup_n", 64);
        noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1.0, g.n1 / 2 - 1);
        const Field f = noise::sample_forcing(spec, g, 11).field;
        double worst = 0.0;
        for (double t : {1.0 / 4096, 1.0 / 256, 1.0 / 16}) {
            for (double T : {1.0 / 1024, 1.0 / 64, 0.5}) {
                const Field lhs = kernel::convolve(kernel::convolve(f, t), T);
                const Field rhs = kernel::convolve(f, t + T);
                worst = std::max(worst, grid::sup_abs_diff(lhs, rhs) / grid::sup_abs(f));
            }
        }
        res.add("semigroup identity", worst <= 1e-10, "max relative defect " + fmt(worst));
    }

    // moment-bound slopes over T in {2^-12 .. 2^0}
    std::vector<std::vector<double>> rows, fit_rows;
    const std::vector<std::pair<int, int>> ij = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    bool slopes_ok = true;
    std::ostringstream slope_detail;
    for (double alpha : {0.0, 0.75}) {
        for (auto [i, j] : ij) {
            std::vector<double> ts, vals;
            for (int p = 12; p >= 0; --p) {
                const double T = std::pow(2.0, -p);
                const kernel::MomentResult m = kernel::moment_integral(alpha, i, j, T);
                ts.push_back(std::pow(T, 0.25));
                vals.push_back(m.value);
                rows.push_back({alpha, static_cast<double>(i), static_cast<double>(j), T, m.value,
                                m.truncation_estimate});
            }
            const double slope = norms::loglog_slope(ts, vals);
            const double target = alpha - i - 2 * j;
            fit_rows.push_back({alpha, static_cast<double>(i), static_cast<double>(j), slope,
                                target});
            if (std::fabs(slope - target) > 0.05) {
                slopes_ok = false;
                slope_detail << " (alpha=" << alpha << ",i=" << i << ",j=" << j
                             << ": slope=" << slope << " target=" << target << ")";
            }
        }
    }
    res.add("moment-bound slopes within +-0.05", slopes_ok,
            slopes_ok ? "all 8 exponent fits in band" : slope_detail.str());

    // recorded but never relied on: the minimum of psi_1
    const kernel::KernelMass km = kernel::psi1_mass();
    res.add("psi_1 L1 mass recorded", km.l1 >= 1.0 - 1e-6,
            "||psi_1||_L1 = " + fmt(km.l1) + ", min psi_1 = " + fmt(km.min_value));

    write_rows(out_dir, "kernel_moments", {"alpha", "i", "j", "T", "moment", "trunc_estimate"},
               rows, res);
    write_rows(out_dir, "kernel_moment_fits", {"alpha", "i", "j", "fitted_slope", "target"},
               fit_rows, res);
    return res;
}

// ---------------------------------------------------------------------------
// norm_equivalence
// ---------------------------------------------------------------------------

RunResult norm_equivalence(const config::Config& cfg, const std::string& out_dir,
                           const std::vector<long>& seeds_in) {
    RunResult res;
    const double alpha = cfg.get_double("norms.alpha", 0.75);
    const int nseeds = cfg.get_int("experiment.seed_count", 20);
    std::vector<long> seeds = seeds_in.empty() ? default_seeds(nseeds) : seeds_in;
    std::vector<std::vector<double>> rows;
    double lo[2] = {1e300, 1e300}, hi[2] = {0.0, 0.0};

    const int sizes[2] = {cfg.get_int("experiment.grid_small", 128),
                          cfg.get_int("experiment.grid_large", 256)};
    const int cutoff = std::min(sizes[0], sizes[1]) / 2 - 1;
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, 1e-2, cutoff);

    for (int which = 0; which < 2; ++which) {
        GridSpec g;
        g.n1 = g.n2 = sizes[which];
        // seeds are independent work items; rows land in per-seed slots
        std::vector<std::vector<double>> slot(seeds.size());
        util::parallel_for(static_cast<int>(seeds.size()), [&](int i) {
            const long seed = seeds[i];
            const Field f = noise::sample_forcing(spec, g, seed).field;
            norms::NormConfig ncfg;
            ncfg.alpha = alpha;
            ncfg.seed = static_cast<std::uint64_t>(seed);
            const double conv = norms::neg_norm_conv(f, 2.0 - alpha, ncfg).value;
            const double trip = norms::neg_norm_triplet(f, alpha, ncfg).value;
            slot[i] = {static_cast<double>(sizes[which]), static_cast<double>(seed), conv, trip,
                       trip / conv};
        });
        for (const auto& r : slot) {
            rows.push_back(r);
            lo[which] = std::min(lo[which], r[4]);
            hi[which] = std::max(hi[which], r[4]);
        }
    }
    const double width_small = hi[0] / lo[0];
    const double width_large = hi[1] / lo[1];
    const bool band_ok = width_small <= 50.0 && width_large <= 50.0;
    res.add("equivalence band width <= 50", band_ok,
            "width " + fmt(width_small) + " at " + std::to_string(sizes[0]) + "^2, " +
                fmt(width_large) + " at " + std::to_string(sizes[1]) + "^2");
    const bool overlap = lo[0] <= hi[1] && lo[1] <= hi[0];
    res.add("bands overlap across grids", overlap,
            "[" + fmt(lo[0]) + "," + fmt(hi[0]) + "] vs [" + fmt(lo[1]) + "," + fmt(hi[1]) + "]");
    write_rows(out_dir, "norm_equivalence", {"grid", "seed", "neg_norm_conv", "neg_norm_triplet",
                                             "ratio"},
               rows, res);
    return res;
}

// ---------------------------------------------------------------------------
// heat_decay
// ---------------------------------------------------------------------------

RunResult heat_decay(const config::Config& cfg, const std::string& out_dir) {
    RunResult res;
    const double alpha = cfg.get_double("norms.alpha", 0.75);
    const int n1 = cfg.get_int("experiment.n1", 1024);
    const double a0 = cfg.get_double("experiment.a0", 0.5);
    const long seed = cfg.get_int("experiment.seed", 5);

    const std::vector<double> gbd = rough_boundary(n1, alpha, n1 / 2 - 1, seed, 1.0);
    const double measured_class = norms::holder_seminorm_boundary(gbd, alpha);
    res.add("boundary data measured C^alpha class", measured_class > 0.0,
            "[g]_alpha = " + fmt(measured_class));

    // geometric x2 ladder across the order-one window 1e-3..1e-1 (grid units)
    const double x2_lo = solver::scale_x2(1e-3);
    const double x2_hi = solver::scale_x2(1e-1);
    const int npts = 16;
    std::vector<std::vector<double>> rows(npts);
    bool ok = true, ok_da0 = true;
    std::ostringstream detail, detail_da0;
    for (int j = 0; j <= 1; ++j) {
        // the criterion window covers j = 0; the parameter-derivative layers
        // reach their asymptotic band one decade lower
        const double lo = j == 0 ? x2_lo : 0.1 * x2_lo;
        const double hi = j == 0 ? x2_hi : 0.1 * x2_hi;
        for (int k = 1; k <= 2; ++k) {
            std::vector<double> xs, ys;
            for (int p = 0; p < npts; ++p) {
                const double x2 = lo * std::pow(hi / lo, p / static_cast<double>(npts - 1));
                const std::vector<double> row =
                    refsol::heat_layer_row(refsol::BoundaryData{gbd}, a0, x2, k, j, true);
                double sup = 0.0;
                for (double v : row) sup = std::max(sup, std::fabs(v));
                xs.push_back(x2);
                ys.push_back(sup);
                if (j == 0 && k == 1) rows[p] = {x2, sup, 0.0, 0.0, 0.0};
                else rows[p][2 * j + k] = sup;
            }
            const double slope = norms::loglog_slope(xs, ys);
            const double target = 0.5 * (alpha - k);
            const bool pass = std::fabs(slope - target) <= 0.1;
            if (j == 0) {
                ok = ok && pass;
                detail << "k=" << k << ": slope " << fmt(slope) << " target " << fmt(target)
                       << "; ";
            } else {
                ok_da0 = ok_da0 && pass;
                detail_da0 << "k=" << k << ": slope " << fmt(slope) << " target " << fmt(target)
                           << "; ";
            }
        }
    }
    res.add("heat-layer decay exponents within +-0.1", ok, detail.str());
    res.add("parameter-derivative layers share the decay exponents", ok_da0, detail_da0.str());
    write_rows(out_dir, "heat_decay", {"x2", "sup_d1V", "sup_d2V", "sup_d1_da0V", "sup_d2_da0V"},
               rows, res);
    return res;
}

// ---------------------------------------------------------------------------
// renorm_convergence
// ---------------------------------------------------------------------------

RunResult renorm_convergence(const config::Config& cfg, const std::string& out_dir,
                             const std::vector<long>& seeds_in) {
    RunResult res;
    const double alpha_prime = cfg.get_double("noise.alpha_prime", 0.875);
    const long seed = seeds_in.empty() ? cfg.get_int("experiment.seed", 7) : seeds_in.front();
    const int n = cfg.get_int("experiment.n", 128);

    GridSpec g;
    g.n1 = g.n2 = n;
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(
        alpha_prime, cfg.get_double("noise.amplitude", 1e-2), n / 2 - 1);
    const noise::ForcingSample f = noise::sample_forcing(spec, g, seed);

    const double a0 = cfg.get_double("experiment.a0", 0.5);
    const double a0p = cfg.get_double("experiment.a0_prime", 0.75);
    const std::vector<double>& ladder = product_ladder();

    norms::NormConfig ncfg;
    ncfg.alpha = alpha_prime;  // measured in the C^{alpha'-2} scale
    std::vector<std::vector<double>> rows;
    std::vector<double> inc_ren, bare_norm, g2_vals;
    {
        Field prev_ren(g);
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            const double eps = ladder[i];
            Field ren = products::renormalized_product(f, eps, a0, a0p);
            Field bare = products::bare_product(f, eps, a0, a0p);
            bare_norm.push_back(norms::neg_norm_conv(bare, 2.0 - alpha_prime, ncfg).value);
            g2_vals.push_back(products::renorm_constant(f.spec, eps, a0, a0p));
            if (i > 0)
                inc_ren.push_back(
                    norms::neg_norm_conv(ren - prev_ren, 2.0 - alpha_prime, ncfg).value);
            rows.push_back({eps, i > 0 ? inc_ren.back() : 0.0, bare_norm.back(), g2_vals.back()});
            prev_ren = std::move(ren);
        }
    }
    const double mean_ratio = geometric_mean_ratio(inc_ren);
    const bool cauchy_ok = mean_ratio < 0.95 && inc_ren.back() < inc_ren.front();
    {
        std::ostringstream d;
        d << "measured ratio " << fmt(mean_ratio) << "; increments";
        for (double v : inc_ren) d << " " << fmt(v);
        res.add("renormalized eps-Cauchy increments decay, measured ratio < 0.95", cauchy_ok,
                d.str());
    }
    // finite-scale surrogates of the divergence of the un-renormalized
    // product: its ladder norm never decreases while the counterterm grows,
    // and the counterterm grows without bound as the spectral cutoff opens
    bool bare_diverges = true;
    for (std::size_t i = 1; i < bare_norm.size(); ++i)
        bare_diverges = bare_diverges && bare_norm[i] >= bare_norm[i - 1] &&
                        std::fabs(g2_vals[i]) > std::fabs(g2_vals[i - 1]);
    {
        std::ostringstream d;
        d << "norms";
        for (double v : bare_norm) d << " " << fmt(v);
        d << "; g2";
        for (double v : g2_vals) d << " " << fmt(v);
        res.add("un-renormalized norm non-decreasing, counterterm growing", bare_diverges,
                d.str());
    }
    {
        bool cutoff_growth = true;
        double prev = 0.0;
        std::ostringstream d;
        for (int cut : {n / 8 - 1, n / 4 - 1, n / 2 - 1}) {
            noise::CovarianceSpec sc = noise::CovarianceSpec::white_in_time(
                alpha_prime, cfg.get_double("noise.amplitude", 1e-2), cut);
            const double g2 = products::renorm_constant(sc, ladder.back(), a0, a0p);
            d << " " << fmt(g2);
            cutoff_growth = cutoff_growth && std::fabs(g2) > std::fabs(prev);
            prev = g2;
        }
        res.add("counterterm grows with the spectral cutoff", cutoff_growth, "g2:" + d.str());
    }

    // Monte-Carlo validation of the g2 formula at a fixed point
    {
        GridSpec gs;
        gs.n1 = gs.n2 = 32;
        noise::CovarianceSpec mc_spec = noise::CovarianceSpec::white_in_time(alpha_prime, 1.0, 15);
        const double eps = solver::scale_T(std::pow(2.0, -6));
        const int nsamp = cfg.get_int("experiment.mc_samples", 10000);
        kernel::MollifierSpec ms;
        ms.epsilon = eps;
        double mean = 0.0, m2 = 0.0;
        for (int s = 0; s < nsamp; ++s) {
            const noise::ForcingSample fs = noise::sample_forcing(mc_spec, gs, 100000 + s);
            // value of v_eps d1^2 v_eps at the origin via the mode sums
            grid::Spectrum sp = grid::spectrum_of(fs.field);
            std::complex<double> va(0.0), d2vb(0.0);
            const double scale = static_cast<double>(gs.size());
            for (int m2i = 0; m2i < gs.n2; ++m2i) {
                const double k2 = grid::k2_of(gs, m2i);
                for (int m1 = 0; m1 < gs.n1; ++m1) {
                    const double k1 = grid::k1_of(gs, m1);
                    const std::complex<double> c =
                        sp.c[static_cast<std::size_t>(m2i) * gs.n1 + m1] / scale *
                        kernel::mollifier_hat(k1, k2, ms);
                    va += c / std::complex<double>(a0 * k1 * k1 + 1.0, k2);
                    d2vb += c * (-k1 * k1) / std::complex<double>(a0p * k1 * k1 + 1.0, k2);
                }
            }
            const double x = va.real() * d2vb.real();
            const double delta = x - mean;
            mean += delta / (s + 1);
            m2 += delta * (x - mean);
        }
        const double stderr_ = std::sqrt(m2 / (nsamp - 1.0) / nsamp);
        const double g2 = products::renorm_constant(mc_spec, eps, a0, a0p);
        const bool mc_ok = std::fabs(mean - g2) <= 3.0 * stderr_;
        res.add("g2 formula vs Monte-Carlo within 3 se", mc_ok,
                "g2 = " + fmt(g2) + ", mc = " + fmt(mean) + " +- " + fmt(stderr_));
        std::vector<std::vector<double>> grow = {{eps, g2, mean, stderr_}};
        write_rows(out_dir, "renorm_g2_mc", {"eps", "g2_formula", "mc_mean", "mc_stderr"}, grow,
                   res);
    }

    write_rows(out_dir, "renorm_increments",
               {"eps", "increment_renormalized", "bare_norm", "g2"}, rows, res);
    return res;
}

// ---------------------------------------------------------------------------
// commutator_uniformity
// ---------------------------------------------------------------------------

RunResult commutator_uniformity(const config::Config& cfg, const std::string& out_dir,
                                const std::vector<long>& seeds_in) {
    RunResult res;
    const double alpha = cfg.get_double("norms.alpha", 0.75);
    const long seed = seeds_in.empty() ? cfg.get_int("experiment.seed", 3) : seeds_in.front();
    const int n = cfg.get_int("experiment.n", 128);
    const int np = cfg.get_int("experiment.param_count", 9);

    GridSpec g;
    g.n1 = g.n2 = n;
    noise::CovarianceSpec spec =
        noise::CovarianceSpec::white_in_time(0.875, cfg.get_double("noise.amplitude", 1e-2),
                                             n / 2 - 1);
    const noise::ForcingSample f = noise::sample_forcing(spec, g, seed);
    const refsol::ParamGrid pg = refsol::ParamGrid::uniform(0.25, np);

    norms::NormConfig ncfg;
    ncfg.alpha = alpha;

    std::vector<std::vector<double>> rows;
    std::vector<double> values;
    for (double eps : product_ladder()) {
        const norms::CommutatorFamily fam = products::renormalized_family(f, eps, pg, nullptr);
        const norms::NormReport rep = norms::commutator_norm(fam, alpha, 2, 2, ncfg);
        values.push_back(rep.value);
        rows.push_back({eps, rep.value, rep.scale});
    }
    const double vmax = *std::max_element(values.begin(), values.end());
    const double vmin = *std::min_element(values.begin(), values.end());
    res.add("renormalized commutator varies < factor 2 across eps", vmax / vmin < 2.0,
            "max/min = " + fmt(vmax / vmin));
    write_rows(out_dir, "commutator_uniformity", {"eps", "commutator_norm", "argmax_T"}, rows,
               res);

    // classical-product commutators, refinement stability between n/2 and n
    auto classical_value = [&](int size) {
        GridSpec gt;
        gt.n1 = gt.n2 = size;
        noise::CovarianceSpec sp2 = noise::CovarianceSpec::white_in_time(
            0.875, cfg.get_double("noise.amplitude", 1e-2), size / 2 - 1);
        const noise::ForcingSample fs = noise::sample_forcing(sp2, gt, seed);
        GridSpec hp = gt;
        hp.domain = grid::Domain::HalfPlane;
        hp.n2 = gt.n2 / 2 + 1;
        hp.t_max = 1.0;
        GridSpec cells = hp;
        cells.cell_centered = true;
        cells.n2 = hp.n2 - 1;
        // V~ layer from rough periodic data, on the doubled cell grid
        const std::vector<double> uint_b = weierstrass_boundary(size, alpha, 6, seed + 1, 1e-2);
        GridSpec dgc = cells;
        dgc.domain = grid::Domain::TwoSided;
        dgc.n2 = 2 * cells.n2;
        // rough test factor F of class C^alpha
        Field F(dgc);
        {
            const std::vector<double> w1 = weierstrass_boundary(size, alpha, 6, seed + 2, 1.0);
            const std::vector<double> w2 = weierstrass_boundary(2 * cells.n2, alpha, 6, seed + 3,
                                                                1.0);
            for (int j2 = 0; j2 < dgc.n2; ++j2)
                for (int j1 = 0; j1 < dgc.n1; ++j1) F.at(j1, j2) = w1[j1] + 0.5 * w2[j2];
        }
        norms::CommutatorFamily fam;
        fam.spacingH = pg.spacing();
        fam.F.push_back(F);
        fam.h.assign(pg.values.size(), Field(dgc));
        fam.P.assign(pg.values.size(), Field(dgc));
        for (std::size_t i = 0; i < pg.values.size(); ++i) {
            const Field d2V = grid::even_reflection(refsol::heat_layer_derivative(
                refsol::BoundaryData{uint_b}, pg.values[i], 2, 0, cells, true));
            fam.h[i] = d2V;
            fam.P[i] = products::classical_singular_product(F, d2V, alpha);
        }
        (void)fs;
        norms::NormConfig nc2;
        nc2.alpha = alpha;
        return norms::commutator_norm(fam, alpha, 0, 2, nc2).value;
    };
    const double c_coarse = classical_value(n / 2);
    const double c_fine = classical_value(n);
    const double ratio = c_fine / c_coarse;
    res.add("classical commutator constant refinement-stable", ratio > 1.0 / 3.0 && ratio < 3.0,
            "coarse " + fmt(c_coarse) + ", fine " + fmt(c_fine));
    std::vector<std::vector<double>> crows = {{static_cast<double>(n / 2), c_coarse},
                                              {static_cast<double>(n), c_fine}};
    write_rows(out_dir, "commutator_classical", {"grid", "commutator_norm"}, crows, res);
    return res;
}

// ---------------------------------------------------------------------------
// linear_assemble (criterion 6) and boundary_correction (criterion 9)
// ---------------------------------------------------------------------------

namespace {

struct LinearSetup {
    GridSpec g;
    noise::CovarianceSpec spec;
    std::vector<double> U_int;
    solver::LinearSolveConfig lin;
};

LinearSetup make_linear_setup(const config::Config& cfg, int n, long seed) {
    LinearSetup s;
    s.g.n1 = s.g.n2 = n;
    s.spec = noise::CovarianceSpec::white_in_time(0.875, cfg.get_double("noise.amplitude", 1e-2),
                                                  n / 2 - 1);
    s.U_int = weierstrass_boundary(n, 0.75, 6, seed + 1000, 1e-2);
    s.lin.lambda = 0.25;
    s.lin.norms.alpha = cfg.get_double("norms.alpha", 0.75);
    s.lin.norms.seed = static_cast<std::uint64_t>(seed);
    return s;
}

Field rough_coefficient(const GridSpec& g, double target_seminorm, double center, long seed,
                        const norms::NormConfig& ncfg) {
    Field a(g);
    const double p2 = g.x2_period();
    for (int j2 = 0; j2 < g.n2; ++j2) {
        for (int j1 = 0; j1 < g.n1; ++j1) {
            const double x1 = g.x1(j1);
            const double x2 = g.x2(j2);
            double v = std::cos(2.0 * M_PI * x1 + 0.7) * std::cos(2.0 * M_PI * x2 / p2) +
                       0.5 * std::cos(4.0 * M_PI * x1 + noise::uniform01(seed, 1, 2, 0)) +
                       0.3 * std::sin(2.0 * M_PI * (x1 + 2.0 * x2 / p2));
            a.at(j1, j2) = v;
        }
    }
    const double semi = norms::holder_seminorm(a, ncfg.alpha, ncfg).value;
    const double scale = target_seminorm / semi;
    for (double& v : a.v) v = center + scale * v;
    return a;
}

}  // namespace

RunResult linear_assemble(const config::Config& cfg, const std::string& out_dir,
                          const std::vector<long>& seeds_in) {
    RunResult res;
    const int n = cfg.get_int("experiment.n", 128);
    const int nseeds = cfg.get_int("experiment.seed_count", 10);
    std::vector<long> seeds = seeds_in.empty() ? default_seeds(nseeds, 21) : seeds_in;

    // frozen-coefficient oracle at a parameter-grid node
    {
        LinearSetup s = make_linear_setup(cfg, n, seeds.front());
        const Field f = noise::sample_forcing(s.spec, s.g, seeds.front()).field;
        const refsol::ParamGrid pg = s.lin.param_grid();
        const double a0 = pg.values[pg.values.size() / 2];
        Field a(s.g);
        std::fill(a.v.begin(), a.v.end(), a0);
        refsol::ParamFamily d2v;
        d2v.pg = pg;
        for (double av : pg.values)
            d2v.entries.push_back(
                grid::spectral_derivative(refsol::solve_periodic_v(f, av, true), 1, 2));
        const solver::OfflineProducts prods = solver::classical_products(a, d2v);
        const solver::SolutionBundle b = solver::assemble_linear(f, s.U_int, a, prods, s.lin);

        const Field v = refsol::solve_periodic_v(f, a0, true);
        GridSpec hp = b.q.grid;
        std::vector<double> data(s.U_int.size());
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = s.U_int[i] - v.at(static_cast<int>(i), 0);
        const Field Vp = refsol::heat_layer_V(refsol::BoundaryData{data}, a0, hp, true);
        Field reference(hp);
        for (int j2 = 0; j2 < hp.n2; ++j2)
            for (int j1 = 0; j1 < hp.n1; ++j1)
                reference.at(j1, j2) = v.at(j1, j2 % s.g.n2) + Vp.at(j1, j2);
        const double err = grid::sup_abs_diff(b.U, reference);
        const double wmax = grid::sup_abs(b.w);
        res.add("frozen oracle U = v + V' to 1e-8", err <= 1e-8, "sup error " + fmt(err));
        res.add("frozen oracle w == 0", wmax <= 1e-12, "sup |w| = " + fmt(wmax));
    }

    // rough coefficient ensemble
    std::vector<std::vector<double>> rows;
    std::vector<double> ratios;
    bool picard_ok = true, residual_ok = true;
    for (long seed : seeds) {
        LinearSetup s = make_linear_setup(cfg, n, seed);
        const Field f = noise::sample_forcing(s.spec, s.g, seed).field;
        const Field a = rough_coefficient(s.g, 0.05, 0.625, seed, s.lin.norms);
        const refsol::ParamGrid pg = s.lin.param_grid();
        refsol::ParamFamily d2v;
        d2v.pg = pg;
        for (double av : pg.values)
            d2v.entries.push_back(
                grid::spectral_derivative(refsol::solve_periodic_v(f, av, true), 1, 2));
        const solver::OfflineProducts prods = solver::classical_products(a, d2v);
        const solver::SolutionBundle b = solver::assemble_linear(f, s.U_int, a, prods, s.lin);

        picard_ok = picard_ok && b.picard_ratio < 0.5;
        for (double r : b.residual_ladder) residual_ok = residual_ok && std::isfinite(r);
        const double ratio = (b.M_u + b.M_q + b.w_2alpha) / (b.N0 + b.N0_int);
        ratios.push_back(ratio);
        rows.push_back({static_cast<double>(seed), b.M_u, b.M_q, b.w_2alpha, b.N0, b.N0_int,
                        ratio, b.picard_ratio, b.safonov});
    }
    res.add("Picard contraction ratio < 0.5", picard_ok, "all seeds");
    res.add("ladder residual finite", residual_ok, "all ladder scales");
    const double rmax = *std::max_element(ratios.begin(), ratios.end());
    const double rmin = *std::min_element(ratios.begin(), ratios.end());
    res.add("(M_u + M_q + [w]_2a)/(N0 + N0_int) stable within factor 3", rmax / rmin <= 3.0,
            "max/min = " + fmt(rmax / rmin));
    write_rows(out_dir, "linear_assemble",
               {"seed", "M_u", "M_q", "w_2alpha", "N0", "N0_int", "ratio", "picard_ratio",
                "safonov"},
               rows, res);
    return res;
}

RunResult boundary_correction(const config::Config& cfg, const std::string& out_dir) {
    RunResult res;
    const double alpha = cfg.get_double("norms.alpha", 0.75);
    const int n1 = cfg.get_int("experiment.n1", 512);
    const int n2_nodes = cfg.get_int("experiment.n2_nodes", 1025);
    const double t_max = cfg.get_double("experiment.t_max", 1.0 / 32.0);
    const long seed = cfg.get_int("experiment.seed", 9);

    GridSpec hp;
    hp.n1 = n1;
    hp.n2 = n2_nodes;
    hp.domain = grid::Domain::HalfPlane;
    hp.t_max = t_max;

    solver::LinearSolveConfig lin;
    lin.lambda = 0.25;
    lin.norms.alpha = alpha;

    const std::vector<double> U_int = rough_boundary(n1, alpha, n1 / 2 - 1, seed, 1e-2);
    const std::vector<double> u0(n1, 0.0);

    // exact vanishing for constant coefficients
    {
        const std::vector<double> a_const(n1, 0.625);
        Field a_hp(hp);
        std::fill(a_hp.v.begin(), a_hp.v.end(), 0.625);
        const Field g = solver::w_forcing_g(U_int, u0, a_const, a_hp, lin);
        // compare against the size of d1^2 V' near the boundary
        GridSpec cells = hp;
        cells.cell_centered = true;
        cells.n2 = hp.n2 - 1;
        const Field d2V =
            refsol::heat_layer_derivative(refsol::BoundaryData{U_int}, 0.625, 2, 0, cells, true);
        const double scale = grid::sup_abs(d2V);
        res.add("g == 0 for constant a", grid::sup_abs(g) <= 1e-12 * scale,
                "sup |g| = " + fmt(grid::sup_abs(g)) + " (scale " + fmt(scale) + ")");
    }

    // rough time-constant coefficient: fitted singular exponent of g
    const std::vector<double> a_b = rough_boundary(n1, alpha, n1 / 2 - 1, seed + 1, 1.0);
    std::vector<double> a_boundary(n1);
    {
        double sup = 0.0;
        for (double v : a_b) sup = std::max(sup, std::fabs(v));
        for (int i = 0; i < n1; ++i) a_boundary[i] = 0.625 + 0.05 * a_b[i] / sup;
    }
    Field a_hp(hp);
    for (int j2 = 0; j2 < hp.n2; ++j2)
        for (int j1 = 0; j1 < n1; ++j1) a_hp.at(j1, j2) = a_boundary[j1];

    const Field gE = solver::w_forcing_g(U_int, u0, a_boundary, a_hp, lin);
    std::vector<std::vector<double>> rows;
    {
        // the row magnitude is fitted in the quadratic mean: the row sup of a
        // single rough sample carries an extreme-value drift of order 0.1 in
        // the exponent at desk-scale resolutions (the sup profile is still
        // reported alongside)
        std::vector<double> xs, ys;
        const double lo = solver::scale_x2(cfg.get_double("experiment.fit_lo", 1e-3));
        const double hi = solver::scale_x2(cfg.get_double("experiment.fit_hi", 1e-1));
        for (int j2 = 0; j2 < gE.grid.n2; ++j2) {
            const double x2 = gE.grid.x2(j2);
            if (x2 < lo || x2 > hi) continue;
            double sup = 0.0, rms = 0.0;
            for (int j1 = 0; j1 < n1; ++j1) {
                const double v = gE.at(j1, j2);
                sup = std::max(sup, std::fabs(v));
                rms += v * v;
            }
            rms = std::sqrt(rms / n1);
            xs.push_back(x2);
            ys.push_back(rms);
            rows.push_back({x2, rms, sup});
        }
        const double slope = norms::loglog_slope(xs, ys);
        const double target = 0.5 * (2.0 * alpha - 2.0);
        res.add("g singular exponent within +-0.1", std::fabs(slope - target) <= 0.1,
                "slope " + fmt(slope) + " target " + fmt(target));
    }
    write_rows(out_dir, "boundary_g_decay", {"x2", "rms_g", "sup_g"}, rows, res);

    // correction w: exact zero initial row, near-boundary growth exponent
    const Field w = solver::solve_correction_w(gE, a_hp, lin);
    double w0 = 0.0;
    for (int j1 = 0; j1 < n1; ++j1) w0 = std::max(w0, std::fabs(w.at(j1, 0)));
    res.add("w(., 0) == 0 exactly", w0 == 0.0, "sup |w(.,0)| = " + fmt(w0));

    std::vector<std::vector<double>> wrows;
    {
        std::vector<double> xs, ys;
        const double lo = 8.0 * hp.dx2();
        const double hi = solver::scale_x2(1e-1);
        for (int j2 = 1; j2 < hp.n2; ++j2) {
            const double x2 = hp.x2(j2);
            if (x2 < lo || x2 > hi) continue;
            double sup = 0.0;
            for (int j1 = 0; j1 < n1; ++j1) sup = std::max(sup, std::fabs(w.at(j1, j2)));
            if (sup <= 0.0) continue;
            xs.push_back(x2);
            ys.push_back(sup);
            wrows.push_back({x2, sup});
        }
        const double slope = norms::loglog_slope(xs, ys);
        res.add("w near-boundary exponent >= alpha - 0.1", slope >= alpha - 0.1,
                "slope " + fmt(slope) + " vs " + fmt(alpha - 0.1));
    }
    write_rows(out_dir, "boundary_w_growth", {"x2", "sup_w"}, wrows, res);
    return res;
}

// ---------------------------------------------------------------------------
// quasilinear_contraction (criterion 7) and stability (criterion 8)
// ---------------------------------------------------------------------------

namespace {

solver::NonlinearityMaps tanh_nonlinearity() {
    solver::NonlinearityMaps m;
    m.a = [](double u) { return 0.625 + 0.25 * std::tanh(u); };
    m.da = [](double u) {
        const double c = std::cosh(u);
        return 0.25 / (c * c);
    };
    m.d2a = [](double u) {
        const double t = std::tanh(u);
        const double c = std::cosh(u);
        return -0.5 * t / (c * c);
    };
    m.d3a = [](double u) {
        const double t = std::tanh(u);
        const double c = std::cosh(u);
        return -0.5 * (1.0 - 3.0 * t * t) / (c * c);
    };
    return m;
}

struct QuasiRun {
    solver::QuasilinearResult result;
    double mean_ratio = 0.0;
};

QuasiRun run_quasilinear(const config::Config& cfg, long seed, double amplitude,
                         solver::LinearSolveConfig::FrozenA0 split, double tol) {
    const int n = cfg.get_int("experiment.n", 64);
    GridSpec g;
    g.n1 = g.n2 = n;
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, amplitude, n / 2 - 1);
    const Field f = noise::sample_forcing(spec, g, seed).field;
    const std::vector<double> U_int = weierstrass_boundary(n, 0.75, 5, seed + 1, amplitude);

    solver::QuasilinearConfig qc;
    qc.lin.lambda = 0.25;
    qc.lin.norms.alpha = cfg.get_double("norms.alpha", 0.75);
    qc.lin.norms.seed = static_cast<std::uint64_t>(seed);
    qc.lin.frozen_a0 = split;
    qc.lin.picard_tol = tol;
    qc.d_tol = tol;
    qc.max_outer = cfg.get_int("experiment.max_outer", 24);

    QuasiRun qr;
    qr.result = solver::quasilinear_fixed_point(f, U_int, tanh_nonlinearity(), qc);
    const auto& d = qr.result.d_history;
    std::vector<double> ratios;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d[i - 1] > 0.0) ratios.push_back(d[i] / d[i - 1]);
    if (!ratios.empty())
        qr.mean_ratio = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
    return qr;
}

}  // namespace

RunResult quasilinear_contraction(const config::Config& cfg, const std::string& out_dir,
                                  const std::vector<long>& seeds_in) {
    RunResult res;
    const long seed = seeds_in.empty() ? cfg.get_int("experiment.seed", 13) : seeds_in.front();
    const double amplitude = cfg.get_double("noise.amplitude", 1e-2);
    const double tol = cfg.get_double("solver.picard_tol", 1e-9);

    QuasiRun full = run_quasilinear(cfg, seed, amplitude,
                                    solver::LinearSolveConfig::FrozenA0::Mean, tol);
    res.add("outer iteration converged", full.result.converged,
            std::to_string(full.result.iterations) + " iterations");
    bool geometric = !full.result.d_history.empty();
    for (std::size_t i = 1; i < full.result.d_history.size(); ++i)
        geometric = geometric && full.result.d_history[i] < 0.5 * full.result.d_history[i - 1];
    {
        std::ostringstream d;
        d << "d:";
        for (double v : full.result.d_history) d << " " << fmt(v);
        res.add("d-metric decays geometrically (ratio < 0.5)", geometric, d.str());
    }

    QuasiRun half = run_quasilinear(cfg, seed, 0.5 * amplitude,
                                    solver::LinearSolveConfig::FrozenA0::Mean, tol);
    res.add("halving amplitude reduces the contraction ratio",
            half.mean_ratio < full.mean_ratio,
            "ratio " + fmt(full.mean_ratio) + " -> " + fmt(half.mean_ratio));

    QuasiRun mid = run_quasilinear(cfg, seed, amplitude,
                                   solver::LinearSolveConfig::FrozenA0::Midpoint, tol);
    const double split_diff = grid::sup_abs_diff(full.result.bundle.U, mid.result.bundle.U);
    res.add("fixed point independent of the Picard splitting", split_diff <= 10.0 * tol,
            "sup difference " + fmt(split_diff));

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < full.result.history.size(); ++i) {
        const auto& h = full.result.history[i];
        rows.push_back({static_cast<double>(i + 1), h.d, h.residual, h.M_u, h.M_q, h.w_2alpha});
    }
    write_rows(out_dir, "quasilinear_contraction",
               {"iter", "d_metric", "residual", "M_u", "M_q", "w_2alpha"}, rows, res);
    return res;
}

RunResult stability(const config::Config& cfg, const std::string& out_dir,
                    const std::vector<long>& seeds_in) {
    RunResult res;
    const long seed = seeds_in.empty() ? cfg.get_int("experiment.seed", 17) : seeds_in.front();
    const double amplitude = cfg.get_double("noise.amplitude", 1e-2);
    const double tol = cfg.get_double("solver.picard_tol", 1e-9);
    const int n = cfg.get_int("experiment.n", 64);

    GridSpec g;
    g.n1 = g.n2 = n;
    noise::CovarianceSpec spec = noise::CovarianceSpec::white_in_time(0.875, amplitude, n / 2 - 1);
    const Field f0 = noise::sample_forcing(spec, g, seed).field;
    const Field df = noise::sample_forcing(spec, g, seed + 555).field;
    const std::vector<double> U0 = weierstrass_boundary(n, 0.75, 5, seed + 1, amplitude);
    const std::vector<double> dU = weierstrass_boundary(n, 0.75, 5, seed + 2, amplitude);

    solver::QuasilinearConfig qc;
    qc.lin.lambda = 0.25;
    qc.lin.norms.alpha = cfg.get_double("norms.alpha", 0.75);
    qc.lin.norms.seed = static_cast<std::uint64_t>(seed);
    qc.lin.picard_tol = tol;
    qc.d_tol = tol;
    qc.max_outer = cfg.get_int("experiment.max_outer", 24);
    const solver::NonlinearityMaps maps = tanh_nonlinearity();

    const solver::QuasilinearResult base = solver::quasilinear_fixed_point(f0, U0, maps, qc);

    std::vector<double> ps = {1.0, 0.5, 0.25};
    std::vector<double> totals;
    std::vector<std::vector<double>> rows;
    for (double p : ps) {
        Field f1 = f0 + (p * df);
        std::vector<double> U1(U0.size());
        for (std::size_t i = 0; i < U0.size(); ++i) U1[i] = U0[i] + p * dU[i];
        const solver::QuasilinearResult pert = solver::quasilinear_fixed_point(f1, U1, maps, qc);
        const solver::StabilityReport sr = solver::stability_experiment(
            base.bundle, pert.bundle, p, p, qc.lin);
        totals.push_back(sr.total);
        rows.push_back({p, sr.du_alpha, sr.dq_alpha, sr.dw_alpha, sr.total});
    }
    const double slope = norms::loglog_slope(ps, totals);
    res.add("difference norms scale linearly (slope 1 +- 0.25 in log-log)",
            std::fabs(slope - 1.0) <= 0.25, "slope " + fmt(slope));
    write_rows(out_dir, "stability", {"perturbation", "du_alpha", "dq_alpha", "dw_alpha",
                                      "total"},
               rows, res);
    return res;
}

// ---------------------------------------------------------------------------

RunResult run_experiment(const std::string& name, const config::Config& cfg,
                         const std::string& out_dir, const std::vector<long>& seeds) {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    RunResult res;
    if (name == "kernel_scaling") res = kernel_scaling(cfg, out_dir);
    else if (name == "norm_equivalence") res = norm_equivalence(cfg, out_dir, seeds);
    else if (name == "heat_decay") res = heat_decay(cfg, out_dir);
    else if (name == "renorm_convergence") res = renorm_convergence(cfg, out_dir, seeds);
    else if (name == "commutator_uniformity") res = commutator_uniformity(cfg, out_dir, seeds);
    else if (name == "linear_assemble") {
        res = linear_assemble(cfg, out_dir, seeds);
        RunResult bc = boundary_correction(cfg, out_dir);
        for (const auto& c : bc.checks) res.add(c.name, c.pass, c.detail);
        for (const auto& a : bc.artifacts) res.artifacts.push_back(a);
    } else if (name == "quasilinear_contraction") res = quasilinear_contraction(cfg, out_dir, seeds);
    else if (name == "stability") res = stability(cfg, out_dir, seeds);
    else throw std::invalid_argument("unknown experiment: " + name);
    write_manifest(out_dir, name, cfg, seeds, res);
    write_summary(out_dir, res);
    return res;
}

}  // namespace roughheat::experiments
