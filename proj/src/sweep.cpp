#include "heatcalc/sweep.hpp"

#include "heatcalc/kernels.hpp"
#include "heatcalc/norms.hpp"
#include "heatcalc/operators.hpp"
#include "heatcalc/pde.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <cstring>
#include <sstream>
#include <thread>

namespace heatcalc {

namespace {

double param(const std::map<std::string, double>& m, const std::string& k, double dflt) {
    auto it = m.find(k);
    return it == m.end() ? dflt : it->second;
}

double require(const std::map<std::string, double>& m, const std::string& k) {
    auto it = m.find(k);
    if (it == m.end()) throw ConfigError("missing parameter '" + k + "'");
    return it->second;
}

double tol_of(const std::map<std::string, double>& tols, const std::string& k, double dflt) {
    auto it = tols.find(k);
    return it == tols.end() ? dflt : it->second;
}

// built-in mirror of data/corpus.txt
const std::vector<CorpusFunction>& builtin_corpus() {
    static const char* text =
        "pe1 powexp 1.0\npe15 powexp 1.5\npe2 powexp 2.0\npe3 powexp 3.0\n"
        "pe125 powexp 1.25\ng1 gauss 1.0 0.5\ng2 gauss 2.0 0.8\ng3 gauss 4.0 1.5\n"
        "g4 gauss 6.0 2.5\ng5 gauss 3.0 0.35\nxg1 xgauss 0.0 1.0\nxg2 xgauss 1.0 0.7\n"
        "xg3 xgauss 2.5 1.2\nb1 bump 2.0 1.0\nb2 bump 3.0 2.0\nb3 bump 1.2 0.8\n"
        "b4 bump 6.0 3.0\nse1 sinexp 1.0\nse2 sinexp 2.5\nrm1 ramp 1.5\n";
    static const auto corpus = [] {
        const auto tmp = std::filesystem::temp_directory_path() / "heatcalc_builtin_corpus.txt";
        std::ofstream(tmp) << text;
        return load_corpus(tmp.string());
    }();
    return corpus;
}

RefinementPlan plan_of(const GridParams& grid) {
    RefinementPlan plan;
    const std::size_t n = std::max<std::size_t>(64, grid.n);
    plan.levels = {n / 4, n / 2, n};
    plan.x_max = grid.x_max;
    plan.grading = grid.grading;
    return plan;
}

using Runner = std::function<void(SweepRow&, const GridParams&,
                                  const std::map<std::string, double>&)>;

void run_hardy(SweepRow& row, const GridParams& grid,
               const std::map<std::string, double>& tols) {
    const LebesgueExponent p(require(row.params, "p"));
    const double gamma = require(row.params, "gamma");
    const double slack = tol_of(tols, "hardy_slack", 0.02);
    const auto plan = plan_of(grid);
    row.bound = p.p / std::abs(gamma - p.p + 1.0);
    Trend worst = Trend::stable;
    for (const auto& cf : builtin_corpus()) {
        if (gamma < p.p - 1.0 && !cf.vanishes_at_zero) continue;
        auto rep = hardy_ratio(cf.eval, p, gamma, plan);
        row.value = std::max(row.value, rep.ratio);
        if (rep.refinement_trend == Trend::growing) worst = Trend::growing;
    }
    row.trend = to_string(worst);
    row.pass = worst == Trend::stable && row.value <= row.bound * (1.0 + slack)
                   ? RowStatus::pass
                   : RowStatus::fail;
}

void run_trace(SweepRow& row, const GridParams& grid,
               const std::map<std::string, double>& tols) {
    (void)tols;
    const LebesgueExponent p(require(row.params, "p"));
    const double gamma = require(row.params, "gamma");
    const int order = int(param(row.params, "order", 1.0));
    const auto plan = plan_of(grid);
    Trend worst = Trend::stable;
    for (const auto& cf : builtin_corpus()) {
        if (order == 1 && !cf.vanishes_at_zero && gamma < p.p - 1.0) continue;
        auto rep = trace_embedding_ratio(cf.eval, p, gamma, order, plan);
        row.value = std::max(row.value, rep.ratio);
        if (rep.refinement_trend == Trend::growing) worst = Trend::growing;
    }
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(worst);
    row.pass = worst == Trend::stable && std::isfinite(row.value) ? RowStatus::pass
                                                                  : RowStatus::fail;
}

void run_interp(SweepRow& row, const GridParams& grid,
                const std::map<std::string, double>& tols) {
    (void)tols;
    const LebesgueExponent p(require(row.params, "p"));
    const double gamma = require(row.params, "gamma");
    const int j = int(param(row.params, "j", 1.0));
    const int k = int(param(row.params, "k", 2.0));
    const auto plan = plan_of(grid);
    Trend worst = Trend::stable;
    for (const auto& cf : builtin_corpus()) {
        auto rep = interpolation_ratio(cf.eval, p, gamma, j, k, plan);
        row.value = std::max(row.value, rep.ratio);
        if (rep.refinement_trend == Trend::growing) worst = Trend::growing;
    }
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(worst);
    row.pass = worst == Trend::stable ? RowStatus::pass : RowStatus::fail;
}

void run_mult_map(SweepRow& row, const GridParams& grid,
                  const std::map<std::string, double>& tols) {
    (void)tols;
    const LebesgueExponent p(require(row.params, "p"));
    const double gamma = require(row.params, "gamma");
    const int k = int(param(row.params, "k", 0.0));
    const auto plan = plan_of(grid);
    Trend worst = Trend::stable;
    for (const auto& cf : builtin_corpus()) {
        auto res = multiplication_map_ratio(cf.eval, p, gamma, k, plan);
        row.value = std::max(row.value, res.forward.ratio);
        if (res.forward.refinement_trend == Trend::growing) worst = Trend::growing;
    }
    row.trend = to_string(worst);
    if (k == 0) {
        row.bound = 1.0;
        row.pass = std::abs(row.value - 1.0) < 1e-9 ? RowStatus::pass : RowStatus::fail;
    } else {
        row.bound = std::numeric_limits<double>::infinity();
        row.pass = worst == Trend::stable ? RowStatus::pass : RowStatus::fail;
    }
}

void run_schur(SweepRow& row, const GridParams& grid,
               const std::map<std::string, double>& tols, bool want_a) {
    (void)grid;
    (void)tols;
    const double p = require(row.params, "p");
    const double gamma = require(row.params, "gamma");
    auto sc = schur_constants(p, gamma);
    const SchurValue& v = want_a ? sc.A : sc.B;
    row.value = v.value;
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = v.divergent ? "growing" : "stable";
    row.pass = v.divergent ? RowStatus::fail : RowStatus::pass;
}

void run_sharpness(SweepRow& row, const GridParams& grid,
                   const std::map<std::string, double>& tols) {
    (void)grid;
    const LebesgueExponent p(require(row.params, "p"));
    auto probe = sharpness_probe(p, require(row.params, "gamma"),
                                 require(row.params, "beta"), param(row.params, "t", 0.25));
    row.value = probe.fit_residual;
    row.bound = tol_of(tols, "sharpness_residual", 0.05);
    row.trend = probe.data_norm_divergent ? "growing" : "stable";
    row.pass = probe.pass ? RowStatus::pass : RowStatus::fail;
}

void run_ap_constant(SweepRow& row, const GridParams& grid,
                     const std::map<std::string, double>& tols) {
    (void)grid;
    (void)tols;
    const LebesgueExponent p(require(row.params, "p"));
    auto est = ap_constant_estimate(require(row.params, "gamma"), p,
                                    int(param(row.params, "levels", 6.0)));
    row.value = est.value;
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = est.divergent ? "growing" : "stable";
    row.pass = est.divergent ? RowStatus::fail : RowStatus::pass;
}

GridFunction default_field(const GridParams& grid) {
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    return GridFunction::sample(g, [](double x) { return x * std::exp(-x); });
}

void run_semigroup_law(SweepRow& row, const GridParams& grid,
                       const std::map<std::string, double>& tols) {
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const PowerWeight w(param(row.params, "gamma", 0.0));
    const double s = param(row.params, "s", 0.1), t = param(row.params, "t", 0.2);
    auto f = default_field(grid);
    auto two = apply_semigroup(apply_semigroup(f, t), s);
    auto one = apply_semigroup(f, s + t);
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = two[i] - one[i];
    row.value = lp_norm(GridFunction(f.grid(), std::move(d)), p.p, w) / lp_norm(f, p.p, w);
    row.bound = tol_of(tols, "semigroup_law", 1e-3);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_evolution(SweepRow& row, const GridParams& grid,
                   const std::map<std::string, double>& tols) {
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto f = GridFunction::sample(g, [](double x) { return x * std::exp(-x * x); });
    const double t = param(row.params, "t", 0.25);
    auto u = apply_semigroup(f, t);
    const double s = 1.0 + 4.0 * t;
    auto exact = GridFunction::sample(
        g, [s](double x) { return std::pow(s, -1.5) * x * std::exp(-x * x / s); });
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = u[i] - exact[i];
    const PowerWeight w(0.0);
    row.value = lp_norm(GridFunction(g, std::move(d)), 2.0, w) / lp_norm(exact, 2.0, w);
    row.bound = tol_of(tols, "evolution", 5e-3);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_kernel_value(SweepRow& row, const GridParams& grid,
                      const std::map<std::string, double>& tols) {
    (void)grid;
    row.value = std::abs(dirichlet_kernel_real(0.25, 1.0, 1.0) - 0.5538560908707103);
    row.bound = tol_of(tols, "kernel_value", 1e-6);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_kernel_domination(SweepRow& row, const GridParams& grid,
                           const std::map<std::string, double>& tols) {
    (void)grid;
    (void)tols;
    const double delta = param(row.params, "delta_angle", M_PI / 4.0);
    const double c = std::cos(delta);
    std::size_t violations = 0;
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const double x = 4.0 * (i + 0.5) / 64.0, y = 4.0 * (j + 0.5) / 64.0;
            const double lhs = std::abs(dirichlet_kernel(ComplexTime(0.25, delta), x, y));
            const double rhs = std::pow(c, -1.5) * dirichlet_kernel_real(0.25 / c, x, y);
            if (lhs > rhs * (1.0 + 1e-12)) ++violations;
        }
    }
    row.value = double(violations);
    row.bound = 0.0;
    row.trend = "stable";
    row.pass = violations == 0 ? RowStatus::pass : RowStatus::fail;
}

std::vector<DominationPoint> domination_lattice(std::size_t m) {
    std::vector<DominationPoint> pts;
    pts.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            DominationPoint p;
            p.x1 = 4.0 * (double(i) + 0.5) / double(m);
            p.y1 = 4.0 * (double(j) + 0.5) / double(m);
            p.x2 = 0.7 * std::sin(3.0 * p.x1);
            p.y2 = 0.4 * std::cos(2.0 * p.y1);
            pts.push_back(p);
        }
    }
    return pts;
}

void run_gaussian_domination(SweepRow& row, const GridParams& grid,
                             const std::map<std::string, double>& tols) {
    (void)grid;
    const double t = param(row.params, "t", 0.25);
    const double theta = param(row.params, "theta", 0.5);
    auto coarse = gaussian_domination_check(t, domination_lattice(100), theta);
    auto fine = gaussian_domination_check(t, domination_lattice(200), theta);
    row.value = fine.sup_ratio;
    row.bound = fine.certified_bound;
    const double drift = std::abs(coarse.sup_ratio - fine.sup_ratio) / fine.sup_ratio;
    row.trend = drift < tol_of(tols, "domination_drift", 0.05) ? "stable" : "growing";
    row.pass = fine.violations == 0 && coarse.violations == 0 && row.trend == "stable"
                   ? RowStatus::pass
                   : RowStatus::fail;
}

void run_operator_norm(SweepRow& row, const GridParams& grid,
                       const std::map<std::string, double>& tols) {
    (void)tols;
    const LebesgueExponent p(require(row.params, "p"));
    const PowerWeight w(require(row.params, "gamma"));
    const double t = param(row.params, "t", 1.0);
    std::vector<double> levels;
    for (std::size_t n : {grid.n / 4, grid.n / 2, grid.n}) {
        auto g = make_graded_grid(std::max<std::size_t>(64, n), grid.x_max, grid.grading);
        LinearOp heat = [&](std::span<const double> v) {
            const CellPoly poly(*g, v);
            return heat_apply_real(poly, t, g->nodes());
        };
        levels.push_back(
            operator_norm_estimate(heat, *g, p, w, 4, row.seed).value);
    }
    row.value = levels.back();
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(classify_trend(levels));
    row.pass = row.trend == "stable" ? RowStatus::pass : RowStatus::fail;
}

void run_resolvent_oracle(SweepRow& row, const GridParams& grid,
                          const std::map<std::string, double>& tols) {
    const double gamma = param(row.params, "gamma", 0.0);
    const double lambda = param(row.params, "lambda", 1.0);
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto step = [](double s) {
        if (s <= 0.0) return 0.0;
        if (s >= 1.0) return 1.0;
        return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    };
    auto f = GridFunction::sample(g, [&](double x) {
        return 2.0 * std::exp(-x) * step(x / 0.5) * (1.0 - step((x - 14.0) / 4.0));
    });
    auto a = apply_resolvent(f, lambda);
    auto b = odd_extension_solve(f, lambda);
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = a[i] - b[i];
    const PowerWeight w(gamma);
    row.value = lp_norm(GridFunction(g, std::move(d)), 2.0, w) / lp_norm(b, 2.0, w);
    row.bound = tol_of(tols, "resolvent_oracle", 0.02);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_resolvent_identity(SweepRow& row, const GridParams& grid,
                            const std::map<std::string, double>& tols) {
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto f = GridFunction::sample(g, [](double x) { return 2.0 * std::exp(-x); });
    const Complex mu(2.0, 1.0);
    auto r1 = apply_resolvent(f, Complex(1.0, 0.0));
    auto r2 = apply_resolvent(f, mu);
    auto r12 = apply_resolvent(r2, Complex(1.0, 0.0));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += std::norm(r1[i] - r2[i] - (mu - 1.0) * r12[i]) * g->quad_weight(i);
        den += f[i] * f[i] * g->quad_weight(i);
    }
    row.value = std::sqrt(num / den);
    row.bound = tol_of(tols, "resolvent_identity", 1e-6);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_hinf_rational(SweepRow& row, const GridParams& grid,
                       const std::map<std::string, double>& tols) {
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto f = GridFunction::sample(g, [](double x) { return x * std::exp(-x * x); });
    auto contour = SectorContour::make(M_PI / 4.0);
    HolomorphicSymbol rational{[](Complex z) { return z / ((1.0 + z) * (1.0 + z)); }, 0.3,
                               1.0};
    auto via = apply_hinf_symbol(f, rational, contour);
    auto r1 = apply_resolvent(f, 1.0);
    auto r2 = apply_resolvent(r1, 1.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += std::norm(via[i] - Complex(r1[i] - r2[i], 0.0)) * g->quad_weight(i);
        den += f[i] * f[i] * g->quad_weight(i);
    }
    row.value = std::sqrt(num / den);
    row.bound = tol_of(tols, "hinf_rational", 1e-4);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_hinf_tau(SweepRow& row, const GridParams& grid,
                  const std::map<std::string, double>& tols) {
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const PowerWeight w(require(row.params, "gamma"));
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto packet = GridFunction::sample(g, [](double x) {
        return std::exp(-(x - 16.0) * (x - 16.0) / 36.0) * std::sin(x);
    });
    auto contour = SectorContour::make(M_PI / 4.0, 1e30, 640, 1e-8);
    HinfApplier applier(packet, contour);
    const double base = lp_norm(packet, p.p, w);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double tau : {0.0, 1.0, 2.0, 4.0}) {
        auto out = applier.apply(imaginary_power_symbol(tau));
        const double r = lp_norm(out, p.p, w) / base;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    row.value = hi / lo;
    row.bound = tol_of(tols, "hinf_tau_spread", 2.0);
    row.trend = "stable";
    row.pass = std::isfinite(hi) && row.value <= row.bound ? RowStatus::pass
                                                           : RowStatus::fail;
}

void run_elliptic_scaling(SweepRow& row, const GridParams& grid,
                          const std::map<std::string, double>& tols) {
    const LebesgueExponent p(require(row.params, "p"));
    const double gamma = require(row.params, "gamma");
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto base_fn = [](double x) { return 2.0 * std::exp(-x); };
    const double base =
        solve_elliptic(GridFunction::sample(g, base_fn), 1.0, p, gamma).report.value;
    double worst = 0.0;
    for (double lam : {10.0, 100.0, 1e4}) {
        const double s = std::sqrt(lam);
        auto f = GridFunction::sample(g, [&](double x) { return lam * base_fn(s * x); });
        const double v = solve_elliptic(f, lam, p, gamma).report.value;
        worst = std::max(worst, std::abs(v / base - 1.0));
    }
    row.value = worst;
    row.bound = tol_of(tols, "elliptic_scaling", 0.2);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_elliptic_closed_form(SweepRow& row, const GridParams& grid,
                              const std::map<std::string, double>& tols) {
    const LebesgueExponent p2(2.0);
    auto g = make_graded_grid(std::max<std::size_t>(64, grid.n), grid.x_max, grid.grading);
    auto f = GridFunction::sample(g, [](double x) { return 2.0 * std::exp(-x); });
    auto sol = solve_elliptic(f, 1.0, p2, 2.0);
    const PowerWeight w(2.0);
    const double e0 = std::abs(lp_norm(sol.u, 2.0, w) / std::sqrt(0.75) - 1.0);
    const double e1 = std::abs(sobolev_seminorm(sol.u, 1, p2, w) / 0.5 - 1.0);
    const double e2 = std::abs(sobolev_seminorm(sol.u, 2, p2, w) / 0.5 - 1.0);
    row.value = std::max({e0, e1, e2});
    row.bound = tol_of(tols, "elliptic_closed_form", 0.01);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_heat_forced(SweepRow& row, const GridParams& grid,
                     const std::map<std::string, double>& tols) {
    (void)grid;
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const LebesgueExponent q(param(row.params, "q", 2.0));
    const double gamma = param(row.params, "gamma", 2.0);
    const double mu = param(row.params, "mu", 0.0);
    std::vector<double> ratios;
    for (int lvl = 0; lvl < 3; ++lvl) {
        auto tg = make_time_grid(32 << lvl, 2.0);
        auto xg = make_graded_grid(64 << lvl, 20.0, 3.0);
        SpaceTimeFunction f(tg, xg);
        for (std::size_t i = 0; i < f.nt(); ++i)
            for (std::size_t j = 0; j < f.nx(); ++j)
                f.at(i, j) = std::sin(2.0 * tg->node(i)) * xg->node(j) *
                             std::exp(-xg->node(j));
        ratios.push_back(solve_heat_forced(f, 1.0, p, q, gamma, mu).report.value);
    }
    row.value = ratios.back();
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(classify_trend(ratios, tol_of(tols, "maxreg_growth", 0.10)));
    row.pass = row.trend == "stable" ? RowStatus::pass : RowStatus::fail;
}

void run_boundary_maxreg(SweepRow& row, const GridParams& grid,
                         const std::map<std::string, double>& tols) {
    (void)grid;
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const double gamma = require(row.params, "gamma");
    const double alpha = require(row.params, "alpha");
    auto data_tg = make_time_grid(512, 1.0);
    auto g = BoundaryData::sample(data_tg,
                                  [alpha](double t) { return std::pow(t, alpha); });
    std::vector<double> ratios;
    for (int lvl = 0; lvl < 3; ++lvl) {
        auto tg = make_time_grid(32 << lvl, 1.0);
        auto xg = make_graded_grid(64 << lvl, 16.0, 3.0);
        ratios.push_back(solve_heat_boundary(g, p, gamma, tg, xg).report.value);
    }
    row.value = ratios.back();
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(classify_trend(ratios, tol_of(tols, "maxreg_growth", 0.02)));
    row.pass = row.trend == "stable" ? RowStatus::pass : RowStatus::fail;
}

void run_boundary_erfc(SweepRow& row, const GridParams& grid,
                       const std::map<std::string, double>& tols) {
    (void)grid;
    auto tg = make_time_grid(128, 1.0);
    auto g = BoundaryData::sample(tg, [](double) { return 1.0; });
    row.value = std::abs(heat_boundary_value(g, 1.0, 1.0) - 0.4795001221869535);
    row.bound = tol_of(tols, "boundary_erfc", 1e-4);
    row.trend = "stable";
    row.pass = row.value <= row.bound ? RowStatus::pass : RowStatus::fail;
}

void run_interval_decay(SweepRow& row, const GridParams& grid,
                        const std::map<std::string, double>& tols) {
    (void)grid;
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const double gamma = param(row.params, "gamma", 0.0);
    auto g = make_interval_grid(256, 2.0);
    auto f0 = GridFunction::sample(g, [](double x) { return x * (1.0 - x); });
    auto fit = interval_decay_rate(f0, p, gamma, param(row.params, "t0", 0.3),
                                   param(row.params, "t1", 1.0));
    row.value = fit.rate;
    row.bound = -M_PI * M_PI;
    row.trend = "stable";
    const double tol = tol_of(tols, "decay_rate", 0.01);
    row.pass = std::abs(fit.rate + M_PI * M_PI) <= tol * M_PI * M_PI ? RowStatus::pass
                                                                     : RowStatus::fail;
}

void run_besov_membership(SweepRow& row, const GridParams& grid,
                          const std::map<std::string, double>& tols) {
    (void)grid;
    const LebesgueExponent p(param(row.params, "p", 2.0));
    const double delta = require(row.params, "delta");
    const double alpha = require(row.params, "alpha");
    std::vector<double> vals;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        auto tg = make_time_grid(n, 1.0);
        auto gfun = GridFunction::sample(tg, [&](double t) { return std::pow(t, alpha); });
        vals.push_back(besov_time_seminorm(gfun, delta, p).value);
    }
    row.value = vals.back();
    row.bound = std::numeric_limits<double>::infinity();
    row.trend = to_string(classify_trend(vals, tol_of(tols, "besov_growth", 0.05)));
    row.pass = row.trend == "stable" ? RowStatus::pass : RowStatus::fail;
}

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> reg = {
        {"hardy_ratio", run_hardy},
        {"trace_ratio", run_trace},
        {"interpolation_ratio", run_interp},
        {"multiplication_map", run_mult_map},
        {"schur_a", [](auto& r, auto& g, auto& t) { run_schur(r, g, t, true); }},
        {"schur_b", [](auto& r, auto& g, auto& t) { run_schur(r, g, t, false); }},
        {"sharpness_probe", run_sharpness},
        {"ap_constant", run_ap_constant},
        {"semigroup_law", run_semigroup_law},
        {"semigroup_evolution", run_evolution},
        {"kernel_value", run_kernel_value},
        {"kernel_domination", run_kernel_domination},
        {"gaussian_domination", run_gaussian_domination},
        {"operator_norm", run_operator_norm},
        {"resolvent_oracle", run_resolvent_oracle},
        {"resolvent_identity", run_resolvent_identity},
        {"hinf_rational", run_hinf_rational},
        {"hinf_tau_sweep", run_hinf_tau},
        {"elliptic_scaling", run_elliptic_scaling},
        {"elliptic_closed_form", run_elliptic_closed_form},
        {"heat_forced_maxreg", run_heat_forced},
        {"boundary_maxreg", run_boundary_maxreg},
        {"boundary_erfc", run_boundary_erfc},
        {"interval_decay", run_interval_decay},
        {"besov_membership", run_besov_membership},
    };
    return reg;
}

std::uint64_t row_seed(const std::string& check, const std::map<std::string, double>& params) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    };
    for (char c : check) mix(std::uint64_t(c));
    for (const auto& [k, v] : params) {
        for (char c : k) mix(std::uint64_t(c));
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        mix(bits);
    }
    return h;
}

} // namespace

std::vector<std::string> known_checks() {
    std::vector<std::string> out;
    for (const auto& [k, _] : registry()) out.push_back(k);
    return out;
}

SweepRow run_check(const std::string& id, const std::map<std::string, double>& params,
                   const GridParams& grid, const std::map<std::string, double>& tolerances) {
    auto it = registry().find(id);
    if (it == registry().end()) {
        std::string msg = "unknown check '" + id + "'; known checks:";
        for (const auto& k : known_checks()) msg += " " + k;
        throw ConfigError(msg);
    }
    SweepRow row;
    row.check = id;
    row.params = params;
    row.seed = row_seed(id, params);
    const auto start = std::chrono::steady_clock::now();
    it->second(row, grid, tolerances);
    row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return row;
}

SweepConfig parse_sweep_config(const std::string& text) {
    SweepConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto fail = [&](const std::string& what) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
        };
        if (head == "output_dir") {
            if (!(ls >> cfg.output_dir)) fail("output_dir needs a path");
        } else if (head == "grid") {
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) fail("grid expects key=value");
                const std::string key = tok.substr(0, eq);
                const double val = std::stod(tok.substr(eq + 1));
                if (key == "n") cfg.grid.n = std::size_t(val);
                else if (key == "xmax") cfg.grid.x_max = val;
                else if (key == "grading") cfg.grid.grading = val;
                else fail("unknown grid key '" + key + "'");
            }
        } else if (head == "tol") {
            std::string name;
            double value;
            if (!(ls >> name >> value)) fail("tol expects <name> <value>");
            cfg.tolerances[name] = value;
        } else if (head == "check") {
            CheckSpec spec;
            if (!(ls >> spec.id)) fail("check expects an id");
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) fail("check parameter expects key=value");
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "expect") {
                    if (val != "divergent") fail("only expect=divergent is understood");
                    spec.expect_divergent = true;
                    continue;
                }
                std::vector<double> values;
                std::istringstream vs(val);
                std::string piece;
                while (std::getline(vs, piece, ',')) values.push_back(std::stod(piece));
                if (values.empty()) fail("empty value list for '" + key + "'");
                spec.lattice.emplace_back(key, std::move(values));
            }
            cfg.checks.push_back(std::move(spec));
        } else {
            fail("unknown directive '" + head + "'");
        }
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sweep_config(buf.str());
}

SweepResult run_sweep(const SweepConfig& config) {
    // validate ids up front so a typo is a config error, not a failed row
    for (const auto& spec : config.checks) {
        if (registry().find(spec.id) == registry().end()) {
            std::string msg = "unknown check '" + spec.id + "'; known checks:";
            for (const auto& k : known_checks()) msg += " " + k;
            throw ConfigError(msg);
        }
    }

    struct Task {
        std::string id;
        std::map<std::string, double> params;
        bool expect_divergent;
    };
    std::vector<Task> tasks;
    for (const auto& spec : config.checks) {
        std::vector<std::size_t> idx(spec.lattice.size(), 0);
        while (true) {
            Task t;
            t.id = spec.id;
            t.expect_divergent = spec.expect_divergent;
            for (std::size_t k = 0; k < spec.lattice.size(); ++k)
                t.params[spec.lattice[k].first] = spec.lattice[k].second[idx[k]];
            tasks.push_back(std::move(t));
            if (spec.lattice.empty()) break;
            std::size_t k = spec.lattice.size();
            while (k > 0) {
                --k;
                if (++idx[k] < spec.lattice[k].second.size()) break;
                idx[k] = 0;
                if (k == 0) goto done;
            }
            continue;
        done:
            break;
        }
    }

    std::size_t workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("HEATCALC_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) workers = std::size_t(v);
    }
    workers = std::max<std::size_t>(1, std::min(workers, tasks.size()));

    SweepResult result;
    result.rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const auto& t = tasks[i];
            SweepRow row;
            try {
                row = run_check(t.id, t.params, config.grid, config.tolerances);
            } catch (const std::exception& e) {
                row.check = t.id;
                row.params = t.params;
                row.pass = RowStatus::fail;
                row.error = e.what();
                row.trend = "error";
            }
            if (t.expect_divergent) {
                row.pass = row.trend == "growing" ? RowStatus::expected_divergence_confirmed
                                                  : RowStatus::fail;
            }
            result.rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string status_str(RowStatus s) {
    switch (s) {
        case RowStatus::pass: return "pass";
        case RowStatus::fail: return "fail";
        case RowStatus::expected_divergence_confirmed:
            return "expected-divergence-confirmed";
    }
    return "fail";
}

RowStatus status_from(const std::string& s) {
    if (s == "pass") return RowStatus::pass;
    if (s == "expected-divergence-confirmed")
        return RowStatus::expected_divergence_confirmed;
    return RowStatus::fail;
}

} // namespace

std::string emit_csv(const SweepResult& result, const GridParams& grid) {
    std::ostringstream out;
    out << "check,p,gamma,lambda,t,extra_params,value,bound,pass,trend,n,X_max\n";
    for (const auto& row : result.rows) {
        auto pick = [&](const char* k) {
            auto it = row.params.find(k);
            return it == row.params.end() ? std::string() : fmt(it->second);
        };
        std::string extra;
        for (const auto& [k, v] : row.params) {
            if (k == "p" || k == "gamma" || k == "lambda" || k == "t") continue;
            if (!extra.empty()) extra += ';';
            extra += k + "=" + fmt(v);
        }
        out << row.check << ',' << pick("p") << ',' << pick("gamma") << ','
            << pick("lambda") << ',' << pick("t") << ',' << extra << ',' << fmt(row.value)
            << ',' << (std::isinf(row.bound) ? "finite" : fmt(row.bound)) << ','
            << status_str(row.pass) << ',' << row.trend << ',' << grid.n << ','
            << fmt(grid.x_max) << '\n';
    }
    return out.str();
}

std::string emit_json(const SweepResult& result, const GridParams& grid) {
    nlohmann::json j;
    j["grid"] = {{"n", grid.n}, {"X_max", grid.x_max}, {"grading", grid.grading}};
    j["rows"] = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json r;
        r["check"] = row.check;
        r["params"] = row.params;
        r["value"] = row.value;
        r["bound"] = std::isinf(row.bound) ? nlohmann::json("finite")
                                           : nlohmann::json(row.bound);
        r["pass"] = status_str(row.pass);
        r["trend"] = row.trend;
        r["error"] = row.error;
        r["runtime_ms"] = row.runtime_ms;
        r["seed"] = row.seed;
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2);
}

SweepResult parse_sweep_result_json(const std::string& text, GridParams* grid_out) {
    const auto j = nlohmann::json::parse(text);
    if (grid_out) {
        grid_out->n = j.at("grid").at("n").get<std::size_t>();
        grid_out->x_max = j.at("grid").at("X_max").get<double>();
        grid_out->grading = j.at("grid").at("grading").get<double>();
    }
    SweepResult result;
    for (const auto& r : j.at("rows")) {
        SweepRow row;
        row.check = r.at("check").get<std::string>();
        for (const auto& [k, v] : r.at("params").items())
            row.params[k] = v.get<double>();
        row.value = r.at("value").get<double>();
        row.bound = r.at("bound").is_string() ? std::numeric_limits<double>::infinity()
                                              : r.at("bound").get<double>();
        row.pass = status_from(r.at("pass").get<std::string>());
        row.trend = r.at("trend").get<std::string>();
        row.error = r.at("error").get<std::string>();
        row.runtime_ms = r.at("runtime_ms").get<std::int64_t>();
        row.seed = r.at("seed").get<std::uint64_t>();
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string emit_gnuplot(const SweepResult& result) {
    // one whitespace-separated block per check, blocks separated by two
    // blank lines
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SweepRow*>> by_check;
    for (const auto& row : result.rows) {
        if (by_check.find(row.check) == by_check.end()) order.push_back(row.check);
        by_check[row.check].push_back(&row);
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& id : order) {
        if (!first) out << "\n\n";
        first = false;
        out << "# check " << id << "\n";
        out << "# p gamma lambda t value bound pass\n";
        for (const SweepRow* row : by_check[id]) {
            auto pick = [&](const char* k) {
                auto it = row->params.find(k);
                return it == row->params.end() ? std::string("nan") : fmt(it->second);
            };
            out << pick("p") << ' ' << pick("gamma") << ' ' << pick("lambda") << ' '
                << pick("t") << ' ' << fmt(row->value) << ' '
                << (std::isinf(row->bound) ? "inf" : fmt(row->bound)) << ' '
                << int(row->pass == RowStatus::fail ? 0 : 1) << '\n';
        }
    }
    return out.str();
}

std::vector<std::string> emit_report(const SweepResult& result, const SweepConfig& config,
                                     const std::string& format) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    auto write = [&](const std::string& name, const std::string& content) {
        const auto path = std::filesystem::path(config.output_dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_report: cannot write " + path.string());
        out << content;
        return path.string();
    };
    std::vector<std::string> paths;
    if (format == "csv") {
        paths.push_back(write("result.csv", emit_csv(result, config.grid)));
    } else if (format == "json") {
        paths.push_back(write("result.json", emit_json(result, config.grid)));
    } else if (format == "gnuplot-dat") {
        paths.push_back(write("result.dat", emit_gnuplot(result)));
    } else {
        throw std::invalid_argument("emit_report: unsupported format '" + format + "'");
    }
    return paths;
}

} // namespace heatcalc
