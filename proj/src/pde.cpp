#include "heatcalc/pde.hpp"

#include "heatcalc/kernel_apply.hpp"
#include "heatcalc/kernels.hpp"
#include "heatcalc/norms.hpp"
#include "heatcalc/operators.hpp"
#include "heatcalc/summation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace heatcalc {

SpaceTimeFunction::SpaceTimeFunction(GridPtr tg, GridPtr xg)
    : time_grid(std::move(tg)), space_grid(std::move(xg)),
      values(time_grid->size() * space_grid->size(), 0.0) {}

BoundaryData::BoundaryData(GridPtr tg, std::vector<double> vals)
    : time_grid(std::move(tg)), values(std::move(vals)) {
    if (values.size() != time_grid->size())
        throw std::invalid_argument("BoundaryData: value count mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("BoundaryData: non-finite value");
    // g(0) = 0 detection: linear extrapolation of the first two nodes, or a
    // positive power-law slope in log-log (covers t^alpha with alpha small)
    const double t0 = time_grid->node(0), t1 = time_grid->node(1);
    const double g0 = values[0] - t0 * (values[1] - values[0]) / (t1 - t0);
    const double scale = std::max(1.0, std::abs(values[0]));
    compatible = std::abs(g0) < 1e-6 * scale;
    if (!compatible && values[0] * values[1] > 0.0) {
        const double slope = (std::log(std::abs(values[1])) - std::log(std::abs(values[0]))) /
                             (std::log(t1) - std::log(t0));
        compatible = slope > 0.02;
    }
}

double space_time_norm(const SpaceTimeFunction& u, double q, double mu, double p,
                       const PowerWeight& w) {
    const auto& tg = *u.time_grid;
    const auto& xg = *u.space_grid;
    Accumulator outer;
    for (std::size_t i = 0; i < u.nt(); ++i) {
        Accumulator inner;
        for (std::size_t j = 0; j < u.nx(); ++j) {
            inner.add(std::pow(std::abs(u.at(i, j)), p) * w(xg.node(j)) * xg.quad_weight(j));
        }
        const double slice = std::pow(inner.value(), 1.0 / p);
        outer.add(std::pow(slice, q) * std::pow(tg.node(i), mu) * tg.quad_weight(i));
    }
    return std::pow(outer.value(), 1.0 / q);
}

namespace {

// finite differences along the time axis (order k = 1), reusing the
// nonuniform stencils of fd_derivative per spatial column
SpaceTimeFunction time_derivative(const SpaceTimeFunction& u) {
    SpaceTimeFunction out(u.time_grid, u.space_grid);
    std::vector<double> column(u.nt());
    for (std::size_t j = 0; j < u.nx(); ++j) {
        for (std::size_t i = 0; i < u.nt(); ++i) column[i] = u.at(i, j);
        GridFunction cf(u.time_grid, column);
        auto d = fd_derivative(cf, 1);
        for (std::size_t i = 0; i < u.nt(); ++i) out.at(i, j) = d[i];
    }
    return out;
}

SpaceTimeFunction space_second_derivative(const SpaceTimeFunction& u) {
    SpaceTimeFunction out(u.time_grid, u.space_grid);
    std::vector<double> row(u.nx());
    for (std::size_t i = 0; i < u.nt(); ++i) {
        for (std::size_t j = 0; j < u.nx(); ++j) row[j] = u.at(i, j);
        GridFunction rf(u.space_grid, row);
        auto d = fd_derivative(rf, 2);
        for (std::size_t j = 0; j < u.nx(); ++j) out.at(i, j) = d[j];
    }
    return out;
}

} // namespace

EllipticSolution solve_elliptic(const GridFunction& f, double lambda,
                                const LebesgueExponent& p, double gamma) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("solve_elliptic: lambda must be positive (0 is not in "
                                    "the resolvent set on the half line)");
    if (!PowerWeight(gamma).is_extended(p.p))
        throw std::invalid_argument("solve_elliptic: gamma outside (-1, 2p-1) \\ {p-1}");
    auto u = apply_resolvent(f, lambda);
    const PowerWeight w(gamma);
    Accumulator ratio;
    for (int j = 0; j <= 2; ++j) {
        ratio.add(std::pow(lambda, 1.0 - 0.5 * double(j)) * sobolev_seminorm(u, j, p, w));
    }
    NormReport rep;
    rep.check = "elliptic_scaling";
    rep.params = {{"lambda", lambda}, {"p", p.p}, {"gamma", gamma}};
    rep.value = ratio.value() / lp_norm(f, p.p, w);
    rep.bound = std::numeric_limits<double>::infinity();
    rep.pass = std::isfinite(rep.value);
    rep.grid = {f.grid()->size(), f.grid()->x_max(), f.grid()->grading_exponent()};
    return {std::move(u), std::move(rep)};
}

HeatForcedSolution solve_heat_forced(const SpaceTimeFunction& f, double lambda,
                                     const LebesgueExponent& p, const LebesgueExponent& q,
                                     double gamma, double mu) {
    if (!(lambda > 0.0)) throw std::invalid_argument("solve_heat_forced: lambda > 0");
    if (!(mu > -1.0 && mu < q.p - 1.0))
        throw std::invalid_argument("solve_heat_forced: mu outside (-1, q-1)");
    const auto& tg = *f.time_grid;
    if (tg.grading_exponent() != 1.0)
        throw std::invalid_argument("solve_heat_forced: time grid must be uniform");
    const std::size_t nt = f.nt(), nx = f.nx();
    const double h = tg.quad_weight(0);

    SpaceTimeFunction u(f.time_grid, f.space_grid);
    const auto xnodes = f.space_grid->nodes();
    std::vector<double> cur(nx, 0.0), work(nx);
    const double decay = std::exp(-lambda * h);
    // u(t_{i+1}) = e^{-lambda h} T(h) [u(t_i) + (h/2) f(t_i)] + (h/2) f(t_{i+1});
    // the first node sits h/2 past t = 0 and is started with a half step
    for (std::size_t i = 0; i < nt; ++i) {
        if (i == 0) {
            const double h0 = tg.node(0);
            for (std::size_t j = 0; j < nx; ++j) work[j] = 0.5 * h0 * f.at(0, j);
            const CellPoly poly(*f.space_grid, std::span<const double>(work));
            cur = heat_apply_real(poly, h0, xnodes);
            for (std::size_t j = 0; j < nx; ++j)
                cur[j] = std::exp(-lambda * h0) * cur[j] + 0.5 * h0 * f.at(0, j);
        } else {
            for (std::size_t j = 0; j < nx; ++j) work[j] = cur[j] + 0.5 * h * f.at(i - 1, j);
            const CellPoly poly(*f.space_grid, std::span<const double>(work));
            cur = heat_apply_real(poly, h, xnodes);
            for (std::size_t j = 0; j < nx; ++j)
                cur[j] = decay * cur[j] + 0.5 * h * f.at(i, j);
        }
        for (std::size_t j = 0; j < nx; ++j) u.at(i, j) = cur[j];
    }

    const PowerWeight w(gamma);
    const double num = space_time_norm(time_derivative(u), q.p, mu, p.p, w) +
                       space_time_norm(space_second_derivative(u), q.p, mu, p.p, w);
    const double den = space_time_norm(f, q.p, mu, p.p, w);
    NormReport rep;
    rep.check = "heat_forced_maxreg";
    rep.params = {{"lambda", lambda}, {"p", p.p}, {"q", q.p}, {"gamma", gamma}, {"mu", mu}};
    rep.value = den == 0.0 ? 0.0 : num / den;
    rep.bound = std::numeric_limits<double>::infinity();
    rep.pass = std::isfinite(rep.value);
    rep.grid = {f.space_grid->size(), f.space_grid->x_max(),
                f.space_grid->grading_exponent()};
    return {std::move(u), std::move(rep)};
}

namespace {

// antiderivatives in tau of k_b and tau k_b
double boundary_kernel_f0(double tau, double x) {
    if (tau <= 0.0) return 0.0;
    return std::erfc(x / (2.0 * std::sqrt(tau)));
}

// antiderivative of tau k_b shifted by its tau -> 0 limit x^2/2, which keeps
// it zero at tau = 0 and cancellation-free for x >> sqrt(tau)
double boundary_kernel_f1(double tau, double x) {
    if (tau <= 0.0) return 0.0;
    const double r = x / (2.0 * std::sqrt(tau));
    return x * std::sqrt(tau / M_PI) * std::exp(-r * r) - 0.5 * x * x * std::erfc(r);
}

// int_{s0}^{s1} k_b(t - s, x) (alpha + beta s) ds via the closed forms
double boundary_cell(double t, double x, double s0, double s1, double alpha, double beta) {
    const double tau1 = t - s0, tau0 = t - s1;
    const double d0 = boundary_kernel_f0(tau1, x) - boundary_kernel_f0(tau0, x);
    const double d1 = boundary_kernel_f1(tau1, x) - boundary_kernel_f1(tau0, x);
    return (alpha + beta * t) * d0 - beta * d1;
}

} // namespace

double heat_boundary_value(const BoundaryData& g, double t, double x) {
    const auto& tg = *g.time_grid;
    const std::size_t nt = tg.size();
    Accumulator acc;
    // cell [0, node(0)]: constant continuation when no compatibility is
    // imposed, linear ramp to the extrapolated zero otherwise
    {
        const double s1 = std::min(t, tg.node(0));
        if (s1 > 0.0) {
            if (g.compatible) {
                const double beta = g.values[0] / tg.node(0);
                acc.add(boundary_cell(t, x, 0.0, s1, 0.0, beta));
            } else {
                acc.add(boundary_cell(t, x, 0.0, s1, g.values[0], 0.0));
            }
        }
    }
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        const double s0 = tg.node(i), s1 = tg.node(i + 1);
        if (s0 >= t) break;
        const double hi = std::min(s1, t);
        const double beta = (g.values[i + 1] - g.values[i]) / (s1 - s0);
        const double alpha = g.values[i] - beta * s0;
        acc.add(boundary_cell(t, x, s0, hi, alpha, beta));
    }
    return acc.value();
}

HeatBoundarySolution solve_heat_boundary(const BoundaryData& g, const LebesgueExponent& p,
                                         double gamma, GridPtr time_grid,
                                         GridPtr space_grid) {
    if (!(gamma > -1.0 && gamma < 2.0 * p.p - 1.0) || gamma == p.p - 1.0 ||
        gamma == 2.0 * p.p - 3.0)
        throw std::invalid_argument(
            "solve_heat_boundary: gamma outside (-1, 2p-1) \\ {p-1, 2p-3}");
    const double delta = 1.0 - (1.0 + gamma) / (2.0 * p.p);
    if (gamma < 2.0 * p.p - 3.0 && !g.compatible)
        throw std::invalid_argument(
            "solve_heat_boundary: g(0) = 0 is required for gamma < 2p-3");

    // resample g onto the solution time grid (linear interpolation)
    const auto& dtg = *g.time_grid;
    auto g_at = [&](double t) {
        const auto nodes = dtg.nodes();
        if (t <= nodes.front()) {
            if (g.compatible) return g.values[0] * t / nodes.front();
            return g.values[0];
        }
        if (t >= nodes.back()) return g.values.back();
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        const std::size_t j = std::size_t(it - nodes.begin());
        const double a = (t - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
        return g.values[j - 1] + a * (g.values[j] - g.values[j - 1]);
    };
    std::vector<double> gs(time_grid->size());
    for (std::size_t i = 0; i < gs.size(); ++i) gs[i] = g_at(time_grid->node(i));
    BoundaryData g_solve(time_grid, std::move(gs));
    g_solve.compatible = g.compatible;

    SpaceTimeFunction u(time_grid, space_grid);
    for (std::size_t i = 0; i < u.nt(); ++i) {
        const double t = time_grid->node(i);
        for (std::size_t j = 0; j < u.nx(); ++j) {
            u.at(i, j) = heat_boundary_value(g_solve, t, space_grid->node(j));
        }
    }

    const PowerWeight w(gamma);
    const double num = space_time_norm(time_derivative(u), p.p, 0.0, p.p, w) +
                       space_time_norm(space_second_derivative(u), p.p, 0.0, p.p, w);
    // the data norm lives on the data's own (fixed) grid so that refinement
    // studies refine the solution only
    GridFunction g_data(g.time_grid, std::vector<double>(g.values));
    const auto besov = besov_time_seminorm(g_data, delta, p);
    double lp_t = 0.0;
    {
        Accumulator acc;
        for (std::size_t i = 0; i < dtg.size(); ++i)
            acc.add(std::pow(std::abs(g.values[i]), p.p) * dtg.quad_weight(i));
        lp_t = std::pow(acc.value(), 1.0 / p.p);
    }
    const double den = besov.value + lp_t;

    NormReport rep;
    rep.check = "heat_boundary_maxreg";
    rep.params = {{"p", p.p}, {"gamma", gamma}, {"delta", delta}};
    rep.value = den == 0.0 ? 0.0 : num / den;
    rep.bound = std::numeric_limits<double>::infinity();
    rep.pass = std::isfinite(rep.value);
    rep.grid = {space_grid->size(), space_grid->x_max(), space_grid->grading_exponent()};
    return {std::move(u), std::move(rep), delta, den};
}

DecayFit interval_decay_rate(const GridFunction& f0, const LebesgueExponent& p,
                             double gamma, double t0, double t1) {
    if (f0.grid()->geometry() != Geometry::interval_0_1)
        throw std::invalid_argument("interval_decay_rate: needs an interval grid");
    if (!(t0 > 0.0 && t1 > t0)) throw std::invalid_argument("interval_decay_rate: bad window");
    const auto& g = *f0.grid();
    const PowerWeight w(gamma, Geometry::interval_0_1);
    const std::size_t n_modes = IntervalSpectrum::modes_for(t0, 1e-14);
    const IntervalSpectrum spec(n_modes);

    // eigen coefficients by quadrature
    std::vector<double> coef(n_modes + 1, 0.0);
    for (std::size_t k = 1; k <= n_modes; ++k) {
        Accumulator acc;
        for (std::size_t i = 0; i < g.size(); ++i)
            acc.add(f0[i] * spec.eigenfunction(k, g.node(i)) * g.quad_weight(i));
        coef[k] = acc.value();
    }
    double l2 = 0.0;
    for (std::size_t k = 1; k <= n_modes; ++k) l2 += coef[k] * coef[k];
    if (!(l2 > 0.0))
        throw std::invalid_argument("interval_decay_rate: f0 vanishes in the eigenbasis");

    const std::size_t samples = 12;
    std::vector<double> ts(samples), logn(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = t0 + (t1 - t0) * double(s) / double(samples - 1);
        std::vector<double> vals(g.size(), 0.0);
        for (std::size_t k = 1; k <= n_modes; ++k) {
            const double amp = coef[k] * std::exp(-spec.eigenvalue(k) * t);
            if (std::abs(amp) < 1e-300) continue;
            for (std::size_t i = 0; i < g.size(); ++i)
                vals[i] += amp * spec.eigenfunction(k, g.node(i));
        }
        ts[s] = t;
        logn[s] = std::log(lp_norm(GridFunction(f0.grid(), std::move(vals)), p.p, w));
    }
    // least squares slope
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        st += ts[s];
        sy += logn[s];
        stt += ts[s] * ts[s];
        sty += ts[s] * logn[s];
    }
    const double m = double(samples);
    const double slope = (m * sty - st * sy) / (m * stt - st * st);
    const double icept = (sy - slope * st) / m;
    double resid = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double r = logn[s] - (slope * ts[s] + icept);
        resid += r * r;
    }
    resid = std::sqrt(resid / m);
    if (resid > 0.02)
        throw std::runtime_error("interval_decay_rate: window too early, higher modes "
                                 "pollute the fit; move t0 later");
    return {slope, resid};
}

void export_solution(const SpaceTimeFunction& u,
                     const std::map<std::string, double>& params,
                     const std::string& path_prefix) {
    std::ofstream csv(path_prefix + ".csv");
    if (!csv) throw std::runtime_error("export_solution: cannot write " + path_prefix + ".csv");
    csv.precision(12);
    for (std::size_t i = 0; i < u.nt(); ++i) {
        for (std::size_t j = 0; j < u.nx(); ++j) {
            if (j) csv << ',';
            csv << u.at(i, j);
        }
        csv << '\n';
    }
    nlohmann::json j;
    for (const auto& [k, v] : params) j[k] = v;
    j["nt"] = u.nt();
    j["nx"] = u.nx();
    j["t_max"] = u.time_grid->x_max();
    j["x_max"] = u.space_grid->x_max();
    j["grading"] = u.space_grid->grading_exponent();
    std::ofstream side(path_prefix + ".json");
    side << j.dump(2) << '\n';
}

} // namespace heatcalc
