#pragma once

#include "heatcalc/grid.hpp"
#include "heatcalc/report.hpp"
#include "heatcalc/weight.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace heatcalc {

/// Time-major sampled field u(t_i, x_j).
struct SpaceTimeFunction {
    GridPtr time_grid;
    GridPtr space_grid;
    std::vector<double> values; ///< values[i * nx + j]

    SpaceTimeFunction(GridPtr tg, GridPtr xg);
    double& at(std::size_t ti, std::size_t xj) { return values[ti * space_grid->size() + xj]; }
    double at(std::size_t ti, std::size_t xj) const {
        return values[ti * space_grid->size() + xj];
    }
    std::size_t nt() const { return time_grid->size(); }
    std::size_t nx() const { return space_grid->size(); }
};

/// Dirichlet boundary signal g(t_i) with its compatibility marker g(0) = 0.
struct BoundaryData {
    GridPtr time_grid;
    std::vector<double> values;
    bool compatible;

    BoundaryData(GridPtr tg, std::vector<double> vals);
    template <typename F>
    static BoundaryData sample(GridPtr tg, F&& f) {
        std::vector<double> v(tg->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(tg->node(i));
        return BoundaryData(std::move(tg), std::move(v));
    }
};

/// L^q(v_mu; L^p(w_gamma)) space-time norm of a field.
double space_time_norm(const SpaceTimeFunction& u, double q, double mu, double p,
                       const PowerWeight& w);

struct EllipticSolution {
    GridFunction u;
    NormReport report; ///< value = sum_j lambda^{1-j/2} ||u^(j)|| / ||f||
};

/// (lambda - Laplace_Dir) u = f on the half line with the lambda-scaled
/// a-priori quantity in the report.
EllipticSolution solve_elliptic(const GridFunction& f, double lambda,
                                const LebesgueExponent& p, double gamma);

struct HeatForcedSolution {
    SpaceTimeFunction u;
    NormReport report; ///< value = (||u'|| + ||dxx u||) / ||f||, weighted norms
};

/// u' + (lambda - Laplace_Dir) u = f, u(0) = 0, by exact semigroup stepping
/// with trapezoidal Duhamel increments.
HeatForcedSolution solve_heat_forced(const SpaceTimeFunction& f, double lambda,
                                     const LebesgueExponent& p, const LebesgueExponent& q,
                                     double gamma, double mu);

struct HeatBoundarySolution {
    SpaceTimeFunction u;
    NormReport report; ///< value = MR seminorm / (Besov-in-time + L^p data norm)
    double delta;      ///< temporal smoothness exponent 1 - (1+gamma)/(2p)
    double data_norm;  ///< denominator, computed on the data's own time grid
};

/// Heat equation with inhomogeneous Dirichlet data g and zero initial value:
/// u(t,x) = int_0^t k_b(t-s, x) g(s) ds with the boundary kernel
/// k_b(tau,x) = x (4 pi)^{-1/2} tau^{-3/2} e^{-x^2/(4 tau)}, integrated in
/// closed form (erf/erfc) against piecewise-linear g on each time cell.
/// Requires g(0) = 0 when gamma < 2p-3; gamma = 2p-3 and p-1 are excluded.
HeatBoundarySolution solve_heat_boundary(const BoundaryData& g, const LebesgueExponent& p,
                                         double gamma, GridPtr time_grid,
                                         GridPtr space_grid);

/// Pointwise evaluation of the boundary solution (for closed-form probes).
double heat_boundary_value(const BoundaryData& g, double t, double x);

struct DecayFit {
    double rate;     ///< least-squares slope of log ||T(t) f0||
    double residual; ///< rms fit residual of the log-norm samples
};

/// Exponential decay rate of the interval semigroup on L^p(w_gamma^O),
/// fitted over [t0, t1]. Throws when the window is too early for a clean
/// single-mode fit.
DecayFit interval_decay_rate(const GridFunction& f0, const LebesgueExponent& p,
                             double gamma, double t0, double t1);

/// CSV matrix (t rows, x columns) plus a JSON parameter sidecar.
void export_solution(const SpaceTimeFunction& u,
                     const std::map<std::string, double>& params,
                     const std::string& path_prefix);

} // namespace heatcalc
