#pragma once

#include "heatcalc/grid.hpp"
#include "heatcalc/weight.hpp"

#include <optional>
#include <utility>

namespace heatcalc {

/// Weighted L^p norm by grid quadrature. Throws on NaN values.
double lp_norm(const GridFunction& f, double p, const PowerWeight& w);
double lp_norm(const ComplexGridFunction& f, double p, const PowerWeight& w);

double sup_norm(const GridFunction& f);

/// k-th finite-difference derivative, k in {1,2,3}. Stencil of k+2 nodes,
/// centered where possible, one-sided at the ends (second order).
GridFunction fd_derivative(const GridFunction& f, int k);

inline constexpr int kStencilOrder = 2;

/// [f]_{W^{k,p}(w)}: L^p(w) norm of the k-th derivative.
double sobolev_seminorm(const GridFunction& f, int k, const LebesgueExponent& p,
                        const PowerWeight& w);

/// ||f||_{W^{k,p}(w)} = (sum_{j<=k} [f]_j^p)^{1/p}.
double sobolev_norm(const GridFunction& f, int k, const LebesgueExponent& p,
                    const PowerWeight& w);

struct BesovSeminormResult {
    double value;
    double excluded_band; ///< |t-s| below this was dropped from the double sum
};

/// Gagliardo difference-quotient seminorm
/// ( iint |g(t)-g(s)|^p / |t-s|^{1+delta p} ds dt )^{1/p}
/// on the time grid carrying g, with the diagonal band of one grid spacing
/// excluded.
BesovSeminormResult besov_time_seminorm(const GridFunction& g, double delta,
                                        const LebesgueExponent& p);

struct ApEstimate {
    double value = 0.0;  ///< supremum over tested intervals (when finite)
    bool divergent = false;
};

/// Numerical A_p product of x^gamma over dyadic intervals [0, 2^-j] and unit
/// intervals [k, k+1], j,k <= levels. Divergence is flagged when the product
/// on some interval keeps growing under quadrature refinement.
ApEstimate ap_constant_estimate(double gamma, const LebesgueExponent& p, int levels);

struct WeightEquivalence {
    double c_low = 0.0;
    double c_high = 0.0;
    std::size_t boundary_hits = 0; ///< sample points that landed on the boundary
};

/// Empirical comparability constants of |x1 - h(xt)|^gamma against
/// dist(x, boundary)^gamma over a sample lattice above the graph of h.
/// h is sampled on a uniform abscissa grid; dist is a nearest-point search
/// over a refined boundary polyline.
WeightEquivalence graph_domain_weight_equivalence(const GridFunction& h, double gamma,
                                                  std::size_t samples);

} // namespace heatcalc
