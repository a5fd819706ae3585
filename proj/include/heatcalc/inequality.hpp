#pragma once

#include "heatcalc/grid.hpp"
#include "heatcalc/report.hpp"
#include "heatcalc/weight.hpp"

#include <functional>
#include <string>
#include <vector>

namespace heatcalc {

/// One entry of the reproducible test corpus.
struct CorpusFunction {
    std::string name;
    std::function<double(double)> eval;
    bool vanishes_at_zero = false;
};

/// Parses the plain-text corpus format: one function per line,
/// `name kind params... [support lo hi]`.
std::vector<CorpusFunction> load_corpus(const std::string& path);

/// Grid family used for refinement studies.
struct RefinementPlan {
    std::vector<std::size_t> levels = {128, 256, 512};
    double x_max = 40.0;
    double grading = 3.0;
};

using ScalarFn = std::function<double(double)>;

/// ||u||_{L^p(w_{gamma-p})} / ||u'||_{L^p(w_gamma)} against the classical
/// constant p/|gamma-p+1|. Requires gamma != p-1; out-of-range inputs are
/// not rejected, they show up as a growing trend.
RatioReport hardy_ratio(const ScalarFn& u, const LebesgueExponent& p, double gamma,
                        const RefinementPlan& plan = {});

/// sup|u| / ||u||_{W^{order,p}(w_gamma)}. Order 1 needs gamma in [0, p-1),
/// order 2 needs gamma in (p-1, 2p-1).
RatioReport trace_embedding_ratio(const ScalarFn& u, const LebesgueExponent& p,
                                  double gamma, int order,
                                  const RefinementPlan& plan = {});

/// [u]_{W^{j,p}} / (||u||_{L^p}^{1-j/k} [u]_{W^{k,p}}^{j/k}) for
/// gamma in (-p-1, 2p-1) \ {-1, p-1} and 1 <= j < k <= 3.
RatioReport interpolation_ratio(const ScalarFn& u, const LebesgueExponent& p,
                                double gamma, int j, int k,
                                const RefinementPlan& plan = {});

struct MultiplicationMapResult {
    RatioReport forward;          ///< ||Mu||_{W^{k,p}(w_{gamma-p})} / ||u||_{W^{k,p}(w_gamma)}
    double inverse_ratio = 0.0;   ///< reverse direction on the same input
    double roundtrip_error = 0.0; ///< max node error of M^{-1}(M u) - u
};

/// The multiplication map (M u)(x) = x u(x) between weighted Sobolev
/// scales, gamma in (-1, 2p-1), k in {0,1,2}.
MultiplicationMapResult multiplication_map_ratio(const ScalarFn& u,
                                                 const LebesgueExponent& p, double gamma,
                                                 int k, const RefinementPlan& plan = {});

struct SchurValue {
    double value = 0.0;
    bool divergent = false;
};

struct SchurConstants {
    SchurValue A; ///< sup_x int k(x,y) dy/y
    SchurValue B; ///< sup_y int k(x,y) dx/x
    double sup_x = 0.0;
    double sup_y = 0.0;
};

/// Schur-test integrals of the normalized kernel
///   k(x,y) = y (x/y)^{(gamma+1)/p} e^{-(x-y)^2} (1 - e^{-4xy}),
/// the t = 1/4 reduction of the reflected heat kernel. p = 1 is allowed.
/// `density` sets the quadrature panel density (per decade / ridge factor).
SchurConstants schur_constants(double p, double gamma, std::size_t density = 8);

struct SharpnessProbe {
    double data_norm = 0.0;
    bool data_norm_divergent = false;
    std::vector<double> eps_levels;
    std::vector<double> truncated_image; ///< T(t) f_eps evaluated at x0 = 1/2
    double fit_residual = 1.0;           ///< against c (log 1/eps)^{1-beta} + d
    bool pass = false;
};

/// The boundary-growth counterexample f(x) = x^{-2} |log x|^{-beta} on
/// (0, 1/2): finite data norm, truncation-divergent image growing like
/// (log 1/eps)^{1-beta}.
SharpnessProbe sharpness_probe(const LebesgueExponent& p, double gamma, double beta,
                               double t);

} // namespace heatcalc
