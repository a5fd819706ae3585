#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace heatcalc {

/// Adaptive Simpson on [a, b] to the given absolute tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b] with
/// `points` nodes each (points in {2,3,4,5}).
PanelRule gauss_panels(double a, double b, std::size_t panels, int points);

/// Same rule laid out geometrically: panels equal in log scale on [a, b],
/// a > 0.
PanelRule gauss_log_panels(double a, double b, std::size_t panels_per_decade, int points);

/// Golden-section maximizer of a unimodal f on [a, b]; returns argmax.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          int iters = 80);

} // namespace heatcalc
