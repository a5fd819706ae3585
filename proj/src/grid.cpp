#include "heatcalc/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace heatcalc {

namespace {

void check_args(std::size_t n, double x_max, double grading) {
    if (n < 8) throw std::invalid_argument("GradedGrid: need n >= 8");
    if (!(x_max > 0.0) || !std::isfinite(x_max))
        throw std::invalid_argument("GradedGrid: X_max must be positive");
    if (!(grading >= 1.0) || !std::isfinite(grading))
        throw std::invalid_argument("GradedGrid: grading exponent must be >= 1");
}

} // namespace

GradedGrid GradedGrid::half_line(std::size_t n, double x_max, double grading) {
    check_args(n, x_max, grading);
    std::vector<double> edges(n + 1), nodes(n), weights(n);
    for (std::size_t i = 0; i <= n; ++i) {
        edges[i] = x_max * std::pow(double(i) / double(n), grading);
    }
    edges[n] = x_max;
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = x_max * std::pow((double(i) + 0.5) / double(n), grading);
        weights[i] = edges[i + 1] - edges[i];
    }
    return GradedGrid(Geometry::half_line, x_max, grading, std::move(nodes),
                      std::move(weights), std::move(edges));
}

GradedGrid GradedGrid::interval(std::size_t n, double grading) {
    check_args(n, 1.0, grading);
    // symmetric map u^g / (u^g + (1-u)^g): dense at both 0 and 1
    auto map = [grading](double u) {
        const double a = std::pow(u, grading);
        const double b = std::pow(1.0 - u, grading);
        return a / (a + b);
    };
    std::vector<double> edges(n + 1), nodes(n), weights(n);
    for (std::size_t i = 0; i <= n; ++i) edges[i] = map(double(i) / double(n));
    edges[0] = 0.0;
    edges[n] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = map((double(i) + 0.5) / double(n));
        weights[i] = edges[i + 1] - edges[i];
    }
    return GradedGrid(Geometry::interval_0_1, 1.0, grading, std::move(nodes),
                      std::move(weights), std::move(edges));
}

GridPtr make_graded_grid(std::size_t n, double x_max, double grading) {
    return std::make_shared<const GradedGrid>(GradedGrid::half_line(n, x_max, grading));
}

GridPtr make_interval_grid(std::size_t n, double grading) {
    return std::make_shared<const GradedGrid>(GradedGrid::interval(n, grading));
}

GridPtr make_time_grid(std::size_t n, double t_max) {
    return make_graded_grid(n, t_max, 1.0);
}

template <typename T>
BasicGridFunction<T>::BasicGridFunction(GridPtr grid, std::vector<T> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("GridFunction: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("GridFunction: value count does not match grid");
    for (const T& v : values_) {
        if (!std::isfinite(std::abs(v)))
            throw std::invalid_argument("GridFunction: non-finite value");
    }
}

template class BasicGridFunction<double>;
template class BasicGridFunction<std::complex<double>>;

ComplexGridFunction to_complex(const GridFunction& f) {
    std::vector<std::complex<double>> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = f[i];
    return ComplexGridFunction(f.grid(), std::move(v));
}

} // namespace heatcalc
