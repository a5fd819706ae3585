#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace heatcalc {

enum class Geometry { half_line, interval_0_1 };

/// Quadrature mesh on (0, X_max] (or (0,1) for the interval geometry),
/// graded toward the weight singularities. Nodes are cell midpoints in the
/// mapped coordinate, quad_weights are the cell widths, so the weights sum
/// to the domain length exactly.
class GradedGrid {
public:
    /// Half-line grid: cell edges X_max*(i/n)^grading, nodes at mapped
    /// midpoints. grading 1 is the uniform midpoint rule.
    static GradedGrid half_line(std::size_t n, double x_max, double grading);

    /// Interval grid on (0,1), graded toward both endpoints. grading 1 is
    /// uniform.
    static GradedGrid interval(std::size_t n, double grading);

    std::size_t size() const { return nodes_.size(); }
    Geometry geometry() const { return geometry_; }
    double x_max() const { return x_max_; }
    double grading_exponent() const { return grading_; }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> quad_weights() const { return weights_; }
    /// Cell edges, size n+1, edges.front() == 0.
    std::span<const double> cell_edges() const { return edges_; }

    double node(std::size_t i) const { return nodes_[i]; }
    double quad_weight(std::size_t i) const { return weights_[i]; }

    bool same_mesh(const GradedGrid& other) const {
        return geometry_ == other.geometry_ && x_max_ == other.x_max_ &&
               grading_ == other.grading_ && nodes_.size() == other.nodes_.size();
    }

private:
    GradedGrid(Geometry g, double x_max, double grading, std::vector<double> nodes,
               std::vector<double> weights, std::vector<double> edges)
        : geometry_(g), x_max_(x_max), grading_(grading), nodes_(std::move(nodes)),
          weights_(std::move(weights)), edges_(std::move(edges)) {}

    Geometry geometry_;
    double x_max_;
    double grading_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> edges_;
};

using GridPtr = std::shared_ptr<const GradedGrid>;

GridPtr make_graded_grid(std::size_t n, double x_max, double grading);
GridPtr make_interval_grid(std::size_t n, double grading);
/// Uniform grid on (0, t_max], used as a time axis.
GridPtr make_time_grid(std::size_t n, double t_max);

/// Sampled function bound to a grid, one value per node.
template <typename T>
class BasicGridFunction {
public:
    BasicGridFunction(GridPtr grid, std::vector<T> values);

    /// Sample a callable at the grid nodes.
    template <typename F>
    static BasicGridFunction sample(GridPtr grid, F&& f) {
        std::vector<T> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
        return BasicGridFunction(std::move(grid), std::move(v));
    }

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const T> values() const { return values_; }
    std::span<T> values() { return values_; }
    T operator[](std::size_t i) const { return values_[i]; }
    T& operator[](std::size_t i) { return values_[i]; }

private:
    GridPtr grid_;
    std::vector<T> values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

ComplexGridFunction to_complex(const GridFunction& f);

} // namespace heatcalc
