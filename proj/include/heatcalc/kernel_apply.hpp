#pragma once

#include "heatcalc/grid.hpp"
#include "heatcalc/special.hpp"

#include <span>
#include <vector>

namespace heatcalc {

/// Piecewise-cubic representation of grid values: one cubic per quadrature
/// cell, interpolating the four nearest nodes, in coordinates scaled by the
/// cell width. Linear in the values, so operators built on it are linear.
class CellPoly {
public:
    template <typename T>
    CellPoly(const GradedGrid& grid, std::span<const T> values);

    const GradedGrid& grid() const { return *grid_; }
    bool complex_valued() const { return complex_; }
    /// 4 scaled monomial coefficients per cell.
    std::span<const Complex> coeffs(std::size_t cell) const {
        return {coeffs_.data() + 4 * cell, 4};
    }

private:
    const GradedGrid* grid_;
    bool complex_;
    std::vector<Complex> coeffs_;
};

/// Applies the half-line Dirichlet heat semigroup at complex time z to the
/// piecewise cubic, by closed-form Gaussian moments per cell:
///   (T(z) f)(x) = int_0^X [G_z(x-y) - G_z(x+y)] f(y) dy.
/// Uniformly accurate in z, including z -> 0 where it degenerates to the
/// interpolant itself.
std::vector<Complex> heat_apply(const CellPoly& poly, Complex z,
                                std::span<const double> eval_points);

/// Real-time convenience: imaginary parts are dropped (they are zero up to
/// roundoff when the input is real).
std::vector<double> heat_apply_real(const CellPoly& poly, double t,
                                    std::span<const double> eval_points);

} // namespace heatcalc
