#pragma once

#include "heatcalc/grid.hpp"
#include "heatcalc/kernel_apply.hpp"
#include "heatcalc/kernels.hpp"
#include "heatcalc/weight.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace heatcalc {

/// T(z) f = H_z * f on the half line, by exact per-cell Gaussian moments of
/// the piecewise-cubic interpolant. Output is bound to the input grid.
GridFunction apply_semigroup(const GridFunction& f, double t);
ComplexGridFunction apply_semigroup(const GridFunction& f, const ComplexTime& z);
ComplexGridFunction apply_semigroup(const ComplexGridFunction& f, const ComplexTime& z);

/// Pointwise evaluation of T(z) f away from the grid (x = 0 included).
Complex apply_semigroup_at(const GridFunction& f, const ComplexTime& z, double x);

/// Tensor product smoke-test version on a half-plane grid: rows indexed by
/// the graded x1 grid, columns by a uniform tangential grid on
/// [-tan_half, tan_half]. values is row-major (x1-major).
std::vector<double> apply_semigroup_2d(const GradedGrid& x1_grid,
                                       std::size_t n_tangential, double tan_half,
                                       std::span<const double> values, double t);

/// u = (lambda - Laplace_Dir)^{-1} f via the Laplace transform of the
/// semigroup, tilted into complex time for lambda off the positive axis:
/// with delta = -arg(lambda)/2,
///   u = e^{i delta} int_0^inf e^{-lambda e^{i delta} t} T(t e^{i delta}) f dt.
/// Throws for lambda on (-inf, 0].
GridFunction apply_resolvent(const GridFunction& f, double lambda,
                             std::size_t laplace_nodes = 256);
ComplexGridFunction apply_resolvent(const GridFunction& f, Complex lambda,
                                    std::size_t laplace_nodes = 256);
ComplexGridFunction apply_resolvent(const ComplexGridFunction& f, Complex lambda,
                                    std::size_t laplace_nodes = 256);

/// Boundary of the sector of angle sigma, truncated to [r_min, r_max],
/// log-spaced Gauss panels per ray. Nodes come conjugate-symmetric.
struct SectorContour {
    double sigma;
    double r_min;
    double r_max;
    std::vector<double> radii;
    std::vector<double> radial_weights;

    static SectorContour make(double sigma, double r_max = 1e4, std::size_t n_nodes = 256,
                              double r_min = 1e-6);
};

/// Symbol on the sector; decay_epsilon > 0 certifies |phi(z)| <~
/// |z|^eps / (1 + |z|^{2 eps}).
struct HolomorphicSymbol {
    std::function<Complex(Complex)> evaluator;
    double sup_norm_hint = 1.0;
    double decay_epsilon = 1.0;
};

HolomorphicSymbol imaginary_power_symbol(double tau, double eps = 0.1);

class ContourError : public std::runtime_error {
public:
    ContourError(const std::string& what, double suggested_r_max)
        : std::runtime_error(what), suggested_r_max(suggested_r_max) {}
    double suggested_r_max;
};

/// Riesz-Dunford integral phi(A) f for A = -Laplace_Dir,
///   phi(A) = (1/2 pi i) int_{boundary, downward} phi(lambda) R(lambda, A) dlambda.
/// Semigroup evaluations along the two tilted rays are shared across all
/// contour nodes, so repeated applications with different symbols are cheap
/// through HinfApplier.
class HinfApplier {
public:
    HinfApplier(const GridFunction& f, const SectorContour& contour, double tol = 1e-3);

    ComplexGridFunction apply(const HolomorphicSymbol& phi) const;

private:
    GridPtr grid_;
    GridFunction f_;
    SectorContour contour_;
    double tol_;
    double t_lo_;
    std::vector<double> t_nodes_, t_weights_;
    // ray index 0: lambda = r e^{+i sigma}; 1: conjugate ray
    std::array<Complex, 2> tilt_;      // e^{i delta_s}
    std::array<Complex, 2> mu_dir_;    // e^{i psi_s / 2}, decay direction factor
    std::array<Complex, 2> orient_;    // dlambda orientation factor
    std::array<std::vector<Complex>, 2> ray_values_; // [ray][k * n + i]
};

ComplexGridFunction apply_hinf_symbol(const GridFunction& f, const HolomorphicSymbol& phi,
                                      const SectorContour& contour);

/// Odd extension sampled at mirrored nodes: (x, f) and (-x, -f).
struct OddExtension {
    std::vector<double> nodes;
    std::vector<double> values;
};
OddExtension odd_extension(const GridFunction& f);

/// Whole-line reference solve of (lambda - d^2/dx^2) u = odd extension of f,
/// by Fourier inversion on a periodic superset of [-2 X_max, 2 X_max],
/// restricted back to the grid. f must be supported well inside the grid.
GridFunction odd_extension_solve(const GridFunction& f, double lambda);

using LinearOp = std::function<std::vector<double>(std::span<const double>)>;

struct OperatorNormEstimate {
    double value = 0.0;
    std::string witness;
};

/// Lower bound on the L^p(w) -> L^p(w) induced norm of a linear operator on
/// grid functions: fixed-point power ascent on the weighted unit sphere from
/// `probes` seeded random starts plus boundary-concentrated starts.
OperatorNormEstimate operator_norm_estimate(const LinearOp& op, const GradedGrid& grid,
                                            const LebesgueExponent& p, const PowerWeight& w,
                                            std::size_t probes,
                                            std::uint64_t seed = 0x9E3779B97F4A7C15ull);

/// Dense matrix of a linear operator in the nodal basis (column j = op(e_j)).
std::vector<double> materialize_matrix(const LinearOp& op, std::size_t n);

} // namespace heatcalc
