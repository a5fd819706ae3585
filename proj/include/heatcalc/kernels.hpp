#pragma once

#include "heatcalc/special.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace heatcalc {

/// Point z = t e^{i delta} in the open right half plane.
struct ComplexTime {
    double t;
    double delta;

    ComplexTime(double modulus, double argument = 0.0) : t(modulus), delta(argument) {
        if (!(t > 0.0)) throw std::invalid_argument("ComplexTime: modulus must be positive");
        if (!(std::abs(delta) < M_PI / 2.0))
            throw std::invalid_argument("ComplexTime: |argument| must be < pi/2");
    }

    Complex value() const { return std::polar(t, delta); }
    bool is_real() const { return delta == 0.0; }
};

struct KernelEvalConfig {
    double stable_threshold = 30.0; ///< |x1 y1 / t| below this uses the factored path
    int d = 1;

    KernelEvalConfig(double thr = 30.0, int dim = 1) : stable_threshold(thr), d(dim) {
        if (!(thr > 0.0)) throw std::invalid_argument("KernelEvalConfig: threshold > 0");
        if (dim != 1 && dim != 2) throw std::invalid_argument("KernelEvalConfig: d in {1,2}");
    }
};

/// Whole-space Gaussian G_z(x) = (4 pi z)^{-d/2} e^{-|x|^2/(4z)}, principal
/// branch, evaluated in log space.
Complex gauss_kernel(const ComplexTime& z, const double* x, int d);
inline Complex gauss_kernel(const ComplexTime& z, double x) { return gauss_kernel(z, &x, 1); }

/// Reflected half-space Dirichlet kernel
///   H_z(x, y) = G_z(x1-y1, xt-yt) - G_z(x1+y1, xt-yt),
/// evaluated through the cancellation-free factorization
///   G_z(x1-y1, xt-yt) * (1 - e^{-x1 y1 e^{-i delta}/t}).
Complex dirichlet_kernel(const ComplexTime& z, double x1, double y1,
                         double x_tangential_offset = 0.0,
                         const KernelEvalConfig& cfg = {});

inline double dirichlet_kernel_real(double t, double x1, double y1) {
    return dirichlet_kernel(ComplexTime(t), x1, y1).real();
}

/// Sine eigenbasis of the Dirichlet Laplacian on (0,1).
struct IntervalSpectrum {
    std::size_t n_modes;

    explicit IntervalSpectrum(std::size_t modes) : n_modes(modes) {
        if (modes == 0) throw std::invalid_argument("IntervalSpectrum: need modes >= 1");
    }

    double eigenvalue(std::size_t k) const; // k = 1..n_modes
    double eigenfunction(std::size_t k, double x) const;

    /// Modes needed so the truncation tail at time t is below tol.
    static std::size_t modes_for(double t, double tol);
};

struct IntervalKernelValue {
    double value;
    double truncation_bound;
};

/// Heat kernel on (0,1) by eigenexpansion:
///   K(t,x,y) = sum_k 2 sin(k pi x) sin(k pi y) e^{-k^2 pi^2 t}.
/// Throws when n_modes is too small for a 1e-14 tail at this t.
IntervalKernelValue interval_kernel(double t, double x, double y,
                                    const IntervalSpectrum& spectrum);

/// mu(B(x, r)) for d mu = y1 dy on the half plane (d = 2), closed form.
double mu_ball_measure(double x1, double r);

struct DominationPoint {
    double x1, x2, y1, y2;
};

struct DominationResult {
    double sup_ratio = 0.0;
    double certified_bound = 0.0;
    std::size_t violations = 0;
    double theta = 0.0;
};

/// Checks H_t(x,y) mu(B(x, sqrt t)) / (y1 e^{-c |x-y|^2 / t}) over sample
/// pairs in the half plane, with c = (1-theta)/4 so the Gaussian factor of
/// the kernel absorbs the e^{+theta |x-y|^2/(4t)} slack used in the
/// two-branch case analysis. certified_bound is the constant that analysis
/// yields; violations counts samples exceeding it.
DominationResult gaussian_domination_check(double t,
                                           const std::vector<DominationPoint>& pairs,
                                           double theta = 0.5);

/// Explicit bound constant of the case analysis behind
/// gaussian_domination_check, for theta in (0,1).
double gaussian_domination_certified_bound(double theta);

} // namespace heatcalc
