#include "heatcalc/kernels.hpp"

#include "heatcalc/quadrature.hpp"
#include "heatcalc/summation.hpp"

#include <algorithm>
#include <cmath>

namespace heatcalc {

Complex gauss_kernel(const ComplexTime& z, const double* x, int d) {
    const Complex zc = z.value();
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
    const Complex exponent = -0.5 * double(d) * std::log(4.0 * M_PI * zc) - r2 / (4.0 * zc);
    return std::exp(exponent);
}

Complex dirichlet_kernel(const ComplexTime& z, double x1, double y1,
                         double x_tangential_offset, const KernelEvalConfig& cfg) {
    if (x1 < 0.0 || y1 < 0.0)
        throw std::invalid_argument("dirichlet_kernel: x1 and y1 must be nonnegative");
    if (x1 == 0.0 || y1 == 0.0) return {0.0, 0.0};

    const double coords[2] = {x1 - y1, x_tangential_offset};
    const int d = cfg.d;
    const Complex g_near = gauss_kernel(z, coords, d);
    const Complex w = x1 * y1 * std::polar(1.0, -z.delta) / z.t;
    if (std::abs(w) < cfg.stable_threshold) {
        return g_near * one_minus_exp_neg(w);
    }
    const double coords_far[2] = {x1 + y1, x_tangential_offset};
    return g_near - gauss_kernel(z, coords_far, d);
}

double IntervalSpectrum::eigenvalue(std::size_t k) const {
    if (k == 0 || k > n_modes) throw std::out_of_range("IntervalSpectrum: mode index");
    const double kpi = double(k) * M_PI;
    return kpi * kpi;
}

double IntervalSpectrum::eigenfunction(std::size_t k, double x) const {
    if (k == 0 || k > n_modes) throw std::out_of_range("IntervalSpectrum: mode index");
    return std::sqrt(2.0) * std::sin(double(k) * M_PI * x);
}

std::size_t IntervalSpectrum::modes_for(double t, double tol) {
    if (!(t > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("IntervalSpectrum::modes_for: t, tol > 0");
    const double need = std::sqrt(std::max(1.0, -std::log(tol) / t)) / M_PI;
    return std::size_t(std::ceil(need)) + 1;
}

IntervalKernelValue interval_kernel(double t, double x, double y,
                                    const IntervalSpectrum& spectrum) {
    if (!(t > 0.0)) throw std::invalid_argument("interval_kernel: t must be positive");
    const std::size_t n = spectrum.n_modes;
    const double lam_n = double(n) * double(n) * M_PI * M_PI;
    if (std::exp(-lam_n * t) >= 1e-14) {
        throw std::runtime_error(
            "interval_kernel: increase n_modes (need >= " +
            std::to_string(IntervalSpectrum::modes_for(t, 1e-14)) + " at this t)");
    }
    Accumulator acc;
    for (std::size_t k = 1; k <= n; ++k) {
        const double kpi = double(k) * M_PI;
        acc.add(2.0 * std::sin(kpi * x) * std::sin(kpi * y) * std::exp(-kpi * kpi * t));
    }
    const double lam_next = double(n + 1) * double(n + 1) * M_PI * M_PI;
    const double gap = (2.0 * double(n) + 3.0) * M_PI * M_PI;
    const double tail = 2.0 * std::exp(-lam_next * t) / (1.0 - std::exp(-gap * t));
    return {acc.value(), tail};
}

double mu_ball_measure(double x1, double r) {
    if (x1 < 0.0 || !(r > 0.0)) throw std::invalid_argument("mu_ball_measure: x1 >= 0, r > 0");
    if (x1 >= r) return M_PI * x1 * r * r;
    const double s = std::sqrt(r * r - x1 * x1);
    return x1 * r * r * (M_PI / 2.0 + std::asin(x1 / r)) + x1 * x1 * s +
           (2.0 / 3.0) * s * s * s;
}

namespace {

// Upper envelope of the domination ratio at the t = 1/4 normalization:
// the tangential Gaussian factor is dropped, which only increases it.
double ratio_envelope(double x1, double y1, double theta) {
    const double diff = x1 - y1;
    const double factor = y1 > 0.0 ? -std::expm1(-4.0 * x1 * y1) / y1 : 4.0 * x1;
    return std::exp(-theta * diff * diff) * factor * mu_ball_measure(x1, 0.5) / M_PI;
}

} // namespace

double gaussian_domination_certified_bound(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("gaussian_domination_certified_bound: theta in (0,1)");
    // 2-D supremum by log-lattice scan plus alternating golden refinement
    double best = 0.0, bx = 1.0, by = 1.0;
    for (int i = -40; i <= 40; ++i) {
        const double x1 = std::pow(10.0, double(i) / 10.0);
        for (int j = -40; j <= 40; ++j) {
            const double y1 = std::pow(10.0, double(j) / 10.0);
            const double v = ratio_envelope(x1, y1, theta);
            if (v > best) {
                best = v;
                bx = x1;
                by = y1;
            }
        }
    }
    for (int sweep = 0; sweep < 4; ++sweep) {
        bx = golden_section_max([&](double x) { return ratio_envelope(x, by, theta); },
                                bx / 4.0, bx * 4.0);
        by = golden_section_max([&](double y) { return ratio_envelope(bx, y, theta); },
                                by / 4.0, by * 4.0);
    }
    return ratio_envelope(bx, by, theta) * 1.001;
}

DominationResult gaussian_domination_check(double t,
                                           const std::vector<DominationPoint>& pairs,
                                           double theta) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_domination_check: t > 0");
    const double c = (1.0 - theta) / 4.0;
    DominationResult res;
    res.theta = theta;
    res.certified_bound = gaussian_domination_certified_bound(theta);
    const ComplexTime zt(t);
    const KernelEvalConfig cfg(30.0, 2);
    for (const auto& pt : pairs) {
        if (pt.y1 <= 0.0 || pt.x1 <= 0.0) continue;
        const double h = dirichlet_kernel(zt, pt.x1, pt.y1, pt.x2 - pt.y2, cfg).real();
        const double d1 = pt.x1 - pt.y1, d2 = pt.x2 - pt.y2;
        const double dist2 = d1 * d1 + d2 * d2;
        const double ratio = h * mu_ball_measure(pt.x1, std::sqrt(t)) /
                             (pt.y1 * std::exp(-c * dist2 / t));
        res.sup_ratio = std::max(res.sup_ratio, ratio);
        if (ratio > res.certified_bound) ++res.violations;
    }
    return res;
}

} // namespace heatcalc
