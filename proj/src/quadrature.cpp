#include "heatcalc/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace heatcalc {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Gauss-Legendre nodes/weights on [-1, 1]
const std::array<std::array<double, 5>, 4> kGaussNodes = {{
    {-0.5773502691896257, 0.5773502691896257, 0, 0, 0},
    {-0.7745966692414834, 0.0, 0.7745966692414834, 0, 0},
    {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526, 0},
    {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640},
}};
const std::array<std::array<double, 5>, 4> kGaussWeights = {{
    {1.0, 1.0, 0, 0, 0},
    {0.5555555555555556, 0.8888888888888888, 0.5555555555555556, 0, 0},
    {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538, 0},
    {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
     0.2369268850561891},
}};

} // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

PanelRule gauss_panels(double a, double b, std::size_t panels, int points) {
    if (points < 2 || points > 5) throw std::invalid_argument("gauss_panels: points in [2,5]");
    if (panels == 0) throw std::invalid_argument("gauss_panels: need panels >= 1");
    const auto& xs = kGaussNodes[points - 2];
    const auto& ws = kGaussWeights[points - 2];
    PanelRule rule;
    rule.nodes.reserve(panels * points);
    rule.weights.reserve(panels * points);
    const double h = (b - a) / double(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + double(p) * h;
        const double mid = lo + 0.5 * h;
        for (int j = 0; j < points; ++j) {
            rule.nodes.push_back(mid + 0.5 * h * xs[j]);
            rule.weights.push_back(0.5 * h * ws[j]);
        }
    }
    return rule;
}

PanelRule gauss_log_panels(double a, double b, std::size_t panels_per_decade, int points) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("gauss_log_panels: need 0 < a < b");
    const double ua = std::log(a), ub = std::log(b);
    const double decades = (ub - ua) / std::log(10.0);
    const std::size_t panels =
        std::max<std::size_t>(1, std::size_t(std::ceil(decades * double(panels_per_decade))));
    PanelRule in_u = gauss_panels(ua, ub, panels, points);
    PanelRule rule;
    rule.nodes.resize(in_u.nodes.size());
    rule.weights.resize(in_u.nodes.size());
    for (std::size_t i = 0; i < in_u.nodes.size(); ++i) {
        const double t = std::exp(in_u.nodes[i]);
        rule.nodes[i] = t;
        rule.weights[i] = in_u.weights[i] * t;
    }
    return rule;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          int iters) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace heatcalc
