#include "heatcalc/special.hpp"

#include <cmath>

namespace heatcalc {

namespace {

// Maclaurin series; fine up to |u| ~ 2.7 (loses ~2 digits to cancellation
// at the top of that range).
Complex erf_series(Complex u) {
    const Complex u2 = u * u;
    Complex term = u;
    Complex sum = u;
    for (int k = 1; k < 80; ++k) {
        term *= -u2 / double(k);
        const Complex add = term / double(2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(M_PI));
}

// Laplace continued fraction, modified Lentz. Requires Re(u) > 0 and |u|
// not too small; used for |u| > 2.7.
Complex erfc_cf(Complex u) {
    const Complex u2 = u * u;
    constexpr double tiny = 1e-300;
    Complex f(tiny, 0.0), c(tiny, 0.0), d(0.0, 0.0);
    // erfc(u) = u e^{-u^2}/sqrt(pi) * 1/(u^2 + 1/2/(1 + 1/(u^2 + 3/2/(1 + ...))))
    for (int k = 0; k < 200; ++k) {
        Complex a, b;
        if (k == 0) {
            a = Complex(1.0, 0.0);
            b = u2;
        } else if (k % 2 == 1) {
            a = Complex(double(k) / 2.0, 0.0);
            b = Complex(1.0, 0.0);
        } else {
            a = Complex(double(k) / 2.0, 0.0);
            b = u2;
        }
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return u * std::exp(-u2) / std::sqrt(M_PI) * f;
}

} // namespace

Complex erfc_complex(Complex u) {
    if (u.imag() == 0.0) return Complex(std::erfc(u.real()), 0.0);
    if (u.real() < 0.0) return 2.0 - erfc_complex(-u);
    if (std::abs(u) <= 2.7) return 1.0 - erf_series(u);
    return erfc_cf(u);
}

Complex erf_complex(Complex u) {
    if (u.imag() == 0.0) return Complex(std::erf(u.real()), 0.0);
    if (std::abs(u) <= 2.7) return erf_series(u);
    return 1.0 - erfc_complex(u);
}

Complex expm1_complex(Complex u) {
    if (u.imag() == 0.0) return Complex(std::expm1(u.real()), 0.0);
    if (std::abs(u) > 0.5) return std::exp(u) - 1.0;
    Complex term(1.0, 0.0);
    Complex sum(0.0, 0.0);
    for (int k = 1; k < 40; ++k) {
        term *= u / double(k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace heatcalc
