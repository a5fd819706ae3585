#pragma once

#include "heatcalc/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace heatcalc {

/// Power of the boundary distance: x^gamma on the half line,
/// min(x, 1-x)^gamma on (0,1).
struct PowerWeight {
    double gamma = 0.0;
    Geometry geometry = Geometry::half_line;

    PowerWeight(double g, Geometry geo = Geometry::half_line) : gamma(g), geometry(geo) {
        if (!std::isfinite(g)) throw std::invalid_argument("PowerWeight: gamma must be finite");
    }

    double operator()(double x) const {
        const double d = geometry == Geometry::half_line ? x : std::min(x, 1.0 - x);
        return std::pow(d, gamma);
    }

    /// Muckenhoupt range gamma in (-1, p-1).
    bool is_Ap(double p) const { return gamma > -1.0 && gamma < p - 1.0; }

    /// Extended range gamma in (-1, 2p-1) \ {p-1}.
    bool is_extended(double p) const {
        return gamma > -1.0 && gamma < 2.0 * p - 1.0 && gamma != p - 1.0;
    }
};

/// Integrability exponent, p in (1, inf). p = 1 is admitted only by the few
/// operations that take a raw double instead.
struct LebesgueExponent {
    double p;

    explicit LebesgueExponent(double value) : p(value) {
        if (!(value > 1.0) || !std::isfinite(value))
            throw std::invalid_argument("LebesgueExponent: need p in (1, inf)");
    }

    double dual() const { return p / (p - 1.0); }
};

} // namespace heatcalc
