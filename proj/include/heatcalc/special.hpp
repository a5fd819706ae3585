#pragma once

#include <complex>

namespace heatcalc {

using Complex = std::complex<double>;

/// erfc for complex argument. Accurate for |arg u| <= pi/4 plus a margin,
/// which covers every argument produced by the heat-kernel moment formulas
/// (u = (y +- x)/(2 sqrt(z)) with z in the open right half plane).
Complex erfc_complex(Complex u);

Complex erf_complex(Complex u);

/// e^u - 1 with full relative accuracy for small |u|.
Complex expm1_complex(Complex u);

/// 1 - e^{-w}; exactly zero at w = 0.
inline Complex one_minus_exp_neg(Complex w) { return -expm1_complex(-w); }

} // namespace heatcalc
