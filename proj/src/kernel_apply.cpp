#include "heatcalc/kernel_apply.hpp"

#include "heatcalc/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace heatcalc {

namespace {

// Solve the 4x4 Vandermonde-type system for cubic coefficients, partial
// pivoting. Rows: sum_m b_m s_i^m = f_i with s_i the scaled node offsets.
std::array<Complex, 4> solve4(const std::array<double, 4>& s,
                              const std::array<Complex, 4>& f) {
    double a[4][4];
    Complex rhs[4];
    for (int i = 0; i < 4; ++i) {
        double pw = 1.0;
        for (int m = 0; m < 4; ++m) {
            a[i][m] = pw;
            pw *= s[i];
        }
        rhs[i] = f[i];
    }
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const int pr = perm[col];
        for (int r = col + 1; r < 4; ++r) {
            const int rr = perm[r];
            const double m = a[rr][col] / a[pr][col];
            for (int c = col; c < 4; ++c) a[rr][c] -= m * a[pr][c];
            rhs[rr] -= m * rhs[pr];
        }
    }
    std::array<Complex, 4> b;
    for (int col = 3; col >= 0; --col) {
        const int pr = perm[col];
        Complex v = rhs[pr];
        for (int c = col + 1; c < 4; ++c) v -= a[pr][c] * b[c];
        b[col] = v / a[pr][col];
    }
    return b;
}

struct Moments {
    Complex m[4];
};

// M_k = (4 pi z)^{-1/2} int_alpha^beta u^k e^{-u^2/(4z)} du, k = 0..3.
Moments gauss_moments(double alpha, double beta, Complex z, Complex sigma, Complex pre) {
    const Complex ah = alpha / sigma;
    const Complex bh = beta / sigma;
    Moments out;
    // cancellation-aware erf difference
    if (ah.real() > 2.0 && bh.real() > 2.0) {
        out.m[0] = 0.5 * (erfc_complex(ah) - erfc_complex(bh));
    } else if (ah.real() < -2.0 && bh.real() < -2.0) {
        out.m[0] = 0.5 * (erfc_complex(-bh) - erfc_complex(-ah));
    } else {
        out.m[0] = 0.5 * (erf_complex(bh) - erf_complex(ah));
    }
    const Complex ea = std::exp(-ah * ah);
    const Complex eb = std::exp(-bh * bh);
    out.m[1] = -pre * (eb - ea);
    out.m[2] = -pre * (beta * eb - alpha * ea) + 2.0 * z * out.m[0];
    out.m[3] = -pre * ((beta * beta + 4.0 * z) * eb - (alpha * alpha + 4.0 * z) * ea);
    return out;
}

constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

// 4-point Gauss-Legendre on [-1/2, 1/2]
constexpr double kGl4Nodes[4] = {-0.4305681557970263, -0.16999052179242816,
                                 0.16999052179242816, 0.4305681557970263};
constexpr double kGl4Weights[4] = {0.17392742256872692, 0.32607257743127305,
                                   0.32607257743127305, 0.17392742256872692};

// Direct Gauss quadrature of the cell integral; used when the cell is small
// against the Gaussian width, where the antiderivative route would cancel
// catastrophically. Error ~ (w/|sigma|)^8.
Complex cell_integral_direct(std::span<const Complex> b, double w, double cell_center,
                             double x, double sign_y, Complex inv4z, Complex g_pre) {
    Complex total(0.0, 0.0);
    for (int q = 0; q < 4; ++q) {
        const double s = kGl4Nodes[q];
        const double y = cell_center + w * s;
        const Complex poly = ((b[3] * s + b[2]) * s + b[1]) * s + b[0];
        const double u = x - sign_y * y;
        total += kGl4Weights[q] * poly * std::exp(-(u * u) * inv4z);
    }
    return total * w * g_pre;
}

// int_cell ((y - c)/w)^m G_z(x -+ y) dy with u = y -+ x, y - c = u + off.
Complex cell_integral(std::span<const Complex> b, double w, double off,
                      const Moments& mom) {
    Complex total(0.0, 0.0);
    double winv_m = 1.0;
    for (int m = 0; m < 4; ++m) {
        if (b[m] != Complex(0.0, 0.0)) {
            Complex inner(0.0, 0.0);
            double off_pow = 1.0;
            for (int k = m; k >= 0; --k) {
                inner += kBinom[m][k] * off_pow * mom.m[k];
                off_pow *= off;
            }
            total += b[m] * winv_m * inner;
        }
        winv_m /= w;
    }
    return total;
}

} // namespace

template <typename T>
CellPoly::CellPoly(const GradedGrid& grid, std::span<const T> values)
    : grid_(&grid), complex_(!std::is_same_v<T, double>) {
    const std::size_t n = grid.size();
    if (values.size() != n) throw std::invalid_argument("CellPoly: size mismatch");
    if (n < 4) throw std::invalid_argument("CellPoly: need at least 4 nodes");
    coeffs_.resize(4 * n);
    const auto nodes = grid.nodes();
    const auto edges = grid.cell_edges();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t lo = j >= 1 ? j - 1 : 0;
        lo = std::min(lo, n - 4);
        const double c = 0.5 * (edges[j] + edges[j + 1]);
        const double w = edges[j + 1] - edges[j];
        std::array<double, 4> s;
        std::array<Complex, 4> f;
        for (int i = 0; i < 4; ++i) {
            s[i] = (nodes[lo + i] - c) / w;
            f[i] = Complex(values[lo + i]);
        }
        const auto b = solve4(s, f);
        for (int m = 0; m < 4; ++m) coeffs_[4 * j + m] = b[m];
    }
}

template CellPoly::CellPoly(const GradedGrid&, std::span<const double>);
template CellPoly::CellPoly(const GradedGrid&, std::span<const Complex>);

std::vector<Complex> heat_apply(const CellPoly& poly, Complex z,
                                std::span<const double> eval_points) {
    if (!(z.real() > 0.0)) throw std::invalid_argument("heat_apply: Re z must be positive");
    const auto& grid = poly.grid();
    const auto edges = grid.cell_edges();
    const std::size_t n = grid.size();
    const Complex sigma = 2.0 * std::sqrt(z);
    const Complex pre = std::sqrt(z / M_PI);
    const Complex inv4z = 1.0 / (4.0 * z);
    const Complex g_pre = 0.5 / std::sqrt(M_PI * z);
    const double small_cell = 0.25 * std::abs(sigma);
    const double rate = inv4z.real();
    const double reach = std::sqrt(46.0 / rate);

    std::vector<Complex> out(eval_points.size());
    for (std::size_t e = 0; e < eval_points.size(); ++e) {
        const double x = eval_points[e];
        if (x == 0.0) {
            out[e] = Complex(0.0, 0.0); // kernel antisymmetry
            continue;
        }
        ComplexAccumulator acc;
        // direct part: cells meeting [x - reach, x + reach]
        const auto lo_it = std::upper_bound(edges.begin(), edges.end(), x - reach);
        std::size_t j0 = lo_it == edges.begin() ? 0 : std::size_t(lo_it - edges.begin()) - 1;
        for (std::size_t j = j0; j < n; ++j) {
            if (edges[j] > x + reach) break;
            const double c = 0.5 * (edges[j] + edges[j + 1]);
            const double w = edges[j + 1] - edges[j];
            if (w < small_cell) {
                acc.add(cell_integral_direct(poly.coeffs(j), w, c, x, 1.0, inv4z, g_pre));
            } else {
                const auto mom =
                    gauss_moments(edges[j] - x, edges[j + 1] - x, z, sigma, pre);
                acc.add(cell_integral(poly.coeffs(j), w, x - c, mom));
            }
        }
        // reflected part: cells with e_j + x <= reach
        for (std::size_t j = 0; j < n; ++j) {
            if (edges[j] + x > reach) break;
            const double c = 0.5 * (edges[j] + edges[j + 1]);
            const double w = edges[j + 1] - edges[j];
            if (w < small_cell) {
                acc.add(-cell_integral_direct(poly.coeffs(j), w, c, x, -1.0, inv4z, g_pre));
            } else {
                const auto mom =
                    gauss_moments(edges[j] + x, edges[j + 1] + x, z, sigma, pre);
                acc.add(-cell_integral(poly.coeffs(j), w, -(x + c), mom));
            }
        }
        out[e] = acc.value();
    }
    return out;
}

std::vector<double> heat_apply_real(const CellPoly& poly, double t,
                                    std::span<const double> eval_points) {
    const auto zvals = heat_apply(poly, Complex(t, 0.0), eval_points);
    std::vector<double> out(zvals.size());
    for (std::size_t i = 0; i < zvals.size(); ++i) out[i] = zvals[i].real();
    return out;
}

} // namespace heatcalc
