#include "heatcalc/norms.hpp"

#include "heatcalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace heatcalc {

namespace {

template <typename T>
double lp_norm_impl(const BasicGridFunction<T>& f, double p, const PowerWeight& w) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
    const auto& grid = *f.grid();
    if (w.geometry != grid.geometry())
        throw std::invalid_argument("lp_norm: weight geometry does not match grid");
    Accumulator acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (std::isnan(a)) throw std::invalid_argument("lp_norm: NaN in values");
        acc.add(std::pow(a, p) * w(grid.node(i)) * grid.quad_weight(i));
    }
    return std::pow(acc.value(), 1.0 / p);
}

// Fornberg finite-difference weights for derivative m on nodes xs at x0.
std::vector<double> fornberg_weights(double x0, std::span<const double> xs, int m) {
    const int n = int(xs.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (double(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - double(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = c[i][m];
    return out;
}

} // namespace

double lp_norm(const GridFunction& f, double p, const PowerWeight& w) {
    return lp_norm_impl(f, p, w);
}

double lp_norm(const ComplexGridFunction& f, double p, const PowerWeight& w) {
    return lp_norm_impl(f, p, w);
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

GridFunction fd_derivative(const GridFunction& f, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("fd_derivative: unsupported order");
    const auto& grid = *f.grid();
    const std::size_t n = grid.size();
    const std::size_t width = std::size_t(k) + 2;
    if (n < width) throw std::invalid_argument("fd_derivative: grid too coarse");
    std::vector<double> out(n);
    const auto nodes = grid.nodes();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
        lo = std::min(lo, n - width);
        std::span<const double> xs(nodes.data() + lo, width);
        const auto wts = fornberg_weights(nodes[i], xs, k);
        // weights sum to zero for k >= 1; applying them to differences
        // keeps constants exactly in the kernel on strongly graded meshes
        double s = 0.0;
        for (std::size_t j = 0; j < width; ++j) s += wts[j] * (f[lo + j] - f[i]);
        out[i] = s;
    }
    return GridFunction(f.grid(), std::move(out));
}

double sobolev_seminorm(const GridFunction& f, int k, const LebesgueExponent& p,
                        const PowerWeight& w) {
    if (k == 0) return lp_norm(f, p.p, w);
    return lp_norm(fd_derivative(f, k), p.p, w);
}

double sobolev_norm(const GridFunction& f, int k, const LebesgueExponent& p,
                    const PowerWeight& w) {
    Accumulator acc;
    for (int j = 0; j <= k; ++j) {
        acc.add(std::pow(sobolev_seminorm(f, j, p, w), p.p));
    }
    return std::pow(acc.value(), 1.0 / p.p);
}

BesovSeminormResult besov_time_seminorm(const GridFunction& g, double delta,
                                        const LebesgueExponent& p) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("besov_time_seminorm: delta must be in (0,1)");
    const auto& grid = *g.grid();
    const std::size_t n = grid.size();
    double band = grid.x_max();
    for (std::size_t i = 1; i < n; ++i)
        band = std::min(band, grid.node(i) - grid.node(i - 1));
    Accumulator acc;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dt = grid.node(j) - grid.node(i);
            if (dt < band) continue;
            const double diff = std::abs(g[j] - g[i]);
            acc.add(2.0 * std::pow(diff, p.p) * std::pow(dt, -1.0 - delta * p.p) *
                    grid.quad_weight(i) * grid.quad_weight(j));
        }
    }
    return {std::pow(acc.value(), 1.0 / p.p), band};
}

ApEstimate ap_constant_estimate(double gamma, const LebesgueExponent& p, int levels) {
    if (levels < 4) throw std::invalid_argument("ap_constant_estimate: levels >= 4");
    const double dual_exp = -gamma / (p.p - 1.0);

    // A_p product on [a, b] with the two means computed by graded midpoint
    // quadrature at resolution n.
    auto product = [&](double a, double b, std::size_t n) {
        Accumulator m1, m2;
        if (a == 0.0) {
            const auto grid = GradedGrid::half_line(n, b, 3.0);
            for (std::size_t i = 0; i < n; ++i) {
                m1.add(std::pow(grid.node(i), gamma) * grid.quad_weight(i));
                m2.add(std::pow(grid.node(i), dual_exp) * grid.quad_weight(i));
            }
        } else {
            const double h = (b - a) / double(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = a + (double(i) + 0.5) * h;
                m1.add(std::pow(x, gamma) * h);
                m2.add(std::pow(x, dual_exp) * h);
            }
        }
        const double len = b - a;
        return (m1.value() / len) * std::pow(m2.value() / len, p.p - 1.0);
    };

    ApEstimate est;
    for (int j = 0; j <= levels; ++j) {
        const double b = std::pow(2.0, -j);
        // quadrature-refinement sequence on [0, b]; the interval product is
        // scale-invariant for power weights, so divergence shows up as
        // refinement growth rather than j-dependence
        double vals[4];
        std::size_t n = 64;
        for (int l = 0; l < 4; ++l, n *= 4) vals[l] = product(0.0, b, n);
        double growth[3];
        bool monotone = true;
        for (int l = 0; l < 3; ++l) {
            growth[l] = vals[l + 1] / vals[l] - 1.0;
            monotone = monotone && growth[l] > 0.0;
        }
        // power divergence keeps the growth ratio; log divergence shrinks it
        // only harmonically; a convergent tail collapses geometrically
        const bool diverged = monotone && growth[2] >= 0.03 &&
                              growth[2] >= 0.55 * growth[0];
        if (diverged) {
            est.divergent = true;
            return est;
        }
        est.value = std::max(est.value, vals[3]);
    }
    for (int k = 0; k <= levels; ++k) {
        est.value = std::max(est.value, product(double(k), double(k + 1), 2048));
    }
    return est;
}

WeightEquivalence graph_domain_weight_equivalence(const GridFunction& h, double gamma,
                                                  std::size_t samples) {
    const auto& hg = *h.grid();
    const std::size_t m = hg.size();
    if (m < 8) throw std::invalid_argument("graph_domain_weight_equivalence: need >= 8 samples of h");

    // refined boundary polyline by linear interpolation of h
    const std::size_t refine = 16;
    std::vector<double> bs, bh;
    bs.reserve(m * refine);
    bh.reserve(m * refine);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double s0 = hg.node(i), s1 = hg.node(i + 1);
        for (std::size_t r = 0; r < refine; ++r) {
            const double a = double(r) / double(refine);
            bs.push_back(s0 + a * (s1 - s0));
            bh.push_back(h[i] + a * (h[i + 1] - h[i]));
        }
    }
    bs.push_back(hg.node(m - 1));
    bh.push_back(h[m - 1]);

    auto dist_to_boundary = [&](double s, double x1) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
            // distance to the segment (bs[i], bh[i]) - (bs[i+1], bh[i+1])
            const double es = bs[i + 1] - bs[i], eh = bh[i + 1] - bh[i];
            const double ps = s - bs[i], ph = x1 - bh[i];
            const double len2 = es * es + eh * eh;
            double a = len2 > 0.0 ? (ps * es + ph * eh) / len2 : 0.0;
            a = std::clamp(a, 0.0, 1.0);
            const double ds = ps - a * es, dh = ph - a * eh;
            best = std::min(best, ds * ds + dh * dh);
        }
        return std::sqrt(best);
    };

    // interior lattice above the graph; heights chosen within one abscissa
    // span so the nearest boundary point stays inside the sampled patch
    const double s_lo = hg.node(0), s_hi = hg.node(m - 1);
    const double span = s_hi - s_lo;
    const std::size_t ns = std::max<std::size_t>(4, std::size_t(std::sqrt(double(samples))));
    const std::size_t nh = std::max<std::size_t>(4, samples / ns);
    WeightEquivalence out;
    out.c_low = std::numeric_limits<double>::infinity();
    out.c_high = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        // keep a margin so truncating the boundary sample set does not bias dist
        const double s = s_lo + span * (0.25 + 0.5 * double(i) / double(ns - 1));
        // piecewise-linear h at s
        double hs = 0.0;
        {
            const auto nodes = hg.nodes();
            auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
            std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(1, it - nodes.begin()), m - 1);
            const double a = (s - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
            hs = h[j - 1] + a * (h[j] - h[j - 1]);
        }
        for (std::size_t j = 0; j < nh; ++j) {
            const double offset = 0.3 * span * double(j + 1) / double(nh);
            const double x1 = hs + offset;
            const double d = dist_to_boundary(s, x1);
            if (d == 0.0 || offset == 0.0) {
                ++out.boundary_hits;
                continue;
            }
            const double ratio = std::pow(offset, gamma) / std::pow(d, gamma);
            out.c_low = std::min(out.c_low, ratio);
            out.c_high = std::max(out.c_high, ratio);
        }
    }
    return out;
}

} // namespace heatcalc
