#include "heatcalc/operators.hpp"

#include "heatcalc/norms.hpp"
#include "heatcalc/quadrature.hpp"
#include "heatcalc/summation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

namespace heatcalc {

namespace {

std::vector<double> real_parts(const std::vector<Complex>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
}

struct LaplaceRule {
    std::vector<double> t_nodes;
    std::vector<double> t_weights;
    double t_lo;
};

LaplaceRule laplace_rule(double decay_rate, std::size_t laplace_nodes) {
    LaplaceRule rule;
    rule.t_lo = std::min(1e-8, 1e-3 / decay_rate);
    const double t_hi = 46.0 / decay_rate;
    const double decades = std::log10(t_hi / rule.t_lo);
    const std::size_t per_decade = std::max<std::size_t>(
        2, std::size_t(std::ceil(double(laplace_nodes) / (4.0 * decades))));
    auto pr = gauss_log_panels(rule.t_lo, t_hi, per_decade, 4);
    rule.t_nodes = std::move(pr.nodes);
    rule.t_weights = std::move(pr.weights);
    return rule;
}

template <typename T>
ComplexGridFunction resolvent_impl(const BasicGridFunction<T>& f, Complex lambda,
                                   std::size_t laplace_nodes) {
    if (lambda.imag() == 0.0 && lambda.real() <= 0.0)
        throw std::invalid_argument("apply_resolvent: lambda on (-inf, 0] is in the spectrum");
    const double psi = std::arg(lambda);
    const Complex tilt = std::polar(1.0, -psi / 2.0);
    const Complex mu = lambda * tilt; // |lambda| e^{i psi/2}, Re > 0
    const auto rule = laplace_rule(mu.real(), laplace_nodes);

    const CellPoly poly(*f.grid(), f.values());
    const auto nodes = f.grid()->nodes();
    std::vector<Complex> acc(f.size(), Complex(0.0, 0.0));
    for (std::size_t k = 0; k < rule.t_nodes.size(); ++k) {
        const double t = rule.t_nodes[k];
        const Complex weight = rule.t_weights[k] * std::exp(-mu * t);
        const auto v = heat_apply(poly, t * tilt, nodes);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * v[i];
    }
    // stub for [0, t_lo], where T(t e^{i delta}) f = f to O(t)
    const Complex stub = -expm1_complex(-mu * rule.t_lo) / mu;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] = tilt * (acc[i] + stub * Complex(f[i]));
    }
    return ComplexGridFunction(f.grid(), std::move(acc));
}

} // namespace

GridFunction apply_semigroup(const GridFunction& f, double t) {
    const CellPoly poly(*f.grid(), f.values());
    auto vals = heat_apply_real(poly, t, f.grid()->nodes());
    return GridFunction(f.grid(), std::move(vals));
}

ComplexGridFunction apply_semigroup(const GridFunction& f, const ComplexTime& z) {
    const CellPoly poly(*f.grid(), f.values());
    auto vals = heat_apply(poly, z.value(), f.grid()->nodes());
    return ComplexGridFunction(f.grid(), std::move(vals));
}

ComplexGridFunction apply_semigroup(const ComplexGridFunction& f, const ComplexTime& z) {
    const CellPoly poly(*f.grid(), f.values());
    auto vals = heat_apply(poly, z.value(), f.grid()->nodes());
    return ComplexGridFunction(f.grid(), std::move(vals));
}

Complex apply_semigroup_at(const GridFunction& f, const ComplexTime& z, double x) {
    const CellPoly poly(*f.grid(), f.values());
    const double pts[1] = {x};
    return heat_apply(poly, z.value(), pts)[0];
}

std::vector<double> apply_semigroup_2d(const GradedGrid& x1_grid,
                                       std::size_t n_tangential, double tan_half,
                                       std::span<const double> values, double t) {
    const std::size_t n1 = x1_grid.size();
    if (values.size() != n1 * n_tangential)
        throw std::invalid_argument("apply_semigroup_2d: value count mismatch");
    // tangential pass: whole-line convolution with G_t on a uniform grid
    const double h = 2.0 * tan_half / double(n_tangential);
    std::vector<double> stage(n1 * n_tangential, 0.0);
    const ComplexTime zt(t);
    std::vector<double> gk(n_tangential);
    for (std::size_t d = 0; d < n_tangential; ++d) {
        const double off = double(d) * h;
        gk[d] = gauss_kernel(zt, off).real() * h;
    }
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t a = 0; a < n_tangential; ++a) {
            Accumulator s;
            for (std::size_t b = 0; b < n_tangential; ++b) {
                s.add(gk[a >= b ? a - b : b - a] * values[i * n_tangential + b]);
            }
            stage[i * n_tangential + a] = s.value();
        }
    }
    // normal pass: half-line Dirichlet evolution per tangential column
    std::vector<double> out(n1 * n_tangential);
    std::vector<double> column(n1);
    for (std::size_t a = 0; a < n_tangential; ++a) {
        for (std::size_t i = 0; i < n1; ++i) column[i] = stage[i * n_tangential + a];
        const CellPoly poly(x1_grid, std::span<const double>(column));
        const auto evolved = heat_apply_real(poly, t, x1_grid.nodes());
        for (std::size_t i = 0; i < n1; ++i) out[i * n_tangential + a] = evolved[i];
    }
    return out;
}

GridFunction apply_resolvent(const GridFunction& f, double lambda,
                             std::size_t laplace_nodes) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("apply_resolvent: real lambda must be positive");
    auto z = resolvent_impl(f, Complex(lambda, 0.0), laplace_nodes);
    return GridFunction(f.grid(), real_parts({z.values().begin(), z.values().end()}));
}

ComplexGridFunction apply_resolvent(const GridFunction& f, Complex lambda,
                                    std::size_t laplace_nodes) {
    return resolvent_impl(f, lambda, laplace_nodes);
}

ComplexGridFunction apply_resolvent(const ComplexGridFunction& f, Complex lambda,
                                    std::size_t laplace_nodes) {
    return resolvent_impl(f, lambda, laplace_nodes);
}

SectorContour SectorContour::make(double sigma, double r_max, std::size_t n_nodes,
                                  double r_min) {
    if (!(sigma > 0.0 && sigma < M_PI / 2.0))
        throw std::invalid_argument("SectorContour: sigma must be in (0, pi/2)");
    if (!(r_min > 0.0 && r_max > r_min))
        throw std::invalid_argument("SectorContour: need 0 < r_min < r_max");
    SectorContour c;
    c.sigma = sigma;
    c.r_min = r_min;
    c.r_max = r_max;
    const double decades = std::log10(r_max / r_min);
    const std::size_t per_decade = std::max<std::size_t>(
        1, std::size_t(std::ceil(double(n_nodes) / (4.0 * decades))));
    auto rule = gauss_log_panels(r_min, r_max, per_decade, 4);
    c.radii = std::move(rule.nodes);
    c.radial_weights = std::move(rule.weights);
    return c;
}

HolomorphicSymbol imaginary_power_symbol(double tau, double eps) {
    HolomorphicSymbol s;
    s.decay_epsilon = eps;
    s.sup_norm_hint = std::exp(std::abs(tau) * M_PI / 2.0);
    s.evaluator = [tau, eps](Complex z) {
        const Complex lg = std::log(z);
        return std::exp(Complex(0.0, tau) * lg + eps * lg) / (1.0 + std::exp(2.0 * eps * lg));
    };
    return s;
}

HinfApplier::HinfApplier(const GridFunction& f, const SectorContour& contour, double tol)
    : grid_(f.grid()), f_(f), contour_(contour), tol_(tol) {
    const double sigma = contour.sigma;
    // ray 0: lambda = r e^{i sigma}, mu = -lambda = r e^{i (sigma - pi)}
    const double psi0 = sigma - M_PI;
    const double psi1 = M_PI - sigma;
    tilt_ = {std::polar(1.0, -psi0 / 2.0), std::polar(1.0, -psi1 / 2.0)};
    mu_dir_ = {std::polar(1.0, psi0 / 2.0), std::polar(1.0, psi1 / 2.0)};
    orient_ = {-std::polar(1.0, sigma), std::polar(1.0, -sigma)};

    const double cos_half = std::cos(psi1 / 2.0); // = sin(sigma/2), decay rate scale
    t_lo_ = 1e-9;
    const double t_hi = 46.0 / (contour.r_min * cos_half);
    auto rule = gauss_log_panels(t_lo_, t_hi, 3, 4);
    t_nodes_ = std::move(rule.nodes);
    t_weights_ = std::move(rule.weights);

    const CellPoly poly(*grid_, f.values());
    const auto nodes = grid_->nodes();
    const std::size_t n = grid_->size();
    for (int s = 0; s < 2; ++s) {
        ray_values_[s].resize(t_nodes_.size() * n);
        for (std::size_t k = 0; k < t_nodes_.size(); ++k) {
            const auto v = heat_apply(poly, t_nodes_[k] * tilt_[s], nodes);
            std::copy(v.begin(), v.end(), ray_values_[s].begin() + k * n);
        }
    }
}

ComplexGridFunction HinfApplier::apply(const HolomorphicSymbol& phi) const {
    const double sigma = contour_.sigma;
    const double eps = phi.decay_epsilon;
    if (!(eps > 0.0)) throw std::invalid_argument("apply_hinf_symbol: decay_epsilon must be > 0");
    // truncation estimate: the tail integrand is the two-ray difference of
    // the symbol against R(lambda) ~ 1/lambda, so sample that difference at
    // the outer truncation radius and extrapolate with the certified decay
    const double tail = std::abs(phi.evaluator(std::polar(contour_.r_max, sigma)) -
                                 phi.evaluator(std::polar(contour_.r_max, -sigma))) /
                        (2.0 * M_PI * eps);
    if (tail > tol_ * std::max(1.0, phi.sup_norm_hint)) {
        const double suggested =
            contour_.r_max * std::pow(tail / (tol_ * std::max(1.0, phi.sup_norm_hint)), 1.0 / eps);
        throw ContourError("apply_hinf_symbol: symbol decays too slowly for R_max", suggested);
    }

    const std::size_t n = grid_->size();
    const Complex two_pi_i(0.0, 2.0 * M_PI);
    std::vector<Complex> acc(n, Complex(0.0, 0.0));
    Complex stub_total(0.0, 0.0);
    for (int s = 0; s < 2; ++s) {
        const Complex ray_phase = s == 0 ? std::polar(1.0, sigma) : std::polar(1.0, -sigma);
        const Complex factor = orient_[s] * (-tilt_[s]) / two_pi_i;
        std::vector<Complex> ck(t_nodes_.size(), Complex(0.0, 0.0));
        for (std::size_t j = 0; j < contour_.radii.size(); ++j) {
            const double r = contour_.radii[j];
            const Complex lam = r * ray_phase;
            const Complex coeff = contour_.radial_weights[j] * phi.evaluator(lam) * factor;
            const Complex mu = r * mu_dir_[s];
            for (std::size_t k = 0; k < t_nodes_.size(); ++k) {
                ck[k] += coeff * std::exp(-mu * t_nodes_[k]) * t_weights_[k];
            }
            stub_total += coeff * (-expm1_complex(-mu * t_lo_)) / mu;
        }
        const auto& vals = ray_values_[s];
        for (std::size_t k = 0; k < t_nodes_.size(); ++k) {
            const Complex c = ck[k];
            const Complex* row = vals.data() + k * n;
            for (std::size_t i = 0; i < n; ++i) acc[i] += c * row[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) acc[i] += stub_total * f_[i];
    return ComplexGridFunction(grid_, std::move(acc));
}

ComplexGridFunction apply_hinf_symbol(const GridFunction& f, const HolomorphicSymbol& phi,
                                      const SectorContour& contour) {
    return HinfApplier(f, contour).apply(phi);
}

OddExtension odd_extension(const GridFunction& f) {
    const std::size_t n = f.size();
    OddExtension ext;
    ext.nodes.resize(2 * n);
    ext.values.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ext.nodes[n - 1 - i] = -f.grid()->node(i);
        ext.values[n - 1 - i] = -f[i];
        ext.nodes[n + i] = f.grid()->node(i);
        ext.values[n + i] = f[i];
    }
    return ext;
}

namespace {

std::mutex fftw_mutex;

// cubic Lagrange interpolation of grid values at x (zero outside the grid)
double interp_grid(const GradedGrid& g, std::span<const double> vals, double x) {
    const auto nodes = g.nodes();
    const std::size_t n = nodes.size();
    if (x <= 0.0 || x >= g.x_max()) return 0.0;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t j = std::size_t(it - nodes.begin());
    std::size_t lo = j >= 2 ? j - 2 : 0;
    lo = std::min(lo, n - 4);
    double out = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double l = 1.0;
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) continue;
            l *= (x - nodes[lo + b]) / (nodes[lo + a] - nodes[lo + b]);
        }
        out += l * vals[lo + a];
    }
    return out;
}

} // namespace

GridFunction odd_extension_solve(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("odd_extension_solve: lambda > 0");
    const auto& g = *f.grid();
    const double xmax = g.x_max();
    // wraparound guard: support must end well before the truncation radius
    double support_end = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 0.0) support_end = g.node(i);
    }
    if (support_end > 0.75 * xmax)
        throw std::invalid_argument(
            "odd_extension_solve: support too close to X_max (wraparound)");

    const std::size_t m = 8192; // points on the periodic interval [-L, L)
    const double L = 2.0 * xmax;
    std::vector<double> samples(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = -L + (2.0 * L) * double(i) / double(m);
        const double v = interp_grid(g, f.values(), std::abs(x));
        samples[i] = x >= 0.0 ? v : -v;
    }

    std::vector<Complex> in(m), out_buf(m);
    for (std::size_t i = 0; i < m; ++i) in[i] = Complex(samples[i], 0.0);
    auto* in_c = reinterpret_cast<fftw_complex*>(in.data());
    auto* out_c = reinterpret_cast<fftw_complex*>(out_buf.data());
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fwd = fftw_plan_dft_1d(int(m), in_c, out_c, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(int(m), out_c, in_c, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (std::size_t k = 0; k < m; ++k) {
        const double kk = k <= m / 2 ? double(k) : double(k) - double(m);
        const double xi = M_PI * kk / L;
        out_buf[k] /= (lambda + xi * xi) * double(m);
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    // interpolate the periodic solution back onto the graded nodes
    std::vector<double> uniform(m);
    for (std::size_t i = 0; i < m; ++i) uniform[i] = in[i].real();
    std::vector<double> vals(f.size());
    const double h = 2.0 * L / double(m);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = g.node(i);
        const double pos = (x + L) / h;
        const std::size_t j = std::min<std::size_t>(std::size_t(pos), m - 1);
        std::size_t lo = j >= 1 ? j - 1 : 0;
        lo = std::min(lo, m - 4);
        double out_v = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            double l = 1.0;
            const double xa = -L + h * double(lo + a);
            for (std::size_t b = 0; b < 4; ++b) {
                if (a == b) continue;
                const double xb = -L + h * double(lo + b);
                l *= (x - xb) / (xa - xb);
            }
            out_v += l * uniform[lo + a];
        }
        vals[i] = out_v;
    }
    return GridFunction(f.grid(), std::move(vals));
}

std::vector<double> materialize_matrix(const LinearOp& op, std::size_t n) {
    std::vector<double> mat(n * n, 0.0);
    std::vector<double> basis(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j] = 1.0;
        const auto col = op(basis);
        for (std::size_t i = 0; i < n; ++i) mat[i * n + j] = col[i];
        basis[j] = 0.0;
    }
    return mat;
}

OperatorNormEstimate operator_norm_estimate(const LinearOp& op, const GradedGrid& grid,
                                            const LebesgueExponent& p, const PowerWeight& w,
                                            std::size_t probes, std::uint64_t seed) {
    const std::size_t n = grid.size();
    const auto mat = materialize_matrix(op, n);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = w(grid.node(i)) * grid.quad_weight(i);

    auto norm_p = [&](std::span<const double> v) {
        Accumulator a;
        for (std::size_t i = 0; i < n; ++i) a.add(std::pow(std::abs(v[i]), p.p) * m[i]);
        return std::pow(a.value(), 1.0 / p.p);
    };
    auto matvec = [&](std::span<const double> u, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            Accumulator a;
            const double* row = mat.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) a.add(row[j] * u[j]);
            out[i] = a.value();
        }
    };
    auto matvec_t = [&](std::span<const double> v, std::vector<double>& out) {
        for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = mat.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) out[j] += row[j] * v[i];
        }
    };

    double best = 0.0;
    std::string witness = "none";
    std::vector<double> u(n), v(n), g(n);
    const double q = p.p / (p.p - 1.0);

    auto ascend = [&](std::vector<double> start, const std::string& label) {
        double nu = norm_p(start);
        if (nu == 0.0) return;
        for (std::size_t i = 0; i < n; ++i) start[i] /= nu;
        for (int it = 0; it < 40; ++it) {
            matvec(start, v);
            const double r = norm_p(v);
            if (r > best) {
                best = r;
                witness = label;
            }
            if (r == 0.0) return;
            // dual vector and weighted-adjoint gradient step
            for (std::size_t i = 0; i < n; ++i) {
                const double a = std::abs(v[i]);
                g[i] = m[i] * std::pow(a, p.p - 1.0) * (v[i] >= 0.0 ? 1.0 : -1.0);
            }
            matvec_t(g, u);
            for (std::size_t j = 0; j < n; ++j) {
                const double a = std::abs(u[j]) / m[j];
                u[j] = std::pow(a, q - 1.0) * (u[j] >= 0.0 ? 1.0 : -1.0);
            }
            const double nn = norm_p(u);
            if (nn == 0.0) return;
            for (std::size_t j = 0; j < n; ++j) start[j] = u[j] / nn;
        }
    };

    // structured starts: boundary-concentrated spikes and smooth profiles
    for (std::size_t j : {0u, 1u, 2u, 4u, 8u, 16u, 32u}) {
        if (j >= n) break;
        std::vector<double> s(n, 0.0);
        s[j] = 1.0;
        ascend(std::move(s), "spike@" + std::to_string(j));
    }
    for (int prof = 0; prof < 3; ++prof) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.node(i);
            s[i] = prof == 0 ? std::exp(-x) : prof == 1 ? x * std::exp(-x) : x * std::exp(-x * x);
        }
        ascend(std::move(s), "profile" + std::to_string(prof));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t k = 0; k < probes; ++k) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = unif(rng);
        ascend(std::move(s), "random" + std::to_string(k));
    }
    return {best, witness};
}

} // namespace heatcalc
