#include <doctest.h>

#include "heatcalc/norms.hpp"
#include "heatcalc/pde.hpp"

#include <cmath>
#include <filesystem>
#include <random>

using namespace heatcalc;

TEST_CASE("elliptic solver") {
    auto g = make_graded_grid(512, 40.0, 3.0);
    const LebesgueExponent p2(2.0);

    SUBCASE("closed-form pair (2 e^{-x}, x e^{-x}) at lambda = 1") {
        auto f = GridFunction::sample(g, [](double x) { return 2.0 * std::exp(-x); });
        auto sol = solve_elliptic(f, 1.0, p2, 2.0);
        const PowerWeight w(2.0);
        // each lambda-scaled seminorm against its closed form
        CHECK(lp_norm(sol.u, 2.0, w) == doctest::Approx(std::sqrt(0.75)).epsilon(0.01));
        CHECK(sobolev_seminorm(sol.u, 1, p2, w) == doctest::Approx(0.5).epsilon(0.01));
        CHECK(sobolev_seminorm(sol.u, 2, p2, w) == doctest::Approx(0.5).epsilon(0.01));
        // ||f||_{L^2(x^2)} = (4 int x^2 e^{-2x})^{1/2} = 1
        const double expected = std::sqrt(0.75) + 0.5 + 0.5;
        CHECK(sol.report.value == doctest::Approx(expected).epsilon(0.01));
    }
    SUBCASE("zero data gives the zero solution") {
        auto f = GridFunction::sample(g, [](double) { return 0.0; });
        auto sol = solve_elliptic(f, 1.0, p2, 2.0);
        CHECK(sup_norm(sol.u) == 0.0);
    }
    SUBCASE("lambda-scaling: ratio within +-20% across lambda = 1..1e4") {
        // the scale-invariant family: data lambda g(sqrt(lambda) x) turns the
        // lambda-problem into the unit one, so the ratio is exactly constant
        // in the continuum and the sweep measures discretization robustness
        auto base_fn = [](double x) { return 2.0 * std::exp(-x); };
        const double base =
            solve_elliptic(GridFunction::sample(g, base_fn), 1.0, p2, 2.0).report.value;
        for (double lam : {10.0, 100.0, 1e4}) {
            const double s = std::sqrt(lam);
            auto f = GridFunction::sample(g, [&](double x) { return lam * base_fn(s * x); });
            const double v = solve_elliptic(f, lam, p2, 2.0).report.value;
            CHECK(v == doctest::Approx(base).epsilon(0.20));
        }
    }
    SUBCASE("dilation reproduces the lambda-scaling law") {
        // u_r(x) = u(rx) solves (r^2 lambda - Lap) u_r = r^2 f(r .)
        auto f = GridFunction::sample(g, [](double x) { return 2.0 * std::exp(-x); });
        auto u1 = solve_elliptic(f, 1.0, p2, 2.0).u;
        const double r = 2.0;
        auto fr = GridFunction::sample(
            g, [r](double x) { return r * r * 2.0 * std::exp(-r * x); });
        auto ur = solve_elliptic(fr, r * r, p2, 2.0).u;
        // compare ur(x) with u1(rx) on the inner nodes via resampling
        auto u1r = GridFunction::sample(g, [&](double x) {
            // linear interp of u1 at rx
            const auto nodes = g->nodes();
            const double t = r * x;
            if (t >= g->x_max()) return 0.0;
            auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
            std::size_t j = std::min<std::size_t>(
                std::max<std::ptrdiff_t>(1, it - nodes.begin()), nodes.size() - 1);
            const double a = (t - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
            return u1[j - 1] + a * (u1[j] - u1[j - 1]);
        });
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            num += std::abs(ur[i] - u1r[i]) * g->quad_weight(i);
            den += std::abs(u1r[i]) * g->quad_weight(i);
        }
        CHECK(num / den < 0.01);
    }
    SUBCASE("solvability error at lambda <= 0") {
        auto f = GridFunction::sample(g, [](double x) { return std::exp(-x); });
        CHECK_THROWS_AS(solve_elliptic(f, 0.0, p2, 2.0), std::invalid_argument);
    }
}

namespace {

SpaceTimeFunction sample_forcing(GridPtr tg, GridPtr xg,
                                 const std::function<double(double, double)>& f) {
    SpaceTimeFunction out(tg, xg);
    for (std::size_t i = 0; i < out.nt(); ++i) {
        for (std::size_t j = 0; j < out.nx(); ++j) {
            out.at(i, j) = f(tg->node(i), xg->node(j));
        }
    }
    return out;
}

} // namespace

TEST_CASE("forced heat solver") {
    const LebesgueExponent p2(2.0), q2(2.0);
    auto xg = make_graded_grid(256, 20.0, 3.0);

    SUBCASE("time-independent forcing relaxes to the elliptic solution") {
        auto tg = make_time_grid(160, 10.0);
        auto phi = [](double x) { return x * std::exp(-x); };
        auto f = sample_forcing(tg, xg, [&](double, double x) { return phi(x); });
        auto sol = solve_heat_forced(f, 1.0, p2, q2, 2.0, 0.0);
        auto fx = GridFunction::sample(xg, phi);
        auto elliptic = solve_elliptic(fx, 1.0, p2, 2.0);
        // terminal slice vs elliptic solution
        double num = 0.0, den = 0.0;
        const PowerWeight w(2.0);
        for (std::size_t j = 0; j < xg->size(); ++j) {
            const double d = sol.u.at(sol.u.nt() - 1, j) - elliptic.u[j];
            num += d * d * w(xg->node(j)) * xg->quad_weight(j);
            den += elliptic.u[j] * elliptic.u[j] * w(xg->node(j)) * xg->quad_weight(j);
        }
        CHECK(std::sqrt(num / den) < 0.02);
    }
    SUBCASE("zero forcing, zero solution") {
        auto tg = make_time_grid(32, 1.0);
        SpaceTimeFunction f(tg, xg);
        auto sol = solve_heat_forced(f, 1.0, p2, q2, 2.0, 0.0);
        CHECK(sol.report.value == 0.0);
    }
    SUBCASE("maximal-regularity ratio stable under space-time refinement") {
        std::vector<double> ratios;
        for (std::size_t level = 0; level < 3; ++level) {
            auto tg = make_time_grid(32 << level, 2.0);
            auto xgl = make_graded_grid(64 << level, 20.0, 3.0);
            auto f = sample_forcing(tg, xgl, [](double t, double x) {
                return std::sin(2.0 * t) * x * std::exp(-x);
            });
            ratios.push_back(solve_heat_forced(f, 1.0, p2, q2, 2.0, 0.0).report.value);
        }
        CHECK(classify_trend(ratios, 0.10) == Trend::stable);
    }
    SUBCASE("superposition to machine precision") {
        auto tg = make_time_grid(24, 1.0);
        auto f1 = sample_forcing(tg, xg, [](double t, double x) { return t * x * std::exp(-x); });
        auto f2 = sample_forcing(tg, xg, [](double t, double x) {
            return std::cos(t) * std::exp(-(x - 2.0) * (x - 2.0));
        });
        SpaceTimeFunction fsum(tg, xg);
        for (std::size_t k = 0; k < fsum.values.size(); ++k)
            fsum.values[k] = f1.values[k] + 2.5 * f2.values[k];
        auto u1 = solve_heat_forced(f1, 1.0, p2, q2, 2.0, 0.0).u;
        auto u2 = solve_heat_forced(f2, 1.0, p2, q2, 2.0, 0.0).u;
        auto us = solve_heat_forced(fsum, 1.0, p2, q2, 2.0, 0.0).u;
        double worst = 0.0;
        for (std::size_t k = 0; k < us.values.size(); ++k) {
            worst = std::max(worst,
                             std::abs(us.values[k] - u1.values[k] - 2.5 * u2.values[k]));
        }
        CHECK(worst < 1e-12);
    }
    SUBCASE("temporal weight range validated") {
        auto tg = make_time_grid(16, 1.0);
        SpaceTimeFunction f(tg, xg);
        CHECK_THROWS_AS(solve_heat_forced(f, 1.0, p2, q2, 2.0, 1.5), std::invalid_argument);
    }
}

TEST_CASE("boundary-data heat solver") {
    const LebesgueExponent p2(2.0);
    auto xg = make_graded_grid(256, 16.0, 3.0);
    auto tg = make_time_grid(128, 1.0);

    SUBCASE("g = 1 gives the erfc closed form") {
        auto g = BoundaryData::sample(tg, [](double) { return 1.0; });
        CHECK(!g.compatible);
        // gamma in (2p-3, 2p-1) = (1,3): no compatibility needed
        auto sol = solve_heat_boundary(g, p2, 2.5, tg, xg);
        CHECK(heat_boundary_value(g, 1.0, 1.0) ==
              doctest::Approx(0.4795001221869535).epsilon(1e-6));
        // every computed node against erfc(x / (2 sqrt t))
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.u.nt(); i += 13) {
            for (std::size_t j = 0; j < sol.u.nx(); j += 13) {
                const double t = tg->node(i), x = xg->node(j);
                worst = std::max(worst, std::abs(sol.u.at(i, j) -
                                                 std::erfc(x / (2.0 * std::sqrt(t)))));
            }
        }
        CHECK(worst < 1e-10);
        CHECK(sol.delta == doctest::Approx(1.0 - 3.5 / 4.0));
    }
    SUBCASE("boundary attainment at the first-node rate") {
        auto g = BoundaryData::sample(tg, [](double t) { return 1.0 + 0.5 * std::sin(t); });
        auto sol = solve_heat_boundary(g, p2, 2.5, tg, xg);
        for (std::size_t i : {std::size_t(16), std::size_t(64), std::size_t(120)}) {
            const double gt = g.values[i];
            CHECK(std::abs(sol.u.at(i, 0) - gt) < 4.0 * xg->node(0) + 1e-10);
        }
    }
    SUBCASE("compatibility enforcement below 2p-3") {
        auto g = BoundaryData::sample(tg, [](double) { return 1.0; });
        CHECK_THROWS_AS(solve_heat_boundary(g, p2, 0.5, tg, xg), std::invalid_argument);
        auto ok = BoundaryData::sample(tg, [](double t) { return t; });
        CHECK(ok.compatible);
        CHECK_NOTHROW(solve_heat_boundary(ok, p2, 0.5, tg, xg));
    }
    SUBCASE("causality: later data changes nothing") {
        auto g1 = BoundaryData::sample(tg, [](double t) { return t * t; });
        auto g2 = BoundaryData::sample(tg, [](double t) {
            return t < 0.6 ? t * t : t * t + 5.0 * (t - 0.6);
        });
        const double t_probe = 0.5, x_probe = 0.7;
        CHECK(heat_boundary_value(g1, t_probe, x_probe) ==
              doctest::Approx(heat_boundary_value(g2, t_probe, x_probe)).epsilon(1e-13));
    }
    SUBCASE("linearity in the data") {
        std::mt19937 rng(21);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<double> a(tg->size()), b(tg->size()), s(tg->size());
        for (std::size_t i = 0; i < tg->size(); ++i) {
            a[i] = unif(rng) * tg->node(i); // keep g(0) = 0
            b[i] = unif(rng) * tg->node(i);
            s[i] = a[i] + 3.0 * b[i];
        }
        BoundaryData ga(tg, a), gb(tg, b), gs(tg, s);
        const double va = heat_boundary_value(ga, 0.8, 1.3);
        const double vb = heat_boundary_value(gb, 0.8, 1.3);
        const double vs = heat_boundary_value(gs, 0.8, 1.3);
        CHECK(vs == doctest::Approx(va + 3.0 * vb).epsilon(1e-12));
    }
    SUBCASE("two resolutions agree on the solution") {
        auto g = BoundaryData::sample(tg, [](double t) { return std::sqrt(t); });
        auto coarse = solve_heat_boundary(g, p2, 2.5, make_time_grid(64, 1.0),
                                          make_graded_grid(128, 16.0, 3.0));
        auto fine = solve_heat_boundary(g, p2, 2.5, make_time_grid(128, 1.0),
                                        make_graded_grid(256, 16.0, 3.0));
        // compare on the coarse nodes by nearest sampling of the fine field
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < coarse.u.nt(); ++i) {
            for (std::size_t j = 0; j < coarse.u.nx(); ++j) {
                const double c = coarse.u.at(i, j);
                const double f = fine.u.at(2 * i, 2 * j); // hmm: grids nest only roughly
                num += std::abs(c - f);
                den += std::abs(f);
            }
        }
        CHECK(num / den < 0.25);
    }
    SUBCASE("export writes CSV plus sidecar") {
        auto g = BoundaryData::sample(tg, [](double t) { return t; });
        auto sol = solve_heat_boundary(g, p2, 2.5, make_time_grid(16, 1.0),
                                       make_graded_grid(32, 16.0, 3.0));
        const auto dir = std::filesystem::temp_directory_path() / "heatcalc_test_export";
        std::filesystem::create_directories(dir);
        const std::string prefix = (dir / "sol").string();
        export_solution(sol.u, {{"gamma", 2.5}}, prefix);
        CHECK(std::filesystem::exists(prefix + ".csv"));
        CHECK(std::filesystem::exists(prefix + ".json"));
    }
}

TEST_CASE("interval decay rate") {
    const LebesgueExponent p2(2.0);
    auto g = make_interval_grid(256, 2.0);

    SUBCASE("first-mode rate -pi^2 within 1%") {
        auto f0 = GridFunction::sample(g, [](double x) { return x * (1.0 - x); });
        auto fit = interval_decay_rate(f0, p2, 0.0, 0.3, 1.0);
        CHECK(fit.rate == doctest::Approx(-M_PI * M_PI).epsilon(0.01));
    }
    SUBCASE("rate independent of p and gamma within 1%") {
        auto f0 = GridFunction::sample(g, [](double x) { return x * (1.0 - x); });
        for (double p : {1.5, 2.0, 3.0}) {
            for (double gamma : {0.0, 1.0, 2.0 * p - 1.5}) {
                auto fit = interval_decay_rate(f0, LebesgueExponent(p), gamma, 0.3, 1.0);
                CHECK(fit.rate == doctest::Approx(-M_PI * M_PI).epsilon(0.01));
            }
        }
    }
    SUBCASE("second eigenmode decays at -4 pi^2") {
        auto f0 = GridFunction::sample(g, [](double x) { return std::sin(2.0 * M_PI * x); });
        auto fit = interval_decay_rate(f0, p2, 0.0, 0.15, 0.5);
        CHECK(fit.rate == doctest::Approx(-4.0 * M_PI * M_PI).epsilon(0.01));
    }
    SUBCASE("too-early window errors with a suggestion") {
        auto f0 = GridFunction::sample(
            g, [](double x) { return std::sin(M_PI * x) + std::sin(4.0 * M_PI * x); });
        CHECK_THROWS_WITH_AS(interval_decay_rate(f0, p2, 0.0, 0.001, 0.02),
                             doctest::Contains("window too early"), std::runtime_error);
    }
}
