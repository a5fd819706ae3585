#include <doctest.h>

#include "heatcalc/grid.hpp"
#include "heatcalc/norms.hpp"
#include "heatcalc/weight.hpp"

#include <cmath>
#include <random>

using namespace heatcalc;

TEST_CASE("graded grid basics") {
    SUBCASE("grading 1 is the uniform midpoint rule") {
        auto g = make_graded_grid(16, 1.0, 1.0);
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(g->node(i) == doctest::Approx((i + 0.5) / 16.0).epsilon(1e-15));
            CHECK(g->quad_weight(i) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
        }
    }
    SUBCASE("weights sum to the domain length") {
        for (double grading : {1.0, 2.0, 3.0}) {
            auto g = make_graded_grid(128, 40.0, grading);
            double s = 0.0;
            for (std::size_t i = 0; i < g->size(); ++i) s += g->quad_weight(i);
            CHECK(s == doctest::Approx(40.0).epsilon(1e-13));
        }
    }
    SUBCASE("nodes strictly increasing") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 8 + rng() % 500;
            const double grading = 1.0 + 3.0 * double(rng() % 1000) / 1000.0;
            auto g = make_graded_grid(n, 40.0, grading);
            for (std::size_t i = 1; i < n; ++i) CHECK(g->node(i) > g->node(i - 1));
            auto gi = make_interval_grid(n, grading);
            for (std::size_t i = 1; i < n; ++i) CHECK(gi->node(i) > gi->node(i - 1));
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(make_graded_grid(4, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_graded_grid(16, -1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(make_graded_grid(16, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("singular-weight quadrature consistency") {
    // quadrature of x^a on (0,1) vs the closed form 1/(a+1)
    auto quad_err = [](std::size_t n, double grading, double a) {
        auto g = make_graded_grid(n, 1.0, grading);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::pow(g->node(i), a) * g->quad_weight(i);
        return std::abs(s - 1.0 / (a + 1.0)) * (a + 1.0);
    };
    SUBCASE("x^1.5 at n=512 grading 3 is within 1e-4") {
        CHECK(quad_err(512, 3.0, 1.5) < 1e-4);
    }
    SUBCASE("error decreases monotonically under node doubling") {
        for (double a : {-0.5, 1.5, 2.5, 3.5}) {
            double prev = quad_err(64, 3.0, a);
            for (std::size_t n : {128u, 256u, 512u}) {
                const double cur = quad_err(n, 3.0, a);
                CHECK(cur < prev);
                prev = cur;
            }
        }
        // the midpoint rule is exact for constants
        CHECK(quad_err(64, 3.0, 0.0) < 1e-14);
    }
}

TEST_CASE("weighted Lp norms") {
    auto unit_grid = make_graded_grid(512, 1.0, 2.0);
    const LebesgueExponent p2(2.0);

    SUBCASE("unit function, unit weight") {
        auto f = GridFunction::sample(unit_grid, [](double) { return 1.0; });
        CHECK(lp_norm(f, 2.0, PowerWeight(0.0)) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("unit function, gamma=1") {
        auto f = GridFunction::sample(unit_grid, [](double) { return 1.0; });
        CHECK(lp_norm(f, 2.0, PowerWeight(1.0)) ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    }
    SUBCASE("x e^{-x} on the truncated half line") {
        auto g = make_graded_grid(512, 40.0, 2.0);
        auto f = GridFunction::sample(g, [](double x) { return x * std::exp(-x); });
        CHECK(lp_norm(f, 2.0, PowerWeight(0.0)) == doctest::Approx(0.5).epsilon(1e-7));
    }
    SUBCASE("NaN rejected") {
        std::vector<double> v(unit_grid->size(), 1.0);
        CHECK_THROWS_AS(GridFunction(unit_grid, [&] {
                            auto bad = v;
                            bad[3] = std::nan("");
                            return bad;
                        }()),
                        std::invalid_argument);
    }
}

TEST_CASE("norm homogeneity under dilation") {
    // ||f(r .)||_{L^p(x^gamma)} = r^{-(1+gamma)/p} ||f||
    auto g = make_graded_grid(1024, 40.0, 2.0);
    auto f = [](double x) { return x * x * std::exp(-x * x); };
    for (double gamma : {0.0, 1.0, 2.0}) {
        const PowerWeight w(gamma);
        for (double p : {1.5, 2.0, 3.0}) {
            const double base = lp_norm(GridFunction::sample(g, f), p, w);
            for (double r : {0.5, 2.0, 4.0}) {
                auto fr = GridFunction::sample(g, [&](double x) { return f(r * x); });
                const double expected = std::pow(r, -(1.0 + gamma) / p) * base;
                CHECK(lp_norm(fr, p, w) == doctest::Approx(expected).epsilon(0.01));
            }
        }
    }
}

TEST_CASE("finite difference Sobolev seminorms") {
    auto g = make_graded_grid(512, 1.0, 2.0);
    const LebesgueExponent p2(2.0);
    const PowerWeight w0(0.0);

    SUBCASE("constants have zero seminorm") {
        auto f = GridFunction::sample(g, [](double) { return 3.25; });
        for (int k : {1, 2, 3}) CHECK(sobolev_seminorm(f, k, p2, w0) < 1e-10);
    }
    SUBCASE("x^2 has second derivative 2") {
        auto f = GridFunction::sample(g, [](double x) { return x * x; });
        CHECK(sobolev_seminorm(f, 2, p2, w0) == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("unsupported order") {
        auto f = GridFunction::sample(g, [](double x) { return x; });
        CHECK_THROWS_AS(sobolev_seminorm(f, 4, p2, w0), std::invalid_argument);
    }
    SUBCASE("dilation scaling r^{k-(1+gamma)/p}") {
        auto gl = make_graded_grid(1024, 40.0, 2.0);
        auto f = [](double x) { return x * x * std::exp(-x * x); };
        const double gamma = 1.0, p = 2.0;
        const PowerWeight w(gamma);
        const LebesgueExponent pe(p);
        for (int k : {1, 2}) {
            const double base = sobolev_seminorm(GridFunction::sample(gl, f), k, pe, w);
            for (double r : {0.5, 2.0}) {
                auto fr = GridFunction::sample(gl, [&](double x) { return f(r * x); });
                const double expected = std::pow(r, k - (1.0 + gamma) / p) * base;
                CHECK(sobolev_seminorm(fr, k, pe, w) ==
                      doctest::Approx(expected).epsilon(0.01));
            }
        }
    }
}

TEST_CASE("Besov time seminorm") {
    const LebesgueExponent p2(2.0);
    SUBCASE("constants vanish") {
        auto tg = make_time_grid(128, 1.0);
        auto gfun = GridFunction::sample(tg, [](double) { return 1.7; });
        CHECK(besov_time_seminorm(gfun, 0.5, p2).value == doctest::Approx(0.0));
    }
    SUBCASE("g(t)=t, delta=0.5: double integral equals 1, stable under refinement") {
        double prev = 0.0;
        for (std::size_t n : {128u, 256u, 512u}) {
            auto tg = make_time_grid(n, 1.0);
            auto gfun = GridFunction::sample(tg, [](double t) { return t; });
            const double v = besov_time_seminorm(gfun, 0.5, p2).value;
            CHECK(v == doctest::Approx(1.0).epsilon(0.05));
            if (prev > 0.0) CHECK(std::abs(v - prev) / prev < 0.02);
            prev = v;
        }
    }
    SUBCASE("t^{0.25}: finite at delta=0.2, grows without bound at delta=0.9") {
        double prev_ok = 0.0, prev_bad = 0.0;
        bool grew_every_level = true;
        for (std::size_t n : {64u, 128u, 256u, 512u}) {
            auto tg = make_time_grid(n, 1.0);
            auto gfun = GridFunction::sample(tg, [](double t) { return std::pow(t, 0.25); });
            const double ok = besov_time_seminorm(gfun, 0.2, p2).value;
            const double bad = besov_time_seminorm(gfun, 0.9, p2).value;
            if (prev_ok > 0.0) CHECK(std::abs(ok - prev_ok) / prev_ok < 0.03);
            if (prev_bad > 0.0) grew_every_level &= bad > prev_bad * 1.05;
            prev_ok = ok;
            prev_bad = bad;
        }
        CHECK(grew_every_level);
    }
    SUBCASE("seminorm axioms on the discrete functional") {
        auto tg = make_time_grid(64, 1.0);
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<double> a(64), b(64);
            for (auto& x : a) x = unif(rng);
            for (auto& x : b) x = unif(rng);
            GridFunction fa(tg, a), fb(tg, b);
            std::vector<double> sum(64);
            for (int i = 0; i < 64; ++i) sum[i] = a[i] + b[i];
            GridFunction fsum(tg, sum);
            const double c = 2.0 + trial;
            std::vector<double> ca(64);
            for (int i = 0; i < 64; ++i) ca[i] = c * a[i];
            GridFunction fca(tg, ca);
            const double na = besov_time_seminorm(fa, 0.4, LebesgueExponent(2.0)).value;
            const double nb = besov_time_seminorm(fb, 0.4, LebesgueExponent(2.0)).value;
            const double ns = besov_time_seminorm(fsum, 0.4, LebesgueExponent(2.0)).value;
            const double nc = besov_time_seminorm(fca, 0.4, LebesgueExponent(2.0)).value;
            CHECK(nc == doctest::Approx(c * na).epsilon(1e-12));
            CHECK(ns <= na + nb + 1e-12);
        }
    }
    SUBCASE("delta range validated") {
        auto tg = make_time_grid(64, 1.0);
        auto gfun = GridFunction::sample(tg, [](double t) { return t; });
        CHECK_THROWS_AS(besov_time_seminorm(gfun, 1.2, p2), std::invalid_argument);
    }
}

TEST_CASE("Ap constant estimate") {
    SUBCASE("constant weight gives 1") {
        for (double p : {1.5, 2.0, 3.0}) {
            auto est = ap_constant_estimate(0.0, LebesgueExponent(p), 6);
            CHECK(!est.divergent);
            CHECK(est.value == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("p=2, gamma=0.5: finite, stable in levels, matches closed form") {
        // per-interval product on [0,a] is a-independent:
        // 1 / ((gamma+1) (1 - gamma/(p-1))^{p-1})
        auto e1 = ap_constant_estimate(0.5, LebesgueExponent(2.0), 5);
        auto e2 = ap_constant_estimate(0.5, LebesgueExponent(2.0), 9);
        CHECK(!e1.divergent);
        CHECK(e1.value == doctest::Approx(1.0 / (1.5 * 0.5)).epsilon(1e-3));
        CHECK(e2.value == doctest::Approx(e1.value).epsilon(1e-6));
    }
    SUBCASE("p=2, gamma=1.5 diverges") {
        CHECK(ap_constant_estimate(1.5, LebesgueExponent(2.0), 6).divergent);
    }
    SUBCASE("finite iff gamma in (-1, p-1) over the test lattice") {
        for (double p : {1.5, 2.0, 3.0}) {
            const LebesgueExponent pe(p);
            for (double gamma : {-0.5, 0.0, 0.5, p - 1.25, p - 0.75, 1.5 * (p - 1.0)}) {
                if (gamma <= -1.0) continue;
                const bool in_range = gamma < p - 1.0;
                CHECK(ap_constant_estimate(gamma, pe, 6).divergent == !in_range);
            }
        }
    }
}

TEST_CASE("graph domain weight comparability") {
    auto hgrid = make_graded_grid(256, 6.28318530717958648, 1.0);
    SUBCASE("flat boundary gives (1,1)") {
        auto h = GridFunction::sample(hgrid, [](double) { return 0.0; });
        auto eq = graph_domain_weight_equivalence(h, 2.0, 400);
        CHECK(eq.c_low == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(eq.c_high == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("h = 0.1 sin: constants near 1, bounded by the slope oracle") {
        auto h = GridFunction::sample(hgrid, [](double s) { return 0.1 * std::sin(s); });
        const double gamma = 2.0;
        auto eq = graph_domain_weight_equivalence(h, gamma, 900);
        // dist >= offset / sqrt(1 + |h'|^2), h' bounded by 0.1
        const double slope_bound = std::pow(std::sqrt(1.0 + 0.01), gamma);
        CHECK(eq.c_low <= 1.005);
        CHECK(eq.c_high >= 0.995);
        CHECK(eq.c_high <= slope_bound * 1.005);
        CHECK(eq.c_low >= 1.0 / (slope_bound * 1.005));
    }
}
