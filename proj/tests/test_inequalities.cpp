#include <doctest.h>

#include "heatcalc/inequality.hpp"
#include "heatcalc/norms.hpp"

#include <cmath>

using namespace heatcalc;

namespace {

const std::vector<CorpusFunction>& corpus() {
    static auto c = load_corpus(std::string(HEATCALC_TEST_DATA_DIR) + "/corpus.txt");
    return c;
}

} // namespace

TEST_CASE("corpus file loads") {
    CHECK(corpus().size() == 20);
    std::size_t vanish = 0;
    for (const auto& cf : corpus()) {
        CHECK(std::isfinite(cf.eval(1.0)));
        if (cf.vanishes_at_zero) ++vanish;
    }
    CHECK(vanish >= 10);
}

TEST_CASE("Hardy ratio") {
    const LebesgueExponent p2(2.0);
    SUBCASE("analytic case u = x e^{-x}, (p,gamma) = (2,2)") {
        auto rep = hardy_ratio([](double x) { return x * std::exp(-x); }, p2, 2.0);
        CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.01));
        CHECK(rep.reference_bound == doctest::Approx(2.0));
        CHECK(rep.refinement_trend == Trend::stable);
    }
    SUBCASE("zero input gives zero ratio") {
        auto rep = hardy_ratio([](double) { return 0.0; }, p2, 2.0);
        CHECK(rep.ratio == 0.0);
    }
    SUBCASE("excluded exponent") {
        CHECK_THROWS_AS(hardy_ratio([](double x) { return x; }, p2, 1.0),
                        std::invalid_argument);
    }
    SUBCASE("violated trace condition diverges under refinement") {
        // gamma = 0 < p-1 needs u(0) = 0; e^{-x} has u(0) = 1
        auto rep = hardy_ratio([](double x) { return std::exp(-x); }, p2, 0.0);
        CHECK(rep.refinement_trend == Trend::growing);
    }
    SUBCASE("corpus stays below the sharp constant on both branches") {
        for (double p : {1.5, 2.0, 3.0}) {
            const LebesgueExponent pe(p);
            const double gammas[4] = {std::max(-0.9, p - 2.0), p - 1.4, p - 0.4,
                                      2.0 * p - 1.3};
            for (double gamma : gammas) {
                if (gamma <= -1.0 || gamma == p - 1.0) continue;
                const double bound = p / std::abs(gamma - p + 1.0);
                for (const auto& cf : corpus()) {
                    if (gamma < p - 1.0 && !cf.vanishes_at_zero) continue;
                    auto rep = hardy_ratio(cf.eval, pe, gamma);
                    CAPTURE(cf.name);
                    CAPTURE(p);
                    CAPTURE(gamma);
                    CHECK(rep.ratio <= bound * 1.02);
                }
            }
        }
    }
}

TEST_CASE("trace embedding ratio") {
    const LebesgueExponent p2(2.0);
    SUBCASE("closed form u = e^{-x}, order 1, gamma 0") {
        auto rep = trace_embedding_ratio([](double x) { return std::exp(-x); }, p2, 0.0, 1);
        CHECK(rep.ratio == doctest::Approx(1.0).epsilon(0.01));
        CHECK(rep.refinement_trend == Trend::stable);
    }
    SUBCASE("zero input") {
        auto rep = trace_embedding_ratio([](double) { return 0.0; }, p2, 0.5, 1);
        CHECK(rep.ratio == 0.0);
    }
    SUBCASE("order 2 on the extended branch is refinement stable") {
        auto rep = trace_embedding_ratio([](double x) { return std::exp(-x); }, p2, 2.0, 2);
        CHECK(rep.refinement_trend == Trend::stable);
        CHECK(rep.ratio > 0.0);
    }
    SUBCASE("range errors") {
        auto u = [](double x) { return std::exp(-x); };
        CHECK_THROWS_AS(trace_embedding_ratio(u, p2, 2.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(trace_embedding_ratio(u, p2, 0.5, 2), std::invalid_argument);
        CHECK_THROWS_AS(trace_embedding_ratio(u, p2, 0.5, 3), std::invalid_argument);
    }
    SUBCASE("gamma < -1 forces a vanishing trace: nonzero u(0) diverges") {
        // the L^p(w_gamma) norm of e^{-x} alone grows without bound
        RefinementPlan plan;
        std::vector<double> vals;
        for (std::size_t n : plan.levels) {
            auto g = make_graded_grid(n, plan.x_max, plan.grading);
            auto f = GridFunction::sample(g, [](double x) { return std::exp(-x); });
            vals.push_back(lp_norm(f, 2.0, PowerWeight(-1.5)));
        }
        CHECK(classify_trend(vals) == Trend::growing);
    }
}

TEST_CASE("interpolation inequality ratio") {
    const LebesgueExponent p2(2.0);
    auto u = [](double x) { return x * std::exp(-x); };
    SUBCASE("finite and stable at (2,2,1,2)") {
        auto rep = interpolation_ratio(u, p2, 2.0, 1, 2);
        CHECK(rep.refinement_trend == Trend::stable);
        CHECK(rep.ratio > 0.0);
        // frozen against the three closed-form integrals:
        // [u]_1 = 1/2, ||u|| = sqrt(3)/2, [u]_2 = 1/2 on L^2(x^2 dx)
        const double expected = 0.5 / (std::sqrt(std::sqrt(3.0) / 2.0) * std::sqrt(0.5));
        CHECK(rep.ratio == doctest::Approx(expected).epsilon(0.01));
    }
    SUBCASE("dilation invariance of the ratio") {
        auto base = interpolation_ratio(u, p2, 2.0, 1, 2);
        for (double r : {0.5, 2.0}) {
            auto scaled = interpolation_ratio([=](double x) { return r * x * std::exp(-r * x); },
                                              p2, 2.0, 1, 2);
            CHECK(scaled.ratio == doctest::Approx(base.ratio).epsilon(0.01));
        }
    }
    SUBCASE("zero input convention") {
        auto rep = interpolation_ratio([](double) { return 0.0; }, p2, 2.0, 1, 2);
        CHECK(rep.ratio == 0.0);
    }
    SUBCASE("range validation") {
        CHECK_THROWS_AS(interpolation_ratio(u, p2, 1.0, 1, 2), std::invalid_argument);
        CHECK_THROWS_AS(interpolation_ratio(u, p2, 2.0, 2, 2), std::invalid_argument);
    }
}

TEST_CASE("multiplication map") {
    const LebesgueExponent p2(2.0);
    SUBCASE("k = 0 is an exact isometry") {
        auto res = multiplication_map_ratio([](double x) { return std::exp(-x); }, p2, 2.0, 0);
        CHECK(res.forward.ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.forward.refinement_trend == Trend::stable);
    }
    SUBCASE("k = 2 on an interior bump: finite, stable, invertible") {
        auto bump = [](double x) {
            const double u = (x - 3.0) / 2.0;
            return std::abs(u) < 1.0 ? std::exp(-x * x / 9.0) * std::exp(1.0 - 1.0 / (1.0 - u * u))
                                     : 0.0;
        };
        auto res = multiplication_map_ratio(bump, p2, 2.0, 2);
        CHECK(res.forward.refinement_trend == Trend::stable);
        CHECK(res.forward.ratio > 0.0);
        CHECK(res.inverse_ratio > 0.0);
        CHECK(res.roundtrip_error < 1e-12);
    }
    SUBCASE("range validation") {
        CHECK_THROWS_AS(
            multiplication_map_ratio([](double x) { return x; }, p2, -1.5, 0),
            std::invalid_argument);
    }
}

TEST_CASE("Schur constants") {
    SUBCASE("frozen high-precision references at (p,gamma) = (2,2)") {
        auto sc = schur_constants(2.0, 2.0);
        CHECK(!sc.A.divergent);
        CHECK(!sc.B.divergent);
        CHECK(sc.A.value == doctest::Approx(3.77391177753).epsilon(1e-4));
        CHECK(sc.B.value == doctest::Approx(1.772453850905516).epsilon(1e-3));
    }
    SUBCASE("the kernel depends only on (gamma+1)/p") {
        auto a = schur_constants(2.0, 2.0);
        auto b = schur_constants(1.5, 1.25); // same exponent 1.5
        CHECK(a.A.value == doctest::Approx(b.A.value).epsilon(1e-10));
    }
    SUBCASE("p = 1 case: B finite at gamma = 0.5") {
        auto sc = schur_constants(1.0, 0.5);
        CHECK(!sc.B.divergent);
        CHECK(sc.B.value == doctest::Approx(1.772453850905516).epsilon(1e-3));
    }
    SUBCASE("A diverges at gamma = 2p-1") {
        auto sc = schur_constants(2.0, 3.0);
        CHECK(sc.A.divergent);
    }
    SUBCASE("stable to 1% under quadrature refinement") {
        auto coarse = schur_constants(2.0, 2.5, 8);
        auto fine = schur_constants(2.0, 2.5, 16);
        CHECK(std::abs(coarse.A.value - fine.A.value) / fine.A.value < 0.01);
        CHECK(std::abs(coarse.B.value - fine.B.value) / fine.B.value < 0.01);
        CHECK(fine.A.value == doctest::Approx(6.98295799747).epsilon(1e-4));
    }
}

TEST_CASE("sharpness probe") {
    const LebesgueExponent p2(2.0);
    SUBCASE("(p,gamma,beta) = (2,3,0.75): finite norm, log-power image growth") {
        auto probe = sharpness_probe(p2, 3.0, 0.75, 0.25);
        CHECK(!probe.data_norm_divergent);
        CHECK(probe.data_norm > 0.0);
        CHECK(probe.truncated_image[0] < probe.truncated_image[1]);
        CHECK(probe.truncated_image[1] < probe.truncated_image[2]);
        CHECK(probe.fit_residual < 0.05);
        CHECK(probe.pass);
    }
    SUBCASE("beta = 1/p: the data norm itself diverges") {
        auto probe = sharpness_probe(p2, 3.0, 0.5, 0.25);
        CHECK(probe.data_norm_divergent);
        CHECK(!probe.pass);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(sharpness_probe(p2, 2.0, 0.75, 0.25), std::invalid_argument);
        CHECK_THROWS_AS(sharpness_probe(p2, 3.0, 1.5, 0.25), std::invalid_argument);
    }
}
