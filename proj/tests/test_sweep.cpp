#include <doctest.h>

#include "heatcalc/sweep.hpp"

#include <cstdlib>

using namespace heatcalc;

TEST_CASE("sweep config parsing") {
    SUBCASE("full config") {
        auto cfg = parse_sweep_config(
            "# comment\n"
            "output_dir out\n"
            "grid n=128 xmax=20 grading=2\n"
            "tol hardy_slack 0.03\n"
            "check hardy_ratio p=2 gamma=0.5,2\n"
            "check schur_a p=2 gamma=3 expect=divergent\n");
        CHECK(cfg.output_dir == "out");
        CHECK(cfg.grid.n == 128);
        CHECK(cfg.grid.x_max == 20.0);
        CHECK(cfg.tolerances.at("hardy_slack") == 0.03);
        REQUIRE(cfg.checks.size() == 2);
        CHECK(cfg.checks[0].id == "hardy_ratio");
        CHECK(cfg.checks[0].lattice[1].second.size() == 2);
        CHECK(cfg.checks[1].expect_divergent);
    }
    SUBCASE("bad directive") {
        CHECK_THROWS_AS(parse_sweep_config("frobnicate 3\n"), ConfigError);
    }
    SUBCASE("unknown check id is a config error listing known ids") {
        SweepConfig cfg;
        cfg.checks.push_back({"no_such_check", {}, false});
        try {
            run_sweep(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("known checks") != std::string::npos);
            CHECK(std::string(e.what()).find("hardy_ratio") != std::string::npos);
        }
    }
}

TEST_CASE("sweep execution") {
    SUBCASE("empty checks give an empty result") {
        SweepConfig cfg;
        auto result = run_sweep(cfg);
        CHECK(result.rows.empty());
    }
    SUBCASE("hardy lattice: 2 rows, both pass") {
        SweepConfig cfg;
        cfg.grid = {128, 40.0, 3.0};
        cfg.checks.push_back(
            {"hardy_ratio", {{"p", {2.0}}, {"gamma", {0.5, 2.0}}}, false});
        auto result = run_sweep(cfg);
        REQUIRE(result.rows.size() == 2);
        for (const auto& row : result.rows) {
            CHECK(row.pass == RowStatus::pass);
            CHECK(row.value > 0.0);
            CHECK(row.value <= row.bound * 1.02);
        }
    }
    SUBCASE("expected divergence confirmed at gamma = 2p-1") {
        SweepConfig cfg;
        cfg.checks.push_back({"schur_a", {{"p", {2.0}}, {"gamma", {3.0}}}, true});
        auto result = run_sweep(cfg);
        REQUIRE(result.rows.size() == 1);
        CHECK(result.rows[0].pass == RowStatus::expected_divergence_confirmed);
        CHECK(result.rows[0].trend == "growing");
    }
    SUBCASE("a throwing row is isolated and carries the error") {
        SweepConfig cfg;
        cfg.checks.push_back({"sharpness_probe",
                              {{"p", {2.0}}, {"gamma", {1.0}}, {"beta", {0.75}}},
                              false}); // gamma below 2p-1: argument error
        cfg.checks.push_back({"kernel_value", {}, false});
        auto result = run_sweep(cfg);
        REQUIRE(result.rows.size() == 2);
        CHECK(result.rows[0].pass == RowStatus::fail);
        CHECK(!result.rows[0].error.empty());
        CHECK(result.rows[1].pass == RowStatus::pass);
    }
}

TEST_CASE("report emission") {
    SweepConfig cfg;
    cfg.grid = {128, 40.0, 3.0};
    cfg.checks.push_back({"kernel_value", {}, false});
    cfg.checks.push_back({"semigroup_law",
                          {{"p", {2.0}}, {"gamma", {0.0}}, {"s", {0.1}}, {"t", {0.2}}},
                          false});
    auto result = run_sweep(cfg);

    SUBCASE("CSV has the exact column header and one line per row") {
        const auto csv = emit_csv(result, cfg.grid);
        CHECK(csv.rfind("check,p,gamma,lambda,t,extra_params,value,bound,pass,trend,n,X_max\n",
                        0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + std::ptrdiff_t(result.rows.size()));
    }
    SUBCASE("JSON round-trips") {
        const auto text = emit_json(result, cfg.grid);
        GridParams grid;
        auto back = parse_sweep_result_json(text, &grid);
        REQUIRE(back.rows.size() == result.rows.size());
        CHECK(grid.n == cfg.grid.n);
        for (std::size_t i = 0; i < back.rows.size(); ++i) {
            CHECK(back.rows[i].check == result.rows[i].check);
            CHECK(back.rows[i].value == result.rows[i].value);
            CHECK(back.rows[i].bound == result.rows[i].bound);
            CHECK(back.rows[i].pass == result.rows[i].pass);
            CHECK(back.rows[i].trend == result.rows[i].trend);
            CHECK(back.rows[i].params == result.rows[i].params);
            CHECK(back.rows[i].seed == result.rows[i].seed);
            CHECK(back.rows[i].runtime_ms == result.rows[i].runtime_ms);
        }
        // and the re-emitted JSON is byte-identical
        CHECK(emit_json(back, grid) == text);
    }
    SUBCASE("gnuplot blocks separated by two blank lines, one per check") {
        const auto dat = emit_gnuplot(result);
        CHECK(dat.find("# check kernel_value") != std::string::npos);
        CHECK(dat.find("# check semigroup_law") != std::string::npos);
        std::size_t blocks = 1, pos = 0;
        while ((pos = dat.find("\n\n\n", pos)) != std::string::npos) {
            ++blocks;
            pos += 3;
        }
        CHECK(blocks == 2);
    }
    SUBCASE("byte-identical CSV across two runs") {
        auto again = run_sweep(cfg);
        CHECK(emit_csv(again, cfg.grid) == emit_csv(result, cfg.grid));
    }
    SUBCASE("unsupported format") {
        CHECK_THROWS_AS(emit_report(result, cfg, "xml"), std::invalid_argument);
    }
}
