#include "heatcalc/pde.hpp"
#include "heatcalc/report.hpp"
#include "heatcalc/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace heatcalc;

namespace {

int exit_code_of(const SweepResult& result) {
    for (const auto& row : result.rows) {
        if (row.pass == RowStatus::fail) return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatcalc: numerical checks for the weighted Dirichlet heat calculus"};
    app.require_subcommand(1);

    // ---- check ----
    auto* check = app.add_subcommand("check", "run a single named check");
    std::string check_name;
    double opt_p = 2.0, opt_gamma = 0.0, opt_lambda = 1.0, opt_t = 0.25;
    std::size_t opt_n = 256;
    double opt_xmax = 40.0, opt_grading = 3.0;
    std::vector<std::string> extra_params;
    check->add_option("name", check_name, "check id (see --list)")->required();
    check->add_option("--p", opt_p, "integrability exponent");
    check->add_option("--gamma", opt_gamma, "weight exponent");
    check->add_option("--lambda", opt_lambda, "spectral parameter");
    check->add_option("--t", opt_t, "time parameter");
    check->add_option("--n", opt_n, "grid size");
    check->add_option("--xmax", opt_xmax, "truncation radius");
    check->add_option("--grading", opt_grading, "grading exponent");
    check->add_option("--param", extra_params, "extra key=value parameters")
        ->expected(-1);

    auto* list = app.add_subcommand("list", "list known check ids");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "run a sweep configuration");
    std::string config_path;
    sweep->add_option("config", config_path, "sweep config file")->required();
    std::string sweep_format = "csv";
    sweep->add_option("--format", sweep_format, "csv|json|gnuplot-dat");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "run a PDE solver and export the solution");
    std::string solve_kind;
    solve->add_option("kind", solve_kind, "elliptic|heat|boundary")->required();
    double s_lambda = 1.0, s_p = 2.0, s_gamma = 2.0, s_alpha = 0.3, s_mu = 0.0, s_q = 2.0;
    std::size_t s_n = 256, s_nt = 128;
    double s_xmax = 20.0, s_grading = 3.0, s_tmax = 1.0;
    std::string out_prefix = "solution";
    solve->add_option("--lambda", s_lambda);
    solve->add_option("--p", s_p);
    solve->add_option("--q", s_q);
    solve->add_option("--gamma", s_gamma);
    solve->add_option("--alpha", s_alpha, "boundary data exponent g = t^alpha");
    solve->add_option("--mu", s_mu, "temporal weight exponent");
    solve->add_option("--n", s_n);
    solve->add_option("--nt", s_nt);
    solve->add_option("--xmax", s_xmax);
    solve->add_option("--grading", s_grading);
    solve->add_option("--tmax", s_tmax);
    solve->add_option("--out", out_prefix, "output path prefix");

    // ---- report ----
    auto* report = app.add_subcommand("report", "re-emit a sweep result");
    std::string result_path, report_format = "csv", report_dir = ".";
    report->add_option("result", result_path, "result.json from a sweep")->required();
    report->add_option("--format", report_format, "csv|json|gnuplot-dat");
    report->add_option("--out", report_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& id : known_checks()) std::cout << id << '\n';
            return 0;
        }
        if (check->parsed()) {
            std::map<std::string, double> params;
            if (check->count("--p")) params["p"] = opt_p;
            if (check->count("--gamma")) params["gamma"] = opt_gamma;
            if (check->count("--lambda")) params["lambda"] = opt_lambda;
            if (check->count("--t")) params["t"] = opt_t;
            for (const auto& kv : extra_params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--param expects key=value, got '" + kv + "'");
                params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            const GridParams grid{opt_n, opt_xmax, opt_grading};
            auto row = run_check(check_name, params, grid, {});
            NormReport rep;
            rep.check = row.check;
            rep.params = row.params;
            rep.value = row.value;
            rep.bound = row.bound;
            rep.pass = row.pass != RowStatus::fail;
            rep.grid = grid;
            std::cout << rep.to_json() << '\n';
            return row.pass == RowStatus::fail ? 1 : 0;
        }
        if (sweep->parsed()) {
            const auto config = load_sweep_config(config_path);
            const auto result = run_sweep(config);
            for (const auto& path : emit_report(result, config, sweep_format)) {
                std::cerr << "wrote " << path << '\n';
            }
            for (const auto& row : result.rows) {
                std::cerr << row.check << " -> " << (row.pass == RowStatus::fail ? "FAIL" : "ok")
                          << " (value " << row.value << ")\n";
            }
            return exit_code_of(result);
        }
        if (solve->parsed()) {
            const LebesgueExponent p(s_p), q(s_q);
            auto xg = make_graded_grid(s_n, s_xmax, s_grading);
            if (solve_kind == "elliptic") {
                auto f = GridFunction::sample(xg, [](double x) { return 2.0 * std::exp(-x); });
                auto sol = solve_elliptic(f, s_lambda, p, s_gamma);
                // single-row CSV via the space-time exporter
                SpaceTimeFunction u(make_time_grid(8, 1.0), xg);
                for (std::size_t i = 0; i < u.nt(); ++i)
                    for (std::size_t j = 0; j < u.nx(); ++j) u.at(i, j) = sol.u[j];
                export_solution(u, {{"lambda", s_lambda}, {"p", s_p}, {"gamma", s_gamma}},
                                out_prefix);
                std::cout << sol.report.to_json() << '\n';
            } else if (solve_kind == "heat") {
                auto tg = make_time_grid(s_nt, s_tmax);
                SpaceTimeFunction f(tg, xg);
                for (std::size_t i = 0; i < f.nt(); ++i)
                    for (std::size_t j = 0; j < f.nx(); ++j)
                        f.at(i, j) = std::sin(2.0 * tg->node(i)) * xg->node(j) *
                                     std::exp(-xg->node(j));
                auto sol = solve_heat_forced(f, s_lambda, p, q, s_gamma, s_mu);
                export_solution(sol.u,
                                {{"lambda", s_lambda},
                                 {"p", s_p},
                                 {"q", s_q},
                                 {"gamma", s_gamma},
                                 {"mu", s_mu}},
                                out_prefix);
                std::cout << sol.report.to_json() << '\n';
            } else if (solve_kind == "boundary") {
                auto tg = make_time_grid(s_nt, s_tmax);
                auto data_tg = make_time_grid(512, s_tmax);
                auto g = BoundaryData::sample(
                    data_tg, [&](double t) { return std::pow(t, s_alpha); });
                auto sol = solve_heat_boundary(g, p, s_gamma, tg, xg);
                export_solution(
                    sol.u, {{"p", s_p}, {"gamma", s_gamma}, {"alpha", s_alpha}, {"delta", sol.delta}},
                    out_prefix);
                std::cout << sol.report.to_json() << '\n';
            } else {
                throw ConfigError("solve kind must be elliptic|heat|boundary");
            }
            return 0;
        }
        if (report->parsed()) {
            std::ifstream in(result_path);
            if (!in) throw std::runtime_error("cannot open " + result_path);
            std::stringstream buf;
            buf << in.rdbuf();
            GridParams grid;
            auto result = parse_sweep_result_json(buf.str(), &grid);
            SweepConfig cfg;
            cfg.grid = grid;
            cfg.output_dir = report_dir;
            for (const auto& path : emit_report(result, cfg, report_format)) {
                std::cerr << "wrote " << path << '\n';
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
