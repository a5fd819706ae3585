#pragma once

#include "heatcalc/inequality.hpp"
#include "heatcalc/report.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heatcalc {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CheckSpec {
    std::string id;
    // parameter lattice in declaration order
    std::vector<std::pair<std::string, std::vector<double>>> lattice;
    bool expect_divergent = false;
};

struct SweepConfig {
    std::vector<CheckSpec> checks;
    GridParams grid{256, 40.0, 3.0};
    std::map<std::string, double> tolerances;
    std::string output_dir = ".";
};

/// Flat text config: one directive per line.
///   output_dir <path>
///   grid n=<int> xmax=<real> grading=<real>
///   tol <name> <value>
///   check <id> [param=v1,v2,...]... [expect=divergent]
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

enum class RowStatus { pass, fail, expected_divergence_confirmed };

struct SweepRow {
    std::string check;
    std::map<std::string, double> params;
    double value = 0.0;
    double bound = 0.0;
    RowStatus pass = RowStatus::fail;
    std::string trend = "stable";
    std::string error; ///< error class when the row failed by exception
    std::int64_t runtime_ms = 0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Registered check ids, alphabetical.
std::vector<std::string> known_checks();

/// Runs one check at a parameter point. Throws ConfigError for unknown ids.
SweepRow run_check(const std::string& id, const std::map<std::string, double>& params,
                   const GridParams& grid, const std::map<std::string, double>& tolerances);

/// Runs the full lattice; rows are dispatched to a worker pool capped by
/// HEATCALC_THREADS and returned sorted by (check order, lattice index).
/// A failing row never aborts the sweep.
SweepResult run_sweep(const SweepConfig& config);

/// CSV columns exactly:
/// check,p,gamma,lambda,t,extra_params,value,bound,pass,trend,n,X_max
std::string emit_csv(const SweepResult& result, const GridParams& grid);
std::string emit_json(const SweepResult& result, const GridParams& grid);
std::string emit_gnuplot(const SweepResult& result);
SweepResult parse_sweep_result_json(const std::string& text, GridParams* grid_out = nullptr);

/// Writes result.<csv|json|dat> under output_dir; returns the paths.
std::vector<std::string> emit_report(const SweepResult& result, const SweepConfig& config,
                                     const std::string& format);

} // namespace heatcalc
