#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heatcalc {

enum class Trend { stable, growing, shrinking };

std::string to_string(Trend t);

/// Classifies a refinement sequence (>= 3 levels). `growth_threshold` is the
/// per-level relative change that counts as genuine growth; anything inside
/// +-threshold is stable.
Trend classify_trend(const std::vector<double>& levels, double growth_threshold = 0.25);

struct GridParams {
    std::size_t n = 0;
    double x_max = 0.0;
    double grading = 0.0;
};

/// Outcome of one quantitative check.
struct NormReport {
    std::string check;
    std::map<std::string, double> params;
    double value = 0.0;
    double bound = 0.0; ///< reference bound; infinity means "finite expected"
    bool pass = false;
    GridParams grid;

    std::string to_json() const;
};

/// Outcome of an inequality-style check: the measured ratio against a
/// reference bound, with the extremizer and the refinement behavior.
struct RatioReport {
    double ratio = 0.0;
    double reference_bound = 0.0; ///< infinity when only finiteness is claimed
    std::string witness;
    Trend refinement_trend = Trend::stable;
    std::vector<double> levels;
};

} // namespace heatcalc
