#include "heatcalc/report.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace heatcalc {

std::string to_string(Trend t) {
    switch (t) {
        case Trend::stable: return "stable";
        case Trend::growing: return "growing";
        case Trend::shrinking: return "shrinking";
    }
    return "stable";
}

Trend classify_trend(const std::vector<double>& levels, double growth_threshold) {
    if (levels.size() < 3)
        throw std::invalid_argument("classify_trend: need at least 3 levels");
    bool all_grow = true, all_shrink = true;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double prev = levels[i - 1];
        const double cur = levels[i];
        if (prev == 0.0) {
            all_grow = all_grow && cur > 0.0;
            all_shrink = false;
            continue;
        }
        const double change = cur / prev - 1.0;
        all_grow = all_grow && change >= growth_threshold;
        all_shrink = all_shrink && change <= -growth_threshold;
    }
    if (all_grow) return Trend::growing;
    if (all_shrink) return Trend::shrinking;
    return Trend::stable;
}

std::string NormReport::to_json() const {
    nlohmann::json j;
    j["check"] = check;
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["value"] = value;
    j["bound"] = std::isinf(bound) ? nlohmann::json("finite") : nlohmann::json(bound);
    j["pass"] = pass;
    j["grid"] = {{"n", grid.n}, {"X_max", grid.x_max}, {"grading", grid.grading}};
    return j.dump();
}

} // namespace heatcalc
