#include "minorant/domination.hpp"

#include <cmath>
#include <limits>

#include "minorant/errors.hpp"

namespace minorant {

nlohmann::json DominationReport::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["min_margin"] = min_margin;
    j["argmin_t"] = argmin_t;
    nlohmann::json v = nlohmann::json::array();
    for (int d = 0; d < argmin_v.dim; ++d) v.push_back(argmin_v[d]);
    j["argmin_v"] = v;
    j["pass"] = pass;
    j["tolerance"] = tolerance;
    return j;
}

DominationReport check_domination(
    const Certificate& cert,
    const std::function<double(double, const Vec&)>& solution,
    const std::vector<double>& times, const VelocityGridSpec& grid,
    double tolerance) {
    cert.validate();
    if (times.empty()) throw ConfigError("domination check needs times");
    for (double t : times) {
        if (t < cert.tau * (1.0 - 1e-12)) {
            throw ConfigError(
                "certificate is stamped for t >= tau; requested t = " +
                std::to_string(t));
        }
    }
    if (grid.dimension != cert.dimension) {
        throw ConfigError("grid dimension does not match the certificate");
    }

    GridDistribution nodes(grid.dimension, grid.points_per_axis, grid.v_max);
    DominationReport report;
    report.tolerance = tolerance;
    report.min_margin = std::numeric_limits<double>::infinity();
    for (double t : times) {
        for (std::size_t i = 0; i < nodes.node_count(); ++i) {
            const Vec v = nodes.node(i);
            const double margin = solution(t, v) - cert.value(v);
            if (margin < report.min_margin) {
                report.min_margin = margin;
                report.argmin_t = t;
                report.argmin_v = v;
            }
        }
    }
    report.pass = report.min_margin >= -tolerance;
    return report;
}

}  // namespace minorant
