#ifndef MINORANT_DOMINATION_HPP
#define MINORANT_DOMINATION_HPP

#include <functional>
#include <vector>

#include <json.hpp>

#include "minorant/certificate.hpp"
#include "minorant/grid.hpp"

namespace minorant {

struct VelocityGridSpec {
    int dimension = 3;
    int points_per_axis = 64;
    double v_max = 8.0;
};

struct DominationReport {
    double min_margin = 0.0;
    double argmin_t = 0.0;
    Vec argmin_v;
    bool pass = false;
    double tolerance = 0.0;

    nlohmann::json to_json() const;
};

// margin(t, v) = solution(t, v) - certificate value(v) over the time set and
// velocity grid; pass means min margin >= -tolerance. Failure is a report
// outcome, not an exception.
DominationReport check_domination(
    const Certificate& cert,
    const std::function<double(double, const Vec&)>& solution,
    const std::vector<double>& times, const VelocityGridSpec& grid,
    double tolerance = 0.0);

}  // namespace minorant

#endif
