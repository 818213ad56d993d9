#ifndef MINORANT_CONFIG_HPP
#define MINORANT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minorant/bkw.hpp"
#include "minorant/bounds.hpp"
#include "minorant/cascade.hpp"
#include "minorant/domination.hpp"
#include "minorant/kernel.hpp"
#include "minorant/noncutoff.hpp"
#include "minorant/upheaval.hpp"

namespace minorant {

struct BkwSpec {
    BKWState state;
    bool rate_auto = false;  // derive the rate from the kernel (m2/4)
    double t_start = 0.0;

    BKWState resolved(const CollisionKernel& kernel) const;
};

struct SolutionSpec {
    enum class Type { Bkw, Solver };
    Type type = Type::Bkw;
    BkwSpec bkw;
    // solver-backed solution, initialized from the BKW profile at t = 0
    double t_end = 1.0;
    double dt = 0.0;
    long samples_per_node = 20000;
    VelocityGridSpec grid;
};

struct VerifySpec {
    std::string certificate_path;
    SolutionSpec solution;
    std::vector<double> times;
    VelocityGridSpec grid;
    double tolerance = 0.0;
    std::string report_path = "domination.json";
};

// Parsed batch configuration; one well-known structured-text format (JSON),
// all file formats versioned.
struct RunConfig {
    std::uint64_t seed = 1;
    CollisionKernel kernel;

    bool bounds_from_bkw = false;
    AprioriBounds bounds;
    BkwSpec bkw;

    Regime regime = Regime::Cutoff;
    double tau = 0.5;
    CascadeConfig cascade;
    ScheduleConfig schedule;

    std::optional<std::string> calibration_path;
    UniversalConstants constants;

    long calibration_samples = 100000;
    std::optional<std::vector<SpreadingSample>> calibration_plan;

    std::string out_certificate = "certificate.json";
    std::string out_trace = "trace.csv";
    std::string out_calibration = "calibration.json";

    std::optional<VerifySpec> verify;

    // resolves from_bkw bounds and calibration-file constants
    AprioriBounds resolved_bounds() const;
    UniversalConstants resolved_constants() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const nlohmann::json& j);

}  // namespace minorant

#endif
