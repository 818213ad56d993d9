#ifndef MINORANT_CALIBRATION_HPP
#define MINORANT_CALIBRATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "minorant/bounds.hpp"
#include "minorant/geometry.hpp"
#include "minorant/upheaval.hpp"

namespace minorant {

// Smallest safe universal constant for the loss bound: the max over a
// fixture family (Maxwellians, indicators, mixtures) and a velocity sample
// of loss_evaluate / (n_b C_phi hydro <v>^{gamma+}), times a 1.5 safety
// factor.
struct LossCalibration {
    double cst_CL = 0.0;
    struct Entry {
        std::string fixture;
        double max_ratio = 0.0;
    };
    std::vector<Entry> entries;
};

LossCalibration calibrate_loss_cst(const CollisionKernel& kernel,
                                   int grid_points = 24, double v_max = 6.0);

// Certified-by-sampling constant of the upheaval estimate: the min over
// Maxwellian fixtures of (min over the seed ball of the twice-iterated gain
// term) / (ell_b c_phi R0^{gamma-(3N-1)} delta0^{2N}), divided by 1.5.
struct UpheavalCalibration {
    double cst_up = 0.0;
    struct Entry {
        std::string fixture;
        double triple_gain_min = 0.0;
        double formula = 0.0;
        double ratio = 0.0;
    };
    std::vector<Entry> entries;
};

UpheavalCalibration calibrate_upheaval_cst(const CollisionKernel& kernel,
                                           const Delta0Rule& rule,
                                           long samples, std::uint64_t seed);

struct CalibrationRecord {
    UniversalConstants csts;
    SpreadingCalibration spreading;
    LossCalibration loss;
    UpheavalCalibration upheaval;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    static UniversalConstants constants_from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static UniversalConstants load_constants(const std::string& path);
};

CalibrationRecord run_full_calibration(
    const CollisionKernel& kernel, const Delta0Rule& rule, long samples,
    std::uint64_t seed, XiExponentMode mode,
    const std::vector<SpreadingSample>* plan = nullptr);

}  // namespace minorant

#endif
