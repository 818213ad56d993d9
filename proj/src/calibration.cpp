#include "minorant/calibration.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "minorant/errors.hpp"

namespace minorant {

namespace {

struct Fixture {
    std::string name;
    GridDistribution grid;
};

std::vector<Fixture> fixture_family(int dimension, int grid_points,
                                    double v_max) {
    std::vector<Fixture> out;
    Vec origin = Vec::zero(dimension);
    Vec offset = Vec::zero(dimension);
    offset[0] = 1.0;
    out.push_back({"maxwellian_theta_0.5",
                   make_maxwellian_grid(dimension, grid_points, v_max, 1.0, 0.5,
                                        origin)});
    out.push_back({"maxwellian_theta_1",
                   make_maxwellian_grid(dimension, grid_points, v_max, 1.0, 1.0,
                                        origin)});
    out.push_back({"maxwellian_theta_2",
                   make_maxwellian_grid(dimension, grid_points, v_max, 1.0, 2.0,
                                        origin)});
    out.push_back({"maxwellian_offset",
                   make_maxwellian_grid(dimension, grid_points, v_max, 1.0, 1.0,
                                        offset)});
    const double ball_height =
        1.0 / ball_volume(dimension);  // unit mass indicator
    out.push_back({"ball_indicator",
                   make_ball_indicator_grid(dimension, grid_points, v_max, 1.0,
                                            ball_height, origin)});
    Fixture mixture{"mixture",
                    make_maxwellian_grid(dimension, grid_points, v_max, 0.5, 1.0,
                                         origin)};
    const GridDistribution ball = make_ball_indicator_grid(
        dimension, grid_points, v_max, 1.0, 0.5 * ball_height, offset);
    for (std::size_t i = 0; i < mixture.grid.node_count(); ++i) {
        mixture.grid[i] += ball[i];
    }
    out.push_back(std::move(mixture));
    return out;
}

std::vector<Vec> velocity_samples(int dimension, double reach) {
    std::vector<Vec> out;
    out.push_back(Vec::zero(dimension));
    const double radii[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    for (double frac : radii) {
        for (int axis = 0; axis < dimension; ++axis) {
            Vec v = Vec::zero(dimension);
            v[axis] = frac * reach / 8.0;
            out.push_back(v);
            v[axis] = -frac * reach / 8.0;
            out.push_back(v);
        }
        Vec diag = Vec::zero(dimension);
        for (int axis = 0; axis < dimension; ++axis) {
            diag[axis] = frac * reach / (8.0 * std::sqrt(double(dimension)));
        }
        out.push_back(diag);
    }
    return out;
}

}  // namespace

LossCalibration calibrate_loss_cst(const CollisionKernel& kernel,
                                   int grid_points, double v_max) {
    const double n_b = angular_mass_nb(kernel);
    LossCalibration out;
    double overall = 0.0;
    for (const Fixture& fx : fixture_family(kernel.dimension, grid_points,
                                            v_max)) {
        const LocalFunctionals lf =
            local_functionals(fx.grid, kernel.gamma_tilde());
        double hydro = lf.e + lf.rho;
        if (kernel.gamma < 0.0 && !kernel.mollified) {
            // match the case (ii) formula; any admissible p works for
            // calibration as long as the same norm feeds the bound
            const double p =
                kernel.dimension / (kernel.dimension + kernel.gamma) + 0.5;
            hydro += local_functionals(fx.grid, kernel.gamma_tilde(), p).lp;
        }
        double max_ratio = 0.0;
        for (const Vec& v : velocity_samples(kernel.dimension, 2.0 * v_max)) {
            const double lv = loss_evaluate(kernel, fx.grid, v, true);
            const double weight =
                std::pow(std::sqrt(1.0 + v.norm2()), kernel.gamma_plus());
            max_ratio = std::max(max_ratio, lv / (n_b * kernel.C_phi * hydro *
                                                  weight));
        }
        out.entries.push_back({fx.name, max_ratio});
        overall = std::max(overall, max_ratio);
    }
    out.cst_CL = 1.5 * overall;
    return out;
}

UpheavalCalibration calibrate_upheaval_cst(const CollisionKernel& kernel,
                                           const Delta0Rule& rule,
                                           long samples, std::uint64_t seed) {
    UpheavalCalibration out;
    const double ell = angular_infimum_ellb(kernel);
    const int dim = kernel.dimension;
    Rng base(seed);

    const double thetas[] = {0.5, 1.0};
    double min_ratio = std::numeric_limits<double>::infinity();
    int fixture_index = 0;
    for (double theta : thetas) {
        // fixture g: unit-mass Maxwellian, truncated to B(0, R0)
        const int grid_points = 24;
        const double v_max = 6.0;
        const GridDistribution g = make_maxwellian_grid(
            dim, grid_points, v_max, 1.0, theta, Vec::zero(dim));
        const LocalFunctionals lf = local_functionals(g, kernel.gamma_tilde());
        const double R0 = std::sqrt(2.0 * lf.e / lf.rho);

        double delta0;
        if (rule.kind == Delta0Rule::Kind::User) {
            delta0 = std::min(rule.delta0, R0);
        } else {
            delta0 = R0 * std::exp(-rule.kappa1 *
                                   (lf.h + rule.kappa0 * (lf.e + lf.rho)) /
                                   lf.rho);
        }

        auto g_trunc = [&](const Vec& v) {
            return v.norm() <= R0 ? g.at(v) : 0.0;
        };

        // inner field Q+(g^R0, g^R0) on a coarse grid
        const int inner_points = 20;
        const double inner_vmax = std::sqrt(2.0) * R0 * 1.02;
        GridDistribution inner(dim, inner_points, inner_vmax);
        for (std::size_t i = 0; i < inner.node_count(); ++i) {
            const Vec v = inner.node(i);
            if (v.norm() > std::sqrt(2.0) * R0) continue;
            inner[i] = qplus_general(kernel, g_trunc, R0, g_trunc, R0, v,
                                     samples / 4,
                                     base.stream(1000 + i).next_u64())
                           .value;
        }
        auto inner_eval = [&](const Vec& v) { return inner.at(v); };

        // min of the twice-iterated gain over the seed ball around vbar = 0
        double triple_min = std::numeric_limits<double>::infinity();
        const int probes = 8;
        for (int k = 0; k <= probes; ++k) {
            Vec v = Vec::zero(dim);
            v[k % dim] = delta0 * static_cast<double>(k) / probes;
            const double value =
                qplus_general(kernel, g_trunc, R0, inner_eval,
                              std::sqrt(2.0) * R0, v, samples,
                              base.stream(2000 + k).next_u64())
                    .value;
            triple_min = std::min(triple_min, value);
        }

        const double formula = ell * kernel.c_phi *
                               std::pow(R0, kernel.gamma - (3.0 * dim - 1.0)) *
                               std::pow(delta0, 2.0 * dim);
        if (!(formula > 0.0)) {
            throw DegenerateSample("upheaval formula denominator vanished");
        }
        UpheavalCalibration::Entry e;
        e.fixture = "maxwellian_theta_" + std::to_string(theta);
        e.triple_gain_min = triple_min;
        e.formula = formula;
        e.ratio = triple_min / formula;
        out.entries.push_back(e);
        min_ratio = std::min(min_ratio, e.ratio);
        ++fixture_index;
    }
    out.cst_up = min_ratio / 1.5;
    if (!(out.cst_up > 0.0)) {
        throw DegenerateSample("upheaval calibration produced no positive ratio");
    }
    return out;
}

nlohmann::json CalibrationRecord::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["seed"] = seed;
    j["cst_spread"] = csts.cst_spread;
    j["cst_CL"] = csts.cst_CL;
    j["cst_up"] = csts.cst_up;
    j["cst_Q1"] = csts.cst_Q1;
    j["spreading"] = nlohmann::json::object();
    j["spreading"]["xi_exponent_mode"] =
        spreading.mode == XiExponentMode::Stated ? "stated" : "proofstep";
    j["spreading"]["samples"] = nlohmann::json::array();
    for (const auto& e : spreading.entries) {
        nlohmann::json s;
        s["r"] = e.sample.r;
        s["R"] = e.sample.R;
        s["xi"] = e.sample.xi;
        nlohmann::json v = nlohmann::json::array();
        for (int d = 0; d < e.sample.v.dim; ++d) v.push_back(e.sample.v[d]);
        s["v"] = v;
        s["qplus"] = e.qplus;
        s["std_error"] = e.std_error;
        s["formula"] = e.formula;
        s["ratio"] = e.ratio;
        j["spreading"]["samples"].push_back(s);
    }
    j["loss"] = nlohmann::json::array();
    for (const auto& e : loss.entries) {
        j["loss"].push_back({{"fixture", e.fixture}, {"max_ratio", e.max_ratio}});
    }
    j["upheaval"] = nlohmann::json::array();
    for (const auto& e : upheaval.entries) {
        j["upheaval"].push_back({{"fixture", e.fixture},
                                 {"triple_gain_min", e.triple_gain_min},
                                 {"formula", e.formula},
                                 {"ratio", e.ratio}});
    }
    return j;
}

UniversalConstants CalibrationRecord::constants_from_json(
    const nlohmann::json& j) {
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != 1) {
        throw IoError("unsupported calibration format_version");
    }
    UniversalConstants c;
    c.cst_spread = j.at("cst_spread").get<double>();
    c.cst_CL = j.at("cst_CL").get<double>();
    c.cst_up = j.at("cst_up").get<double>();
    c.cst_Q1 = j.at("cst_Q1").get<double>();
    return c;
}

void CalibrationRecord::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write calibration " + path);
    out << to_json().dump(2) << "\n";
}

UniversalConstants CalibrationRecord::load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open calibration " + path);
    nlohmann::json j;
    in >> j;
    return constants_from_json(j);
}

CalibrationRecord run_full_calibration(
    const CollisionKernel& kernel, const Delta0Rule& rule, long samples,
    std::uint64_t seed, XiExponentMode mode,
    const std::vector<SpreadingSample>* plan) {
    CalibrationRecord rec;
    rec.seed = seed;
    const std::vector<SpreadingSample> default_plan =
        default_spreading_plan(kernel.dimension);
    rec.spreading = calibrate_spreading_cst(kernel, plan ? *plan : default_plan,
                                            samples, seed, mode);
    rec.loss = calibrate_loss_cst(kernel);
    rec.upheaval = calibrate_upheaval_cst(kernel, rule, samples, seed + 1);
    rec.csts.cst_spread = rec.spreading.cst_spread;
    rec.csts.cst_CL = rec.loss.cst_CL;
    rec.csts.cst_up = rec.upheaval.cst_up;
    rec.csts.cst_Q1 = 1.0;
    return rec;
}

}  // namespace minorant
