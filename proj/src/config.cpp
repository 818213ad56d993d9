#include "minorant/config.hpp"

#include <fstream>

#include "minorant/calibration.hpp"
#include "minorant/errors.hpp"

namespace minorant {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
                              const std::string& where) {
    if (!j.contains(key)) {
        throw ConfigError("missing field '" + key + "' in " + where);
    }
    return j.at(key);
}

double get_number(const nlohmann::json& j, const std::string& key,
                  const std::string& where) {
    const auto& v = require(j, key, where);
    if (!v.is_number()) {
        throw ConfigError("field '" + key + "' in " + where +
                          " must be a number");
    }
    return v.get<double>();
}

CollisionKernel parse_kernel(const nlohmann::json& j) {
    CollisionKernel k;
    k.dimension = static_cast<int>(get_number(j, "dimension", "kernel"));
    k.gamma = get_number(j, "gamma", "kernel");
    k.nu = get_number(j, "nu", "kernel");
    k.b0 = get_number(j, "b0", "kernel");
    k.c_phi = get_number(j, "c_phi", "kernel");
    k.C_phi = get_number(j, "C_phi", "kernel");
    k.mollified = require(j, "mollified", "kernel").get<bool>();

    const auto& p = require(j, "profile", "kernel");
    std::string preset;
    if (p.is_string()) {
        preset = p.get<std::string>();
    } else if (p.contains("table")) {
        k.profile =
            AngularProfile::tabulated_from_file(p.at("table").get<std::string>());
        k.validate();
        return k;
    } else {
        preset = require(p, "preset", "kernel.profile").get<std::string>();
    }
    if (preset == "constant") {
        const double value =
            p.is_object() && p.contains("value") ? p.at("value").get<double>()
                                                 : k.b0;
        k.profile = AngularProfile::constant(value);
    } else if (preset == "inverse_power_law") {
        k.profile = AngularProfile::inverse_power_law(k.b0, k.nu, k.dimension);
    } else {
        throw ConfigError("unknown profile preset '" + preset + "'");
    }
    k.validate();
    return k;
}

BkwSpec parse_bkw(const nlohmann::json& j, int dimension) {
    BkwSpec spec;
    spec.state.dimension = dimension;
    spec.state.S0 = get_number(j, "S0", "bkw");
    if (j.contains("rate") && j.at("rate").is_string()) {
        if (j.at("rate").get<std::string>() != "auto") {
            throw ConfigError("bkw rate must be a number or \"auto\"");
        }
        spec.rate_auto = true;
    } else if (j.contains("rate")) {
        spec.state.rate = j.at("rate").get<double>();
    } else {
        spec.rate_auto = true;
    }
    if (j.contains("t_start")) spec.t_start = j.at("t_start").get<double>();
    return spec;
}

AprioriBounds parse_bounds(const nlohmann::json& j) {
    AprioriBounds b;
    b.rho_min = get_number(j, "rho_min", "bounds");
    b.E = get_number(j, "E", "bounds");
    b.H = get_number(j, "H", "bounds");
    if (j.contains("Eprime")) b.Eprime = j.at("Eprime").get<double>();
    if (j.contains("W")) b.W = j.at("W").get<double>();
    if (j.contains("Lp_value")) b.Lp_value = j.at("Lp_value").get<double>();
    if (j.contains("p_exponent")) b.p_exponent = j.at("p_exponent").get<double>();
    b.validate();
    return b;
}

XiExponentMode parse_xi_mode(const nlohmann::json& j, const std::string& where) {
    if (!j.contains("xi_exponent_mode")) return XiExponentMode::Stated;
    const std::string mode = j.at("xi_exponent_mode").get<std::string>();
    if (mode == "stated") return XiExponentMode::Stated;
    if (mode == "proofstep") return XiExponentMode::ProofStep;
    throw ConfigError("bad xi_exponent_mode in " + where +
                      " (stated|proofstep)");
}

Delta0Rule parse_delta0_rule(const nlohmann::json& j) {
    if (!j.contains("delta0_rule")) return Delta0Rule::entropy();
    const auto& r = j.at("delta0_rule");
    const std::string kind = require(r, "kind", "delta0_rule").get<std::string>();
    if (kind == "user") {
        return Delta0Rule::user(get_number(r, "delta0", "delta0_rule"));
    }
    if (kind == "entropy") {
        Delta0Rule rule = Delta0Rule::entropy();
        if (r.contains("kappa0")) rule.kappa0 = r.at("kappa0").get<double>();
        if (r.contains("kappa1")) rule.kappa1 = r.at("kappa1").get<double>();
        return rule;
    }
    throw ConfigError("unknown delta0_rule kind '" + kind + "'");
}

VelocityGridSpec parse_grid(const nlohmann::json& j, int dimension) {
    VelocityGridSpec g;
    g.dimension = dimension;
    g.points_per_axis =
        static_cast<int>(get_number(j, "points_per_axis", "grid"));
    g.v_max = get_number(j, "v_max", "grid");
    return g;
}

SolutionSpec parse_solution(const nlohmann::json& j, int dimension) {
    SolutionSpec s;
    const std::string type = require(j, "type", "solution").get<std::string>();
    if (type == "bkw") {
        s.type = SolutionSpec::Type::Bkw;
        s.bkw = parse_bkw(j, dimension);
    } else if (type == "solver") {
        s.type = SolutionSpec::Type::Solver;
        s.bkw = parse_bkw(j, dimension);
        s.t_end = get_number(j, "t_end", "solution");
        if (j.contains("dt")) s.dt = j.at("dt").get<double>();
        if (j.contains("samples_per_node")) {
            s.samples_per_node = j.at("samples_per_node").get<long>();
        }
        s.grid = parse_grid(require(j, "grid", "solution"), dimension);
    } else {
        throw ConfigError("unknown solution type '" + type + "'");
    }
    return s;
}

}  // namespace

BKWState BkwSpec::resolved(const CollisionKernel& kernel) const {
    BKWState s = state;
    if (rate_auto) s.rate = bkw_rate_maxwell(kernel);
    s.validate();
    return s;
}

AprioriBounds RunConfig::resolved_bounds() const {
    if (!bounds_from_bkw) return bounds;
    const BKWState state = bkw.resolved(kernel);
    std::optional<double> lp;
    if (kernel.gamma < 0.0 && !kernel.mollified) {
        lp = kernel.dimension / (kernel.dimension + kernel.gamma) + 0.5;
    }
    return bkw_bounds(state, bkw.t_start, kernel.gamma_tilde(), 48, 8.0, lp);
}

UniversalConstants RunConfig::resolved_constants() const {
    if (calibration_path) {
        return CalibrationRecord::load_constants(*calibration_path);
    }
    return constants;
}

RunConfig parse_run_config(const nlohmann::json& j) {
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != 1) {
        throw ConfigError("config needs format_version = 1");
    }
    RunConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.kernel = parse_kernel(require(j, "kernel", "config"));

    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        if (b.contains("from_bkw")) {
            cfg.bounds_from_bkw = true;
            cfg.bkw = parse_bkw(b.at("from_bkw"), cfg.kernel.dimension);
        } else {
            cfg.bounds = parse_bounds(b);
        }
    }

    if (j.contains("regime")) {
        const std::string regime = j.at("regime").get<std::string>();
        if (regime == "cutoff") {
            cfg.regime = Regime::Cutoff;
        } else if (regime == "noncutoff") {
            cfg.regime = Regime::Noncutoff;
        } else {
            throw ConfigError("regime must be cutoff or noncutoff");
        }
    }
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();

    if (j.contains("cascade")) {
        const auto& c = j.at("cascade");
        if (c.contains("xi")) cfg.cascade.xi = c.at("xi").get<double>();
        if (c.contains("n_max")) cfg.cascade.n_max = c.at("n_max").get<int>();
        cfg.cascade.xi_mode = parse_xi_mode(c, "cascade");
        cfg.cascade.delta0_rule = parse_delta0_rule(c);
    }
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        if (s.contains("kappa")) cfg.schedule.kappa = s.at("kappa").get<double>();
        if (s.contains("beta")) cfg.schedule.beta = s.at("beta").get<double>();
        if (s.contains("alpha_sched")) {
            cfg.schedule.alpha_sched = s.at("alpha_sched").get<double>();
        }
        if (s.contains("beta_geo")) {
            cfg.schedule.beta_geo = s.at("beta_geo").get<double>();
        }
        if (s.contains("xi")) cfg.schedule.xi = s.at("xi").get<double>();
        if (s.contains("n_max")) cfg.schedule.n_max = s.at("n_max").get<int>();
        cfg.schedule.xi_mode = parse_xi_mode(s, "schedule");
    }

    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        if (c.contains("calibration")) {
            cfg.calibration_path = c.at("calibration").get<std::string>();
        } else {
            cfg.constants.cst_spread = get_number(c, "cst_spread", "constants");
            cfg.constants.cst_CL = get_number(c, "cst_CL", "constants");
            cfg.constants.cst_up = get_number(c, "cst_up", "constants");
            if (c.contains("cst_Q1")) {
                cfg.constants.cst_Q1 = c.at("cst_Q1").get<double>();
            }
        }
    }
    cfg.cascade.csts = cfg.constants;

    if (j.contains("calibration")) {
        const auto& c = j.at("calibration");
        if (c.contains("samples")) {
            cfg.calibration_samples = c.at("samples").get<long>();
        }
        if (c.contains("plan")) {
            std::vector<SpreadingSample> plan;
            for (const auto& entry : c.at("plan")) {
                SpreadingSample s;
                s.r = get_number(entry, "r", "calibration.plan");
                s.R = get_number(entry, "R", "calibration.plan");
                s.xi = get_number(entry, "xi", "calibration.plan");
                s.v = Vec::zero(cfg.kernel.dimension);
                const auto& vv = require(entry, "v", "calibration.plan");
                for (int d = 0; d < cfg.kernel.dimension &&
                                d < static_cast<int>(vv.size());
                     ++d) {
                    s.v[d] = vv.at(d).get<double>();
                }
                plan.push_back(s);
            }
            cfg.calibration_plan = plan;
        }
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (o.contains("certificate")) {
            cfg.out_certificate = o.at("certificate").get<std::string>();
        }
        if (o.contains("trace")) cfg.out_trace = o.at("trace").get<std::string>();
        if (o.contains("calibration")) {
            cfg.out_calibration = o.at("calibration").get<std::string>();
        }
    }

    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        VerifySpec spec;
        spec.certificate_path =
            require(v, "certificate", "verify").get<std::string>();
        spec.solution =
            parse_solution(require(v, "solution", "verify"), cfg.kernel.dimension);
        for (const auto& t : require(v, "times", "verify")) {
            spec.times.push_back(t.get<double>());
        }
        spec.grid = parse_grid(require(v, "grid", "verify"), cfg.kernel.dimension);
        if (v.contains("tolerance")) {
            spec.tolerance = v.at("tolerance").get<double>();
        }
        if (v.contains("report")) {
            spec.report_path = v.at("report").get<std::string>();
        }
        cfg.verify = spec;
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace minorant
