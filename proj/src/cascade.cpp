#include "minorant/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "minorant/errors.hpp"

namespace minorant {

void CascadeConfig::validate() const {
    if (!(xi > 0.0 && xi < 1.0)) throw ConfigError("xi must lie in (0,1)");
    if (n_max < 8) throw ConfigError("n_max must be >= 8");
}

double CascadeRecursion::step_log_a(double log_a_n, double delta_n, int n) const {
    return log_prefactor + 2.0 * log_a_n + gamma_plus_dim * std::log(delta_n) +
           exponent * (n + 1.0) * std::log(xi) - (n + 1.0) * std::log(2.0);
}

double CascadeRecursion::step_delta(double delta_n, int n) const {
    return std::sqrt(2.0) * delta_n * (1.0 - std::pow(xi, n + 1.0));
}

double ce_constant(const UpheavalSeed& seed, const CollisionKernel& kernel,
                   const AprioriBounds& bounds, const UniversalConstants& csts) {
    (void)bounds;
    (void)csts;
    const double gp = kernel.gamma_plus();
    if (kernel.gamma > 1.0) throw ConfigError("C_e needs gamma <= 1");
    const double bracket_R0 =
        std::pow(std::sqrt(1.0 + seed.R0 * seed.R0), gp);
    // sup_n 2^{n gamma+/2 - n - 1}: the exponent slope gamma+/2 - 1 is
    // negative for gamma+ <= 1, so the sup is the n = 0 term 1/2
    const double sup = 0.5;
    return std::exp(-seed.C_L * bracket_R0 * seed.tau *
                    std::pow(seed.delta0, gp) * sup);
}

double accumulated_doubling_weight(int n) {
    double a = 0.0;  // A_1 = 0
    for (int k = 1; k < n; ++k) a = 2.0 * a + k;
    return n >= 1 ? a : 0.0;
}

CascadeTrace run_cascade(const UpheavalSeed& seed, const CollisionKernel& kernel,
                         const AprioriBounds& bounds,
                         const CascadeConfig& config) {
    config.validate();
    if (seed.regime != Regime::Cutoff) {
        throw ConfigError("run_cascade expects a cutoff seed");
    }
    const double ell = angular_infimum_ellb(kernel);
    const double C_e = ce_constant(seed, kernel, bounds, config.csts);

    CascadeTrace trace;
    trace.xi = config.xi;
    trace.recursion.log_prefactor =
        std::log(config.csts.cst_spread * ell * kernel.c_phi * C_e);
    trace.recursion.gamma_plus_dim = kernel.gamma + kernel.dimension;
    trace.recursion.xi = config.xi;
    trace.recursion.exponent = xi_exponent(kernel.dimension, config.xi_mode);

    trace.log_a.reserve(config.n_max + 1);
    trace.delta.reserve(config.n_max + 1);
    trace.log_a.push_back(seed.log_a0);
    trace.delta.push_back(seed.delta0);
    for (int n = 0; n < config.n_max; ++n) {
        trace.log_a.push_back(
            trace.recursion.step_log_a(trace.log_a[n], trace.delta[n], n));
        trace.delta.push_back(trace.recursion.step_delta(trace.delta[n], n));
    }

    double product = 1.0;
    for (int k = 1; k < 4096; ++k) {
        const double factor = 1.0 - std::pow(config.xi, k);
        product *= factor;
        if (std::pow(config.xi, k) < 1e-18) break;
    }
    trace.c_delta = seed.delta0 * product;
    return trace;
}

MaxwellianEnvelope envelope(const CascadeTrace& trace, const UpheavalSeed& seed,
                            const CollisionKernel& kernel,
                            const CascadeConfig& config) {
    (void)seed;
    if (trace.log_a.empty() || !(trace.c_delta > 0.0) ||
        !std::isfinite(trace.log_a[0])) {
        throw DegenerateEnvelope("cascade trace is degenerate");
    }
    MaxwellianEnvelope env;
    const int n_dim = kernel.dimension;
    env.lambda = std::pow(2.0, 0.5 * (kernel.gamma + n_dim)) *
                 std::pow(config.xi, 0.5 * n_dim + 1.0) / 2.0;
    env.lambda_branch = env.lambda > 1.0;

    // alpha candidate from the step-1 closed form: cst C_e lambda a0, with
    // cst the same spreading-constant bundle that drives the recursion
    const double log_alpha_formula =
        trace.recursion.log_prefactor + std::log(env.lambda) + trace.log_a[0];

    // certified candidate from the trace itself: min_n log a_n / 2^n with a
    // geometric bound on the never-recorded tail increments
    double log_alpha_trace = trace.log_a[0];
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        log_alpha_trace =
            std::min(log_alpha_trace, trace.log_a[n] / std::pow(2.0, double(n)));
    }
    {
        const int m = static_cast<int>(trace.log_a.size()) - 1;
        const double abs_pref = std::abs(trace.recursion.log_prefactor);
        const double abs_gd = std::abs(trace.recursion.gamma_plus_dim);
        const double abs_dlog =
            std::max(std::abs(std::log(trace.delta[0])),
                     std::abs(std::log(trace.delta.back()))) +
            0.5 * std::log(2.0) * (m + 1);
        const double a_term = abs_pref + abs_gd * abs_dlog +
                              std::abs(trace.recursion.exponent *
                                       std::log(trace.recursion.xi)) +
                              std::log(2.0);
        const double b_term = std::abs(trace.recursion.exponent *
                                       std::log(trace.recursion.xi)) +
                              std::log(2.0) + abs_gd * 0.5 * std::log(2.0);
        // sum_{k>=m} (a + b k) / 2^{k+1} = (a + b (m+1)) / 2^m
        const double tail = (a_term + b_term * (m + 1.0)) / std::pow(2.0, m);
        log_alpha_trace -= tail;
    }

    env.log_alpha = std::min({log_alpha_formula, log_alpha_trace,
                              std::log1p(-1e-6)});
    if (env.log_alpha >= 0.0) {
        env.log_alpha = std::log1p(-1e-6);
        env.lambda_branch = true;
    }

    // self-consistency of the doubling lower bound on the recorded trace
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        if (trace.log_a[n] <
            env.log_alpha * std::pow(2.0, double(n)) * (1.0 + 1e-12)) {
            env.contraction_ok = false;
        }
    }

    env.theta = trace.c_delta * trace.c_delta / (-2.0 * env.log_alpha);
    env.log_rho =
        trace.log_a[0] + 0.5 * n_dim * std::log(2.0 * M_PI * env.theta);

    // a-posteriori domination pass: the Maxwellian must sit below the step
    // envelope value a_n at each anchor radius delta_n
    double violation = 0.0;
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        const double log_maxw_at_anchor =
            trace.log_a[0] - trace.delta[n] * trace.delta[n] / (2.0 * env.theta);
        violation = std::max(violation, log_maxw_at_anchor - trace.log_a[n]);
    }
    env.shrink_factor = std::exp(violation);
    env.log_rho -= violation;
    return env;
}

UniformizedBound uniformize(double log_rho, double theta, double R0,
                            int dimension) {
    if (!(theta > 0.0)) throw ConfigError("uniformize needs theta > 0");
    if (R0 < 0.0) throw ConfigError("uniformize needs R0 >= 0");
    UniformizedBound out;
    out.theta_prime = 0.5 * theta;
    out.log_rho_prime =
        log_rho - R0 * R0 / theta - 0.5 * dimension * std::log(2.0);
    return out;
}

CutoffCertification certify_cutoff_full(const CollisionKernel& kernel,
                                        const AprioriBounds& bounds, double tau,
                                        const CascadeConfig& config) {
    if (!(kernel.nu < 0.0)) {
        throw ConfigError("cutoff certification needs nu < 0");
    }
    config.validate();
    const UpheavalSeed seed =
        upheaval_cutoff(kernel, bounds, tau, config.csts, config.delta0_rule);
    const CascadeTrace trace = run_cascade(seed, kernel, bounds, config);
    const MaxwellianEnvelope env = envelope(trace, seed, kernel, config);
    const UniformizedBound uni =
        uniformize(env.log_rho, env.theta, seed.R0, kernel.dimension);

    Certificate cert;
    cert.kind = Certificate::Kind::Maxwellian;
    cert.dimension = kernel.dimension;
    cert.tau = seed.tau;
    cert.R0 = seed.R0;
    cert.log_rho_prime = uni.log_rho_prime;
    cert.theta_prime = uni.theta_prime;

    nlohmann::json prov;
    prov["regime"] = "cutoff";
    prov["cst_spread"] = config.csts.cst_spread;
    prov["cst_CL"] = config.csts.cst_CL;
    prov["cst_up"] = config.csts.cst_up;
    prov["delta0_rule"] = config.delta0_rule.describe();
    prov["xi"] = config.xi;
    prov["n_max"] = config.n_max;
    prov["xi_exponent_mode"] =
        config.xi_mode == XiExponentMode::Stated ? "stated" : "proofstep";
    prov["C_L"] = seed.C_L;
    prov["C_e"] = ce_constant(seed, kernel, bounds, config.csts);
    prov["R0"] = seed.R0;
    prov["delta0"] = seed.delta0;
    prov["log_eta0"] = seed.log_eta0;
    prov["log_a0"] = seed.log_a0;
    prov["log_alpha"] = env.log_alpha;
    prov["lambda"] = env.lambda;
    prov["c_delta"] = trace.c_delta;
    prov["theta_pre_uniformization"] = env.theta;
    prov["log_rho_pre_uniformization"] = env.log_rho;
    prov["domination_shrink_factor"] = env.shrink_factor;
    prov["branch_flags"] = nlohmann::json::array();
    for (const auto& f : seed.flags) prov["branch_flags"].push_back(f);
    if (env.lambda_branch) prov["branch_flags"].push_back("lambda_gt_1");
    if (!env.contraction_ok) prov["branch_flags"].push_back("non_contraction");
    prov["time_uniformization"] = "valid for all t in [tau, T)";
    cert.provenance = prov;
    cert.validate();
    return {cert, trace, seed};
}

Certificate certify_cutoff(const CollisionKernel& kernel,
                           const AprioriBounds& bounds, double tau,
                           const CascadeConfig& config) {
    return certify_cutoff_full(kernel, bounds, tau, config).certificate;
}

}  // namespace minorant
