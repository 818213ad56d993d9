#include "minorant/noncutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minorant/errors.hpp"

namespace minorant {

namespace {

double threshold_kappa(double nu) { return 2.0 + 2.0 * nu / (2.0 - nu); }

// log of the schedule term t_k = alpha^{beta kappa^{k-1}} (nu > 0) or
// beta_geo^{k-1} (nu = 0), k >= 0
double log_term(const ScheduleConfig& c, double nu, int k) {
    if (nu > 0.0) {
        return c.beta * std::pow(c.kappa, k - 1.0) * std::log(c.alpha_sched);
    }
    return (k - 1.0) * std::log(c.beta_geo);
}

double log_partition(const ScheduleConfig& c, double nu) {
    if (nu == 0.0) {
        // sum_{k>=0} beta^{k-1} = 1 / (beta (1 - beta))
        return -std::log(c.beta_geo * (1.0 - c.beta_geo));
    }
    const double top = log_term(c, nu, 0);
    double acc = 0.0;
    for (int k = 0; k < 4096; ++k) {
        const double d = log_term(c, nu, k) - top;
        if (d < -80.0) break;
        acc += std::exp(d);
    }
    return top + std::log(acc);
}

}  // namespace

void ScheduleConfig::validate(double nu, double gamma_plus) const {
    if (!(xi > 0.0 && xi < 1.0)) throw InvalidSchedule("xi must lie in (0,1)");
    if (n_max < 8) throw InvalidSchedule("n_max must be >= 8");
    if (nu > 0.0) {
        const double kmin = threshold_kappa(nu);
        if (!(kappa > kmin)) {
            throw InvalidKappa(
                "kappa must exceed the K-threshold base 2 + 2 nu/(2 - nu) = " +
                std::to_string(kmin));
        }
        if (!(beta > 2.0 * nu / (2.0 - nu) && beta < kappa - 2.0)) {
            throw InvalidSchedule("beta must lie in (2 nu/(2-nu), kappa - 2)");
        }
        if (!(alpha_sched > 0.0 && alpha_sched < 1.0)) {
            throw InvalidSchedule("alpha_sched must lie in (0,1)");
        }
    } else {
        if (!(beta_geo > 0.0 && beta_geo < 1.0)) {
            throw InvalidSchedule("beta_geo must lie in (0,1)");
        }
        // summability of the log-argument sequence: the dominating term is
        // 2^{n(gamma+/2+1)} beta^n, so the base must stay below 1
        if (!(std::pow(2.0, 0.5 * gamma_plus + 1.0) * beta_geo < 1.0)) {
            throw InvalidSchedule(
                "beta_geo too large for the nu = 0 summability condition");
        }
    }
}

double schedule_log_delta(const ScheduleConfig& config, double nu, int n) {
    if (n < 0) throw InvalidSchedule("schedule index must be >= 0");
    return log_term(config, nu, n) - log_partition(config, nu);
}

double schedule_log_tail(const ScheduleConfig& config, double nu, int n) {
    if (n <= 0) return 0.0;  // full sum is exactly 1
    if (nu == 0.0) {
        // sum_{k>=n} beta^{k-1} = beta^{n-1} / (1 - beta)
        return (n - 1.0) * std::log(config.beta_geo) -
               std::log(1.0 - config.beta_geo) - log_partition(config, nu);
    }
    const double top = log_term(config, nu, n);
    double acc = 0.0;
    for (int k = n; k < n + 4096; ++k) {
        const double d = log_term(config, nu, k) - top;
        if (d < -80.0) break;
        acc += std::exp(d);
    }
    return top + std::log(acc) - log_partition(config, nu);
}

double exponent_K(double nu, double kappa) {
    if (nu < 0.0 || nu >= 2.0) throw ConfigError("exponent_K needs nu in [0,2)");
    if (nu == 0.0) return 2.0;
    const double kmin = threshold_kappa(nu);
    if (!(kappa > kmin)) {
        throw InvalidKappa("kappa = " + std::to_string(kappa) +
                           " is not above the K-threshold base " +
                           std::to_string(kmin));
    }
    const double K = std::log(kappa) / std::log(std::sqrt(2.0));
    const double K_threshold = 2.0 * std::log(kmin) / std::log(2.0);
    if (!(K > K_threshold)) {
        throw InvalidKappa("derived K does not exceed the theorem threshold");
    }
    return K;
}

double epsilon_n_log(double log_Cf, double log_a_n, double delta_n,
                     double log_xi_n, const CollisionKernel& kernel) {
    const int n = kernel.dimension;
    const double bracket = log_Cf + 2.0 * log_a_n +
                           (n + kernel.gamma - kernel.gamma_tilde()) *
                               std::log(delta_n) +
                           (0.5 * n - 1.0) * log_xi_n;
    return bracket / (2.0 - kernel.nu);
}

namespace {

// One full trace at a fixed schedule. All heights in logs.
NoncutoffTrace trace_once(const UpheavalSeed& seed,
                          const CollisionKernel& kernel,
                          const ScheduleConfig& schedule, double log_prefactor) {
    const double nu = kernel.nu;
    NoncutoffTrace trace;
    trace.nu = nu;
    trace.C_f = seed.C_f;
    trace.log_prefactor = log_prefactor;
    trace.effective = schedule;
    trace.log_alpha_base =
        nu > 0.0 ? std::log(schedule.alpha_sched)
                 : -std::numeric_limits<double>::infinity();

    const int dim = kernel.dimension;
    const double gp = kernel.gamma_plus();
    const double gt = kernel.gamma_tilde();
    const double e_xi = xi_exponent(dim, schedule.xi_mode);
    const double log_xi = std::log(schedule.xi);
    const double log_Cf = std::log(seed.C_f);
    const double log_eps_cap = std::log(0.999 * M_PI / 4.0);

    trace.log_a.push_back(seed.log_a0);
    trace.delta.push_back(seed.delta0);
    for (int n = 0; n < schedule.n_max; ++n) {
        const double log_xi_n = (n + 1.0) * log_xi;
        const double delta_next =
            std::sqrt(2.0) * trace.delta[n] *
            (1.0 - std::pow(schedule.xi, n + 1.0));

        const double log_bracket =
            log_Cf + 2.0 * trace.log_a[n] +
            (dim + kernel.gamma - gt) * std::log(trace.delta[n]) +
            (0.5 * dim - 1.0) * log_xi_n;

        double log_eps = log_bracket / (2.0 - nu);
        if (log_eps > log_eps_cap) {
            log_eps = log_eps_cap;
            trace.eps_clamped.push_back(n);
        }
        trace.log_eps.push_back(log_eps);

        const double log_tail = schedule_log_tail(schedule, nu, n + 1);
        double damping;
        if (nu > 0.0) {
            const double log_damping = -nu / (2.0 - nu) * log_bracket +
                                       log_tail + gp * std::log(delta_next);
            damping = log_damping < -700.0
                          ? 0.0
                          : (log_damping > 700.0
                                 ? std::numeric_limits<double>::infinity()
                                 : std::exp(log_damping));
        } else {
            damping = std::abs(log_bracket) * std::exp(log_tail) *
                      std::pow(delta_next, gp);
        }
        trace.damping.push_back(damping);

        const double log_Delta = schedule_log_delta(schedule, nu, n + 1);
        trace.log_Delta.push_back(log_Delta);

        trace.log_a.push_back(trace.log_prefactor + log_Delta - damping +
                              2.0 * trace.log_a[n] +
                              (kernel.gamma + dim) * std::log(trace.delta[n]) +
                              e_xi * log_xi_n);
        trace.delta.push_back(delta_next);
    }

    double product = 1.0;
    for (int k = 1; k < 4096; ++k) {
        product *= 1.0 - std::pow(schedule.xi, k);
        if (std::pow(schedule.xi, k) < 1e-18) break;
    }
    trace.c_delta = seed.delta0 * product;
    return trace;
}

// Extend x_n = log a_n / kappa^n past the recorded trace with closed-form
// schedule terms and the recorded damping bound; returns the infimum of the
// continuation. Sound because damping only subtracts and the bound used is
// an upper bound for the settled tail.
double extended_x_infimum(const NoncutoffTrace& trace,
                          const CollisionKernel& kernel, double kappa_eff,
                          double damping_bound) {
    const ScheduleConfig& sched = trace.effective;
    const int m = static_cast<int>(trace.log_a.size()) - 1;
    const double nu = trace.nu;
    double x = trace.log_a.back() / std::pow(kappa_eff, double(m));
    double x_inf = x;
    const double log_xi = std::log(sched.xi);
    const double e_xi = xi_exponent(kernel.dimension, sched.xi_mode);
    const double gd = kernel.gamma + kernel.dimension;
    const double log_delta0 = std::log(trace.delta[0]);
    const double log_c_ratio = std::log(trace.c_delta / trace.delta[0]);
    const double fixed_point_term =
        nu > 0.0 ? sched.beta * std::log(sched.alpha_sched) / sched.kappa : 0.0;
    double x_prev = x;
    for (int n = m; n < m + 4000; ++n) {
        const double log_delta_n =
            gd >= 0.0 ? log_delta0 + 0.5 * n * std::log(2.0) + log_c_ratio
                      : log_delta0 + 0.5 * n * std::log(2.0);
        const double log_kpow = (n + 1.0) * std::log(kappa_eff);
        double s = fixed_point_term;
        if (log_kpow <= 600.0) {
            const double kpow = std::exp(log_kpow);
            if (nu > 0.0) {
                s += (schedule_log_delta(sched, nu, n + 1) -
                      sched.beta * std::pow(sched.kappa, double(n)) *
                          std::log(sched.alpha_sched)) /
                     kpow;
            } else {
                s += schedule_log_delta(sched, nu, n + 1) / kpow;
            }
            s += (trace.log_prefactor - damping_bound + gd * log_delta_n +
                  e_xi * (n + 1.0) * log_xi) /
                 kpow;
        }
        x = (2.0 / kappa_eff) * x + s;
        x_inf = std::min(x_inf, x);
        if (n > m + 8 && std::abs(x - x_prev) < 1e-15 * std::abs(x) + 1e-300) {
            break;
        }
        x_prev = x;
    }
    // remaining drift after the loop is below the contraction residual
    return std::min(x_inf, x - 1e-9 * std::abs(x) - 1e-300);
}

struct InductionCheck {
    bool pass = false;
    double damping_sup = 0.0;
    double damping_tail = 0.0;
};

// The source argument's sustainability conditions at the schedule base
// alpha: vanishing damping and a_n >= alpha^{kappa^n} on and beyond the
// recorded trace.
InductionCheck check_induction(const NoncutoffTrace& trace,
                               const CollisionKernel& kernel,
                               double kappa_eff, double log_alpha) {
    InductionCheck out;
    for (double d : trace.damping) {
        if (!std::isfinite(d)) return out;
        out.damping_sup = std::max(out.damping_sup, d);
    }
    const std::size_t tail_start = trace.damping.size() * 3 / 4;
    for (std::size_t i = tail_start; i < trace.damping.size(); ++i) {
        out.damping_tail = std::max(out.damping_tail, trace.damping[i]);
        if (i + 1 < trace.damping.size() &&
            trace.damping[i + 1] > trace.damping[i] + 1e-15) {
            return out;  // not settling
        }
    }
    if (out.damping_tail > 1e-6) return out;

    double scale = 1.0;
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        if (trace.log_a[n] < log_alpha * scale * (1.0 + 1e-12)) return out;
        scale *= kappa_eff;
    }
    const double x_inf =
        extended_x_infimum(trace, kernel, kappa_eff, out.damping_tail);
    if (x_inf < log_alpha * (1.0 + 1e-12)) return out;
    out.pass = true;
    return out;
}

}  // namespace

NoncutoffTrace run_noncutoff_cascade(const UpheavalSeed& seed,
                                     const CollisionKernel& kernel,
                                     const ScheduleConfig& schedule,
                                     const UniversalConstants& csts) {
    if (seed.regime != Regime::Noncutoff) {
        throw ConfigError("run_noncutoff_cascade expects a non-cutoff seed");
    }
    const double nu = kernel.nu;
    schedule.validate(nu, kernel.gamma_plus());
    const double ell = angular_infimum_ellb(kernel);
    const double log_prefactor =
        std::log(csts.cst_spread * ell * kernel.c_phi);

    if (nu == 0.0) {
        return trace_once(seed, kernel, schedule, log_prefactor);
    }

    // the certificate base may not exceed min(config alpha, a0); search the
    // largest base whose own trace sustains the induction
    const double log_alpha_start =
        std::min(std::log(schedule.alpha_sched), seed.log_a0);
    auto attempt = [&](double log_alpha) {
        ScheduleConfig eff = schedule;
        eff.alpha_sched = std::exp(log_alpha);
        NoncutoffTrace t = trace_once(seed, kernel, eff, log_prefactor);
        t.log_alpha_base = log_alpha;
        return t;
    };

    NoncutoffTrace trace = attempt(log_alpha_start);
    if (check_induction(trace, kernel, schedule.kappa, log_alpha_start).pass) {
        return trace;
    }
    // geometric search for a passing base, then bisect back up; bases are
    // capped above the smallest positive double
    double log_lo = log_alpha_start;  // failing side (too large alpha)
    double log_hi = log_alpha_start;  // passing side (small alpha)
    bool found = false;
    for (int i = 0; i < 60 && log_hi > -700.0; ++i) {
        log_hi = std::max(2.0 * log_hi, -700.0);
        trace = attempt(log_hi);
        if (check_induction(trace, kernel, schedule.kappa, log_hi).pass) {
            found = true;
            break;
        }
        log_lo = log_hi;
    }
    if (!found) {
        throw DegenerateEnvelope(
            "no schedule base sustains the non-cutoff induction; the damping "
            "term dominates for every alpha down to exp(" +
            std::to_string(log_hi) + ")");
    }
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (log_lo + log_hi);
        if (check_induction(attempt(mid), kernel, schedule.kappa, mid).pass) {
            log_hi = mid;
        } else {
            log_lo = mid;
        }
    }
    trace = attempt(log_hi);
    return trace;
}

Certificate envelope_noncutoff(const NoncutoffTrace& trace,
                               const UpheavalSeed& seed,
                               const CollisionKernel& kernel,
                               const ScheduleConfig& schedule,
                               const UniversalConstants& csts) {
    if (trace.log_a.empty() || !(trace.c_delta > 0.0)) {
        throw DegenerateEnvelope("non-cutoff trace is degenerate");
    }
    const double nu = trace.nu;
    const double kappa_eff = nu > 0.0 ? schedule.kappa : 2.0;
    const double K = exponent_K(nu, schedule.kappa);

    double damping_sup = 0.0;
    for (double d : trace.damping) {
        if (!std::isfinite(d)) {
            throw DegenerateEnvelope("damping argument diverged");
        }
        damping_sup = std::max(damping_sup, d);
    }

    double log_alpha;
    if (nu > 0.0) {
        log_alpha = trace.log_alpha_base;
        const InductionCheck chk =
            check_induction(trace, kernel, kappa_eff, log_alpha);
        if (!chk.pass) {
            throw DegenerateEnvelope(
                "trace does not sustain the alpha^{kappa^n} induction");
        }
    } else {
        // nu = 0: the trace does not depend on alpha; take the largest
        // doubling base consistent with the recorded and extended trace
        double x_min = trace.log_a[0];
        double scale = 1.0;
        for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
            x_min = std::min(x_min, trace.log_a[n] / scale);
            scale *= 2.0;
        }
        const std::size_t tail_start = trace.damping.size() * 3 / 4;
        double damping_tail = 0.0;
        for (std::size_t i = tail_start; i < trace.damping.size(); ++i) {
            damping_tail = std::max(damping_tail, trace.damping[i]);
        }
        x_min = std::min(
            x_min, extended_x_infimum(trace, kernel, 2.0, damping_tail));
        log_alpha = x_min;
    }
    log_alpha = std::min(log_alpha, std::log1p(-1e-6));

    const double C2 = -log_alpha / std::pow(trace.c_delta, K);
    if (!std::isfinite(C2) || !(C2 > 0.0)) {
        throw DegenerateEnvelope("C2 is not finite and positive");
    }

    // anchor C1 at a0 and shrink by the domination pass at the anchor radii
    double log_C1 = trace.log_a[0];
    double violation = 0.0;
    for (std::size_t n = 0; n < trace.log_a.size(); ++n) {
        const double log_env = log_C1 - C2 * std::pow(trace.delta[n], K);
        violation = std::max(violation, log_env - trace.log_a[n]);
    }
    log_C1 -= violation;

    // space uniformization via |v - vbar|^K <= 2^{K-1} (|v|^K + R0^K)
    const double C2_prime = std::pow(2.0, K - 1.0) * C2;
    const double log_C1_prime = log_C1 - C2_prime * std::pow(seed.R0, K);

    Certificate cert;
    cert.kind = Certificate::Kind::StretchedExp;
    cert.dimension = kernel.dimension;
    cert.tau = seed.tau;
    cert.R0 = seed.R0;
    cert.log_C1 = log_C1_prime;
    cert.C2 = C2_prime;
    cert.K = K;

    nlohmann::json prov;
    prov["regime"] = "noncutoff";
    prov["nu"] = nu;
    prov["kappa"] = schedule.kappa;
    prov["beta"] = schedule.beta;
    prov["alpha_sched_config"] = schedule.alpha_sched;
    prov["alpha_sched_effective"] =
        nu > 0.0 ? trace.effective.alpha_sched : schedule.beta_geo;
    prov["log_alpha"] = log_alpha;
    prov["beta_geo"] = schedule.beta_geo;
    prov["xi"] = schedule.xi;
    prov["n_max"] = schedule.n_max;
    prov["xi_exponent_mode"] =
        schedule.xi_mode == XiExponentMode::Stated ? "stated" : "proofstep";
    prov["cst_spread"] = csts.cst_spread;
    prov["cst_CL"] = csts.cst_CL;
    prov["cst_Q1"] = csts.cst_Q1;
    prov["C_f"] = seed.C_f;
    prov["eps0"] = seed.eps0;
    prov["tau_max"] = seed.tau_max;
    prov["R0"] = seed.R0;
    prov["delta0"] = seed.delta0;
    prov["log_eta0"] = seed.log_eta0;
    prov["log_a0"] = seed.log_a0;
    prov["c_delta"] = trace.c_delta;
    prov["damping_sup"] = damping_sup;
    prov["C_e"] = std::exp(-damping_sup);
    prov["domination_shrink_factor"] = std::exp(violation);
    prov["C2_pre_uniformization"] = C2;
    prov["log_C1_pre_uniformization"] = log_C1;
    prov["branch_flags"] = nlohmann::json::array();
    for (const auto& f : seed.flags) prov["branch_flags"].push_back(f);
    for (int n : trace.eps_clamped) {
        prov["branch_flags"].push_back("eps_clamped_at_step_" +
                                       std::to_string(n));
    }
    prov["Cf_assembly"] =
        "max(cst_CL C_phi hydro, cst_CL C_phi hydro, cst_Q1 C_phi bridge(gt) "
        "(E + Eprime) [+ Lp] W)";
    prov["time_uniformization"] = "valid for all t in [tau, T)";
    cert.provenance = prov;
    cert.validate();
    return cert;
}

NoncutoffCertification certify_noncutoff_full(const CollisionKernel& kernel,
                                              const AprioriBounds& bounds,
                                              double tau,
                                              const ScheduleConfig& schedule,
                                              const UniversalConstants& csts) {
    schedule.validate(kernel.nu, kernel.gamma_plus());
    const UpheavalSeed seed = upheaval_noncutoff(kernel, bounds, tau, csts);
    const NoncutoffTrace trace =
        run_noncutoff_cascade(seed, kernel, schedule, csts);
    Certificate cert = envelope_noncutoff(trace, seed, kernel, schedule, csts);
    return {cert, trace, seed};
}

Certificate certify_noncutoff(const CollisionKernel& kernel,
                              const AprioriBounds& bounds, double tau,
                              const ScheduleConfig& schedule,
                              const UniversalConstants& csts) {
    return certify_noncutoff_full(kernel, bounds, tau, schedule, csts)
        .certificate;
}

}  // namespace minorant
