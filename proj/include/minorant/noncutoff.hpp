#ifndef MINORANT_NONCUTOFF_HPP
#define MINORANT_NONCUTOFF_HPP

#include <vector>

#include "minorant/bounds.hpp"
#include "minorant/certificate.hpp"
#include "minorant/geometry.hpp"
#include "minorant/upheaval.hpp"

namespace minorant {

// Time-interval schedule of the non-cutoff induction. For nu > 0 the
// intervals collapse doubly exponentially, Delta_{n+1} = a^{b k^n} / Z with
// Z = sum_{k>=0} a^{b k^{k-1}}; the k = 0 denominator term serves as
// Delta_0 so the sequence is positive and sums to exactly 1. For nu = 0 the
// schedule is geometric.
struct ScheduleConfig {
    double kappa = 4.5;        // cascade growth base (nu > 0)
    double beta = 2.25;        // schedule exponent (nu > 0)
    double alpha_sched = 0.5;  // schedule base (nu > 0)
    double beta_geo = 0.3;     // geometric ratio (nu = 0)
    double xi = 0.5;           // spreading ratio, xi_n = xi^{n+1}
    int n_max = 48;
    XiExponentMode xi_mode = XiExponentMode::Stated;

    // gamma_plus enters the nu = 0 summability check
    void validate(double nu, double gamma_plus) const;
};

// log Delta_n, n >= 0
double schedule_log_delta(const ScheduleConfig& config, double nu, int n);
// log sum_{k >= n} Delta_k
double schedule_log_tail(const ScheduleConfig& config, double nu, int n);

// K = log kappa / log sqrt(2) for nu > 0 (requires kappa above the
// threshold 2 + 2 nu/(2 - nu)); K = 2 for nu = 0.
double exponent_K(double nu, double kappa);

// log of eps_n = [C_f a_n^2 delta_n^{N+gamma-gt} xi_n^{N/2-1}]^{1/(2-nu)}
double epsilon_n_log(double log_Cf, double log_a_n, double delta_n,
                     double log_xi_n, const CollisionKernel& kernel);

struct NoncutoffTrace {
    std::vector<double> log_a;      // 0..n_max
    std::vector<double> delta;      // 0..n_max
    std::vector<double> log_eps;    // per step, before the pi/4 clamp
    std::vector<double> log_Delta;  // Delta_{n+1} per step
    std::vector<double> damping;    // damping argument per step
    std::vector<int> eps_clamped;   // steps where eps_n hit pi/4
    double c_delta = 0.0;
    double log_prefactor = 0.0;  // log(cst_spread ell_b c_phi)
    double C_f = 0.0;
    double nu = 0.0;
    // schedule actually used: for nu > 0 the base alpha is the largest
    // value <= min(config alpha, a0) whose own trace sustains the
    // induction a_n >= alpha^{kappa^n} with vanishing damping (the source
    // argument's "alpha small enough", made constructive by bisection)
    ScheduleConfig effective;
    double log_alpha_base = 0.0;
};

NoncutoffTrace run_noncutoff_cascade(const UpheavalSeed& seed,
                                     const CollisionKernel& kernel,
                                     const ScheduleConfig& schedule,
                                     const UniversalConstants& csts);

// Stretched-exponential envelope: with anchors |v| = c_delta 2^{n/2} and
// heights alpha^{kappa^n}, kappa^n = (|v|/c_delta)^K gives
// C2 = ln(1/alpha)/c_delta^K; C1 anchors a0 and is reduced by the
// a-posteriori domination pass; space uniformization then applies
// |v - vbar|^K <= 2^{K-1}(|v|^K + R0^K).
Certificate envelope_noncutoff(const NoncutoffTrace& trace,
                               const UpheavalSeed& seed,
                               const CollisionKernel& kernel,
                               const ScheduleConfig& schedule,
                               const UniversalConstants& csts);

struct NoncutoffCertification {
    Certificate certificate;
    NoncutoffTrace trace;
    UpheavalSeed seed;
};

NoncutoffCertification certify_noncutoff_full(const CollisionKernel& kernel,
                                              const AprioriBounds& bounds,
                                              double tau,
                                              const ScheduleConfig& schedule,
                                              const UniversalConstants& csts);

Certificate certify_noncutoff(const CollisionKernel& kernel,
                              const AprioriBounds& bounds, double tau,
                              const ScheduleConfig& schedule,
                              const UniversalConstants& csts);

}  // namespace minorant

#endif
