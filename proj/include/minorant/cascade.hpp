#ifndef MINORANT_CASCADE_HPP
#define MINORANT_CASCADE_HPP

#include <vector>

#include "minorant/bounds.hpp"
#include "minorant/certificate.hpp"
#include "minorant/geometry.hpp"
#include "minorant/upheaval.hpp"

namespace minorant {

struct CascadeConfig {
    double xi = 0.5;  // geometric ratio, xi_n = xi^{n+1}
    int n_max = 48;
    XiExponentMode xi_mode = XiExponentMode::Stated;
    UniversalConstants csts;
    Delta0Rule delta0_rule = Delta0Rule::entropy();

    void validate() const;
};

// One step of the cutoff induction in log space:
//   log a_{n+1} = log_prefactor + 2 log a_n + (gamma + N) log delta_n
//                 + e_xi (n+1) log xi - (n+1) log 2
//   delta_{n+1} = sqrt(2) delta_n (1 - xi^{n+1})
// with log_prefactor = log(cst_spread * ell_b * c_phi * C_e). Kept as a
// standalone object so tests can replay the recursion bit-for-bit.
struct CascadeRecursion {
    double log_prefactor = 0.0;
    double gamma_plus_dim = 0.0;
    double xi = 0.5;
    double exponent = 0.0;

    double step_log_a(double log_a_n, double delta_n, int n) const;
    double step_delta(double delta_n, int n) const;
};

struct CascadeTrace {
    std::vector<double> log_a;  // indices 0..n_max
    std::vector<double> delta;
    double c_delta = 0.0;  // delta0 * prod_{k>=1} (1 - xi^k)
    CascadeRecursion recursion;
    double xi = 0.5;
};

// a_n decays doubly exponentially, so the whole iteration runs on logs;
// underflow cannot occur by construction.
CascadeTrace run_cascade(const UpheavalSeed& seed, const CollisionKernel& kernel,
                         const AprioriBounds& bounds, const CascadeConfig& config);

// C_e = exp(-C_L <R0>^{gamma+} tau delta0^{gamma+} sup_n 2^{n gamma+/2 - n - 1});
// the sup sits at n = 0 for every gamma+ in [0,1].
double ce_constant(const UpheavalSeed& seed, const CollisionKernel& kernel,
                   const AprioriBounds& bounds, const UniversalConstants& csts);

// exponent bookkeeping weight A_n = (n-1) 2^0 + (n-2) 2^1 + ... + 0 2^{n-1},
// computed by the recursion A_{n+1} = 2 A_n + n (closed form 2^n - (n+1))
double accumulated_doubling_weight(int n);

struct MaxwellianEnvelope {
    double log_rho = 0.0;
    double theta = 0.0;
    double log_alpha = 0.0;   // doubling base, a_n >= alpha^{2^n}
    double lambda = 0.0;      // 2^{(gamma+N)/2} xi^{N/2+1} / 2
    double shrink_factor = 1.0;
    bool lambda_branch = false;
    bool contraction_ok = true;
};

// Maxwellian envelope under the cascade step function: theta solves
// exp(-c_delta^2 / (2 theta)) = alpha, rho anchors a0 and is shrunk by the
// a-posteriori domination pass against the step envelope at the anchor radii.
MaxwellianEnvelope envelope(const CascadeTrace& trace, const UpheavalSeed& seed,
                            const CollisionKernel& kernel,
                            const CascadeConfig& config);

struct UniformizedBound {
    double log_rho_prime = 0.0;
    double theta_prime = 0.0;
};

// Space uniformization over the unknown upheaval center |vbar| <= R0:
// theta' = theta/2, rho' = rho exp(-R0^2/theta) / 2^{N/2}. Time
// uniformization holds by restarting the argument at t - tau.
UniformizedBound uniformize(double log_rho, double theta, double R0,
                            int dimension);

struct CutoffCertification {
    Certificate certificate;
    CascadeTrace trace;
    UpheavalSeed seed;
};

CutoffCertification certify_cutoff_full(const CollisionKernel& kernel,
                                        const AprioriBounds& bounds, double tau,
                                        const CascadeConfig& config);

Certificate certify_cutoff(const CollisionKernel& kernel,
                           const AprioriBounds& bounds, double tau,
                           const CascadeConfig& config);

}  // namespace minorant

#endif
