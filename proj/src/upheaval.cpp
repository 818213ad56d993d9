#include "minorant/upheaval.hpp"

#include <cmath>

#include "minorant/errors.hpp"

namespace minorant {

Delta0Rule Delta0Rule::user(double value) {
    Delta0Rule r;
    r.kind = Kind::User;
    r.delta0 = value;
    return r;
}

Delta0Rule Delta0Rule::entropy(double kappa0, double kappa1) {
    Delta0Rule r;
    r.kind = Kind::Entropy;
    r.kappa0 = kappa0;
    r.kappa1 = kappa1;
    return r;
}

std::string Delta0Rule::describe() const {
    if (kind == Kind::User) {
        return "user(" + std::to_string(delta0) + ")";
    }
    return "entropy(kappa0=" + std::to_string(kappa0) +
           ",kappa1=" + std::to_string(kappa1) + ")";
}

namespace {

// log of exp(-X tau) (1 - exp(-X tau/2))^2 / (2 X^2), the Duhamel damping
// bracket of the twice-iterated gain term; tends to tau^2/8 as X -> 0.
double log_duhamel_bracket(double X, double tau) {
    if (X < 1e-300) return std::log(tau * tau / 8.0);
    const double one_minus = -std::expm1(-0.5 * X * tau);  // 1 - e^{-X tau/2}
    return -X * tau + 2.0 * std::log(one_minus) - std::log(2.0 * X * X);
}

}  // namespace

UpheavalSeed upheaval_cutoff(const CollisionKernel& kernel,
                             const AprioriBounds& bounds, double tau,
                             const UniversalConstants& csts,
                             const Delta0Rule& rule) {
    bounds.validate();
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");

    UpheavalSeed seed;
    seed.regime = Regime::Cutoff;
    seed.tau = tau;

    seed.R0 = std::sqrt(2.0 * bounds.E / bounds.rho_min);
    if (kernel.gamma < 0.0 && seed.R0 < 1.0) {
        seed.R0 = 1.0;
        seed.flags.push_back("R0_raised_to_1");
    }

    if (rule.kind == Delta0Rule::Kind::User) {
        seed.delta0 = rule.delta0;
    } else {
        seed.delta0 =
            seed.R0 * std::exp(-rule.kappa1 * (bounds.H + rule.kappa0 * bounds.E) /
                               bounds.rho_min);
    }
    if (!(seed.delta0 > 0.0)) throw ConfigError("delta0 must be positive");
    if (seed.delta0 > seed.R0) {
        throw ConfigError("delta0 exceeds R0; the seed ball must fit in the "
                          "localization ball");
    }

    const double ell = angular_infimum_ellb(kernel);
    const int n = kernel.dimension;
    seed.log_eta0 = std::log(csts.cst_up * ell * kernel.c_phi) +
                    (kernel.gamma - (3.0 * n - 1.0)) * std::log(seed.R0) +
                    2.0 * n * std::log(seed.delta0);

    seed.C_L = loss_bound_CL(kernel, bounds, csts.cst_CL);
    // <R0>^{gamma+} used uniformly for the damping weight
    const double bracket_R0 =
        std::pow(std::sqrt(1.0 + seed.R0 * seed.R0), kernel.gamma_plus());
    const double X = seed.C_L * bracket_R0;
    seed.log_a0 = log_duhamel_bracket(X, tau) + seed.log_eta0;
    if (seed.log_a0 > seed.log_eta0) {
        seed.log_a0 = seed.log_eta0;
        seed.flags.push_back("a0_clamped_to_eta0");
    }
    return seed;
}

UpheavalSeed upheaval_noncutoff(const CollisionKernel& kernel,
                                const AprioriBounds& bounds,
                                double tau_request,
                                const UniversalConstants& csts) {
    bounds.validate();
    if (!(kernel.nu >= 0.0 && kernel.nu < 2.0)) {
        throw ConfigError("non-cutoff upheaval needs nu in [0,2)");
    }
    if (!bounds.W) {
        throw MissingWBound("non-cutoff upheaval needs the W^{2,inf} bound");
    }
    if (!(tau_request > 0.0)) throw ConfigError("tau must be positive");

    UpheavalSeed seed;
    seed.regime = Regime::Noncutoff;
    seed.R0 = std::sqrt(2.0 * bounds.E / bounds.rho_min);

    const double vol = ball_volume(kernel.dimension) *
                       std::pow(seed.R0, kernel.dimension);
    const double eta = bounds.rho_min / (4.0 * vol);
    seed.delta0 = bounds.rho_min / (4.0 * vol * *bounds.W);
    if (seed.delta0 > seed.R0) {
        seed.delta0 = seed.R0;
        seed.flags.push_back("delta0_clamped_to_R0");
    }
    seed.log_eta0 = std::log(eta / 4.0);
    seed.log_a0 = seed.log_eta0;

    seed.C_f = assemble_Cf(kernel, bounds, csts.cst_CL, csts.cst_Q1).value;

    // largest admissible splitting parameter with C_f m_bR(eps) <= eta/4,
    // found by bisection on the monotone map eps -> m_bR(eps)
    const double eps_max = 0.999 * M_PI / 4.0;
    const double target = eta / 4.0;
    auto weighted_transfer = [&](double eps) {
        return seed.C_f * split_kernel(kernel, eps).m_bR;
    };
    double eps0 = 0.0;
    if (weighted_transfer(eps_max) <= target) {
        eps0 = eps_max;
        seed.flags.push_back("eps0_at_search_max");
    } else {
        double lo = 1e-10;
        if (!(weighted_transfer(lo) <= target)) {
            throw NoAdmissibleEps(
                "no eps in [1e-10, pi/4) satisfies C_f m_bR(eps) <= eta/4");
        }
        double hi = eps_max;
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (weighted_transfer(mid) <= target ? lo : hi) = mid;
        }
        eps0 = lo;
    }
    seed.eps0 = eps0;

    const SplitAngularIntegrals split = split_kernel(kernel, eps0);
    seed.tau_max = std::log(2.0) / (seed.C_f * (split.m_bR + split.n_bS));
    seed.tau = tau_request;
    if (seed.tau > seed.tau_max) {
        seed.tau = seed.tau_max;
        seed.flags.push_back("tau_infeasible_clamped");
    }
    if (seed.tau > 1.0) {
        seed.tau = 1.0;  // the initialization assumes tau <= 1
        seed.flags.push_back("tau_clamped_to_1");
    }

    // post-hoc re-check of the two smallness conditions at the chosen values
    if (!(seed.C_f * split.m_bR <= target * (1.0 + 1e-9))) {
        throw NoAdmissibleEps("smallness condition failed post hoc");
    }
    if (!(std::exp(-seed.C_f * (split.m_bR + split.n_bS) * seed.tau) >=
          0.5 * (1.0 - 1e-9))) {
        throw NoAdmissibleEps("waiting-time condition failed post hoc");
    }
    return seed;
}

}  // namespace minorant
