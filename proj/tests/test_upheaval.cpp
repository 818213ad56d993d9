#include <cmath>

#include <doctest.h>

#include "minorant/errors.hpp"
#include "minorant/kernel.hpp"
#include "minorant/upheaval.hpp"

using namespace minorant;

namespace {

CollisionKernel maxwell_kernel() {
    CollisionKernel k = make_hard_sphere_kernel(3);
    k.gamma = 0.0;
    return k;
}

AprioriBounds bounds_with(double rho, double E, double H,
                          double W = 0.0) {
    AprioriBounds b;
    b.rho_min = rho;
    b.E = E;
    b.H = H;
    if (W > 0.0) {
        b.W = W;
        b.Eprime = E;
    }
    return b;
}

}  // namespace

TEST_CASE("cutoff upheaval seed") {
    const CollisionKernel k = maxwell_kernel();
    UniversalConstants csts;
    csts.cst_CL = 0.25;
    csts.cst_up = 1.0;

    SUBCASE("localization radius") {
        const UpheavalSeed s = upheaval_cutoff(
            k, bounds_with(1.0, 2.0, 1.0), 0.5, csts, Delta0Rule::user(0.1));
        CHECK(s.R0 == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("invalid bounds are rejected") {
        CHECK_THROWS_AS(upheaval_cutoff(k, bounds_with(0.0, 2.0, 1.0), 0.5,
                                        csts, Delta0Rule::user(0.1)),
                        InvalidBounds);
        CHECK_THROWS_AS(upheaval_cutoff(k, bounds_with(1.0, 0.5, 1.0), 0.5,
                                        csts, Delta0Rule::user(0.1)),
                        InvalidBounds);
    }

    SUBCASE("a0 vanishes quadratically as tau -> 0") {
        const AprioriBounds b = bounds_with(1.0, 2.0, 1.0);
        const double tau = 1e-5;
        const UpheavalSeed s =
            upheaval_cutoff(k, b, tau, csts, Delta0Rule::user(0.1));
        // series oracle: a0 -> (tau^2 / 8) eta0 in the small-tau limit
        CHECK(s.log_a0 - s.log_eta0 ==
              doctest::Approx(std::log(tau * tau / 8.0)).epsilon(1e-3));
    }

    SUBCASE("gamma = 0 collapses the damping exponent") {
        const AprioriBounds b = bounds_with(1.0, 2.0, 1.0);
        const double tau = 0.5;
        const UpheavalSeed s =
            upheaval_cutoff(k, b, tau, csts, Delta0Rule::user(0.1));
        const double X = s.C_L;  // <R0>^{gamma+} = 1
        const double bracket = std::exp(-X * tau) *
                               std::pow(1.0 - std::exp(-0.5 * X * tau), 2) /
                               (2.0 * X * X);
        CHECK(s.log_a0 ==
              doctest::Approx(std::log(bracket) + s.log_eta0).epsilon(1e-12));
    }

    SUBCASE("a0 is clamped to eta0 when the bracket exceeds one") {
        UniversalConstants tiny = csts;
        tiny.cst_CL = 1e-9;
        const UpheavalSeed s = upheaval_cutoff(k, bounds_with(1.0, 2.0, 1.0),
                                               10.0, tiny, Delta0Rule::user(0.1));
        CHECK(s.log_a0 == s.log_eta0);
        bool flagged = false;
        for (const auto& f : s.flags) flagged |= (f == "a0_clamped_to_eta0");
        CHECK(flagged);
    }

    SUBCASE("seed monotonicity in the constants") {
        const AprioriBounds b = bounds_with(1.0, 2.0, 1.0);
        const UpheavalSeed base =
            upheaval_cutoff(k, b, 0.5, csts, Delta0Rule::user(0.1));
        UniversalConstants up = csts;
        up.cst_up = 2.0;  // larger eta0 lifts a0
        CHECK(upheaval_cutoff(k, b, 0.5, up, Delta0Rule::user(0.1)).log_a0 >
              base.log_a0);
        UniversalConstants heavier = csts;
        heavier.cst_CL = 0.5;  // larger C_L damps harder
        CHECK(upheaval_cutoff(k, b, 0.5, heavier, Delta0Rule::user(0.1)).log_a0 <
              base.log_a0);
    }

    SUBCASE("entropy delta0 rule and seed invariants") {
        const UpheavalSeed s = upheaval_cutoff(
            k, bounds_with(1.0, 4.0, 4.0), 0.5, csts, Delta0Rule::entropy());
        CHECK(s.delta0 ==
              doctest::Approx(s.R0 * std::exp(-8.0)).epsilon(1e-12));
        CHECK(s.delta0 <= s.R0);
        CHECK(s.log_a0 <= s.log_eta0);

        CHECK_THROWS_AS(
            upheaval_cutoff(k, bounds_with(1.0, 2.0, 1.0), 0.5, csts,
                            Delta0Rule::user(5.0)),  // delta0 > R0
            ConfigError);
    }

    SUBCASE("soft potentials keep R0 >= 1") {
        // E bounds mass + energy, so sqrt(2E/rho) >= sqrt(2) and the
        // gamma < 0 reduction holds without actually raising R0
        const CollisionKernel soft = make_power_law_kernel(3, -1.0, -2.0, 1.0);
        AprioriBounds b = bounds_with(4.0, 4.0, 1.0);
        b.Lp_value = 1.0;
        b.p_exponent = 2.0;
        const UpheavalSeed s =
            upheaval_cutoff(soft, b, 0.5, csts, Delta0Rule::user(0.1));
        CHECK(s.R0 >= 1.0);
        CHECK(s.R0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("non-cutoff upheaval seed") {
    const CollisionKernel k = make_power_law_kernel(3, 0.0, 1.0, 1.0);
    UniversalConstants csts;
    csts.cst_CL = 0.25;

    SUBCASE("plug-in formulas for delta0 and eta") {
        AprioriBounds b = bounds_with(1.0, 2.0, 1.0, 2.0);
        const UpheavalSeed s = upheaval_noncutoff(k, b, 0.25, csts);
        const double R0 = 2.0;
        const double vol = ball_volume(3) * std::pow(R0, 3);
        CHECK(s.R0 == doctest::Approx(R0).epsilon(1e-14));
        CHECK(s.delta0 ==
              doctest::Approx(1.0 / (4.0 * vol * 2.0)).epsilon(1e-12));
        CHECK(s.log_eta0 ==
              doctest::Approx(std::log(1.0 / (4.0 * vol) / 4.0)).epsilon(1e-12));
        CHECK(s.log_a0 == s.log_eta0);
        CHECK(s.eps0 > 0.0);
        CHECK(s.eps0 < M_PI / 4.0);
        CHECK(s.tau <= s.tau_max);
    }

    SUBCASE("doubling W halves delta0 and leaves eta unchanged") {
        AprioriBounds b1 = bounds_with(1.0, 2.0, 1.0, 2.0);
        AprioriBounds b2 = bounds_with(1.0, 2.0, 1.0, 4.0);
        const UpheavalSeed s1 = upheaval_noncutoff(k, b1, 0.25, csts);
        const UpheavalSeed s2 = upheaval_noncutoff(k, b2, 0.25, csts);
        CHECK(s2.delta0 == doctest::Approx(0.5 * s1.delta0).epsilon(1e-12));
        CHECK(s2.log_eta0 == doctest::Approx(s1.log_eta0).epsilon(1e-12));
    }

    SUBCASE("missing W is rejected") {
        AprioriBounds b = bounds_with(1.0, 2.0, 1.0);
        b.Eprime = 2.0;
        CHECK_THROWS_AS(upheaval_noncutoff(k, b, 0.25, csts), MissingWBound);
    }

    SUBCASE("eps0 matches the small-eta asymptotic for nu = 1") {
        // large localization volume makes eta small; then
        // C_f m_bR(eps0) = eta/4 with m_bR ~ pi b0 eps gives
        // eps0 ~ eta / (4 C_f pi b0)
        AprioriBounds b = bounds_with(1.0, 50.0, 1.0, 2.0);
        b.Eprime = 50.0;
        const UpheavalSeed s = upheaval_noncutoff(k, b, 0.25, csts);
        const double R0 = 10.0;
        const double eta = 1.0 / (4.0 * ball_volume(3) * std::pow(R0, 3));
        const double predicted = (eta / 4.0) / (s.C_f * M_PI * k.b0);
        CHECK(s.eps0 == doctest::Approx(predicted).epsilon(0.10));
    }

    SUBCASE("tau clamping is reported, not fatal") {
        AprioriBounds b = bounds_with(1.0, 2.0, 1.0, 2.0);
        const UpheavalSeed s = upheaval_noncutoff(k, b, 50.0, csts);
        CHECK(s.tau <= 1.0);
        bool flagged = false;
        for (const auto& f : s.flags) {
            flagged |= (f == "tau_infeasible_clamped" || f == "tau_clamped_to_1");
        }
        CHECK(flagged);
    }
}
