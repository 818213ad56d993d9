#include <cmath>

#include <doctest.h>

#include "minorant/cascade.hpp"
#include "minorant/errors.hpp"
#include "minorant/kernel.hpp"

using namespace minorant;

namespace {

CollisionKernel maxwell_kernel() {
    CollisionKernel k = make_hard_sphere_kernel(3);
    k.gamma = 0.0;
    return k;
}

AprioriBounds basic_bounds() {
    AprioriBounds b;
    b.rho_min = 1.0;
    b.E = 4.0;
    b.H = 4.0;
    return b;
}

UpheavalSeed synthetic_seed() {
    UpheavalSeed s;
    s.regime = Regime::Cutoff;
    s.R0 = 2.0;
    s.delta0 = 0.5;
    s.log_eta0 = std::log(0.1);
    s.log_a0 = std::log(0.05);
    s.tau = 0.5;
    s.C_L = 5.0;
    return s;
}

CascadeConfig default_config() {
    CascadeConfig c;
    c.csts.cst_spread = 0.5;
    c.csts.cst_CL = 0.25;
    c.csts.cst_up = 1.0;
    return c;
}

}  // namespace

TEST_CASE("delta recursion") {
    SUBCASE("xi -> 0 limit: pure sqrt-2 doubling") {
        CascadeConfig cfg = default_config();
        cfg.xi = 1e-300;
        cfg.n_max = 20;
        const CascadeTrace t =
            run_cascade(synthetic_seed(), maxwell_kernel(), basic_bounds(), cfg);
        for (int n = 0; n <= 20; ++n) {
            CHECK(t.delta[n] == doctest::Approx(0.5 * std::pow(2.0, 0.5 * n))
                                    .epsilon(1e-13));
        }
    }

    SUBCASE("Euler-type product at xi = 1/2") {
        CascadeConfig cfg = default_config();
        cfg.xi = 0.5;
        cfg.n_max = 40;
        UpheavalSeed seed = synthetic_seed();
        seed.delta0 = 1.0;
        const CascadeTrace t =
            run_cascade(seed, maxwell_kernel(), basic_bounds(), cfg);
        double product = 1.0;
        for (int k = 1; k <= 40; ++k) product *= 1.0 - std::pow(0.5, k);
        CHECK(std::abs(t.delta[40] / std::pow(2.0, 20.0) - product) <= 1e-12);
        CHECK(product == doctest::Approx(0.288788).epsilon(1e-5));
        CHECK(t.c_delta == doctest::Approx(product).epsilon(1e-12));
        // lower bound delta_n >= c_delta 2^{n/2} at every step
        for (int n = 0; n <= 40; ++n) {
            CHECK(t.delta[n] >=
                  t.c_delta * std::pow(2.0, 0.5 * n) * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("exponent bookkeeping A_n = 2^n - (n+1)") {
    for (int n = 1; n <= 20; ++n) {
        CHECK(accumulated_doubling_weight(n) ==
              std::pow(2.0, n) - (n + 1.0));
    }
}

TEST_CASE("recursion replay is exact in log space") {
    const CascadeConfig cfg = default_config();
    const CascadeTrace t =
        run_cascade(synthetic_seed(), maxwell_kernel(), basic_bounds(), cfg);
    REQUIRE(t.log_a.size() == static_cast<std::size_t>(cfg.n_max) + 1);
    for (int n = 0; n < cfg.n_max; ++n) {
        const double replayed =
            t.recursion.step_log_a(t.log_a[n], t.delta[n], n);
        // bit-identical or at most one ulp apart
        CHECK(std::abs(replayed - t.log_a[n + 1]) <=
              std::abs(std::nexttoward(t.log_a[n + 1], 0.0) - t.log_a[n + 1]));
        const double delta_replayed = t.recursion.step_delta(t.delta[n], n);
        CHECK(delta_replayed == t.delta[n + 1]);
    }
}

TEST_CASE("C_e constant") {
    SUBCASE("gamma+ = 0 collapse") {
        const UpheavalSeed s = synthetic_seed();
        const double ce =
            ce_constant(s, maxwell_kernel(), basic_bounds(), {});
        CHECK(ce == doctest::Approx(std::exp(-5.0 * 0.5 / 2.0)).epsilon(1e-14));
    }
    SUBCASE("no damping at C_L = 0") {
        UpheavalSeed s = synthetic_seed();
        s.C_L = 0.0;
        CHECK(ce_constant(s, maxwell_kernel(), basic_bounds(), {}) == 1.0);
    }
    SUBCASE("the sup over n sits at n = 0") {
        for (double gp : {0.0, 0.5, 1.0}) {
            double best = -1.0;
            int best_n = -1;
            for (int n = 0; n <= 64; ++n) {
                const double value = std::pow(2.0, n * gp / 2.0 - n - 1.0);
                if (value > best) {
                    best = value;
                    best_n = n;
                }
            }
            CHECK(best_n == 0);
            CHECK(best == doctest::Approx(0.5));
        }
    }
}

TEST_CASE("Maxwellian envelope") {
    const CollisionKernel k = maxwell_kernel();
    const CascadeConfig cfg = default_config();

    SUBCASE("lambda plug-in value") {
        CollisionKernel hs = make_hard_sphere_kernel(3);  // gamma = 1
        const UpheavalSeed seed = synthetic_seed();
        const CascadeTrace t = run_cascade(seed, hs, basic_bounds(), cfg);
        const MaxwellianEnvelope env = envelope(t, seed, hs, cfg);
        CHECK(env.lambda ==
              doctest::Approx(std::pow(2.0, 2.0) * std::pow(0.5, 2.5) / 2.0)
                  .epsilon(1e-12));
        CHECK(env.lambda == doctest::Approx(0.35355).epsilon(1e-4));
    }

    SUBCASE("theta inverts the alpha relation exactly") {
        const UpheavalSeed seed = synthetic_seed();
        const CascadeTrace t = run_cascade(seed, k, basic_bounds(), cfg);
        const MaxwellianEnvelope env = envelope(t, seed, k, cfg);
        CHECK(-t.c_delta * t.c_delta / (2.0 * env.theta) ==
              doctest::Approx(env.log_alpha).epsilon(1e-12));
        CHECK(env.contraction_ok);
    }

    SUBCASE("doubling lower bound holds along the trace") {
        const UpheavalSeed seed = synthetic_seed();
        const CascadeTrace t = run_cascade(seed, k, basic_bounds(), cfg);
        const MaxwellianEnvelope env = envelope(t, seed, k, cfg);
        for (std::size_t n = 0; n < t.log_a.size(); ++n) {
            CHECK(t.log_a[n] >=
                  env.log_alpha * std::pow(2.0, double(n)) * (1.0 + 1e-12));
        }
    }

    SUBCASE("synthetic matched trace needs no shrink") {
        // a_n = alpha^{2^n}, delta_n = c_delta 2^{n/2}: the anchors agree
        // with the Maxwellian by construction
        CascadeTrace t;
        t.xi = 0.5;
        const double alpha = 0.3;
        t.c_delta = 1.0;
        for (int n = 0; n <= 30; ++n) {
            t.log_a.push_back(std::pow(2.0, n) * std::log(alpha));
            t.delta.push_back(std::pow(2.0, 0.5 * n));
        }
        t.recursion.log_prefactor = 0.0;
        t.recursion.gamma_plus_dim = 3.0;
        t.recursion.xi = 0.5;
        t.recursion.exponent = 2.5;
        UpheavalSeed seed = synthetic_seed();
        seed.delta0 = 1.0;
        seed.log_a0 = std::log(alpha);
        const MaxwellianEnvelope env = envelope(t, seed, k, cfg);
        CHECK(env.shrink_factor == 1.0);
    }

    SUBCASE("degenerate trace is rejected") {
        CascadeTrace t;
        t.c_delta = 0.0;
        CHECK_THROWS_AS(envelope(t, synthetic_seed(), k, cfg),
                        DegenerateEnvelope);
    }
}

TEST_CASE("space uniformization") {
    SUBCASE("centered case") {
        const UniformizedBound u = uniformize(std::log(2.0), 1.0, 0.0, 3);
        CHECK(u.theta_prime == doctest::Approx(0.5));
        CHECK(u.log_rho_prime ==
              doctest::Approx(std::log(2.0 / std::pow(2.0, 1.5))).epsilon(1e-12));
    }
    SUBCASE("plug-in value") {
        const UniformizedBound u = uniformize(0.0, 1.0, 1.0, 3);
        CHECK(std::exp(u.log_rho_prime) ==
              doctest::Approx(0.13007).epsilon(1e-4));
        CHECK(u.theta_prime == doctest::Approx(0.5));
    }
    SUBCASE("pointwise domination witness") {
        // rho e^{-|v-vbar|^2/(2 theta)} (2 pi theta)^{-N/2} stays above the
        // uniformized Maxwellian for every |vbar| <= R0
        const double rho = 1.0, theta = 1.0, R0 = 1.0;
        const UniformizedBound u = uniformize(std::log(rho), theta, R0, 3);
        for (double vx = -4.0; vx <= 4.0; vx += 0.25) {
            for (double vbx : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
                const double lhs = std::log(rho) -
                                   1.5 * std::log(2.0 * M_PI * theta) -
                                   (vx - vbx) * (vx - vbx) / (2.0 * theta);
                const double rhs =
                    u.log_rho_prime -
                    1.5 * std::log(2.0 * M_PI * u.theta_prime) -
                    vx * vx / (2.0 * u.theta_prime);
                CHECK(lhs >= rhs - 1e-12);
            }
        }
    }
}

TEST_CASE("end-to-end cutoff certification") {
    const CollisionKernel k = maxwell_kernel();
    const AprioriBounds b = basic_bounds();
    CascadeConfig cfg = default_config();
    cfg.delta0_rule = Delta0Rule::user(0.5);

    SUBCASE("produces a valid deterministic certificate") {
        const Certificate c1 = certify_cutoff(k, b, 0.5, cfg);
        const Certificate c2 = certify_cutoff(k, b, 0.5, cfg);
        CHECK(c1.to_json().dump() == c2.to_json().dump());
        CHECK(c1.kind == Certificate::Kind::Maxwellian);
        CHECK(c1.theta_prime > 0.0);
        CHECK(std::isfinite(c1.log_rho_prime));
        CHECK(c1.provenance.at("domination_shrink_factor").get<double>() <=
              10.0);
        // round trip through JSON
        const Certificate back = Certificate::from_json(c1.to_json());
        CHECK(back.to_json().dump() == c1.to_json().dump());
    }

    SUBCASE("non-cutoff kernels are rejected") {
        const CollisionKernel nc = make_power_law_kernel(3, 0.0, 1.0, 1.0);
        CHECK_THROWS_AS(certify_cutoff(nc, b, 0.5, cfg), ConfigError);
    }

    SUBCASE("monotone degradation") {
        const Certificate base = certify_cutoff(k, b, 0.5, cfg);
        // more waiting time never improves the density bound
        const Certificate longer = certify_cutoff(k, b, 1.0, cfg);
        CHECK(longer.log_rho_prime <= base.log_rho_prime + 1e-9);
        // weaker mass lower bound never improves the certificate
        AprioriBounds weaker = b;
        weaker.rho_min = 0.5;
        const Certificate low = certify_cutoff(k, weaker, 0.5, cfg);
        CHECK(low.log_rho_prime <= base.log_rho_prime + 1e-9);
        CHECK(low.theta_prime <= base.theta_prime * (1.0 + 1e-9));
    }
}
