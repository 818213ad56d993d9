#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "minorant/bkw.hpp"
#include "minorant/bounds.hpp"
#include "minorant/cascade.hpp"
#include "minorant/domination.hpp"
#include "minorant/errors.hpp"
#include "minorant/solver.hpp"

using namespace minorant;

namespace {

CollisionKernel krook_wu_kernel() {
    // normalized Maxwell molecules: b = 1/(4 pi), Phi = 1; the classical
    // BKW relaxation rate for this normalization is 1/6
    CollisionKernel k = make_hard_sphere_kernel(3, 1.0 / (4.0 * M_PI));
    k.gamma = 0.0;
    return k;
}

}  // namespace

TEST_CASE("BKW profile") {
    BKWState state;
    state.S0 = 0.72;

    SUBCASE("equilibrium shape is the unit Maxwellian") {
        BKWState eq = state;
        eq.S0 = 1.0;
        for (double r : {0.0, 0.5, 1.5, 3.0}) {
            Vec v = Vec::zero(3);
            v[0] = r;
            const double maxw = std::exp(-0.5 * r * r) /
                                std::pow(2.0 * M_PI, 1.5);
            CHECK(bkw_evaluate(eq, 0.0, v) ==
                  doctest::Approx(maxw).epsilon(1e-14));
        }
    }

    SUBCASE("mass and energy on the grid") {
        BKWState s = state;
        s.S0 = 0.7;
        const GridDistribution g = bkw_grid(s, 0.0, 64, 8.0);
        const LocalFunctionals lf = local_functionals(g, 2.0);
        CHECK(std::abs(lf.rho - 1.0) <= 1e-6);
        CHECK(std::abs(lf.e - 3.0) <= 1e-5 * 3.0);
    }

    SUBCASE("closed-form moments match the bracket algebra") {
        BKWState s = state;
        s.S0 = 0.7;
        CHECK(bkw_moment(s, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(bkw_moment(s, 0.0, 2.0) == doctest::Approx(3.0).epsilon(1e-13));
        // fourth moment of the BKW family: 15 - 15 (1-S)^2
        const double S = 0.7;
        CHECK(bkw_moment(s, 0.0, 4.0) ==
              doctest::Approx(15.0 - 15.0 * (1.0 - S) * (1.0 - S))
                  .epsilon(1e-12));
    }

    SUBCASE("shape parameter below N/(N+2) is rejected") {
        BKWState bad = state;
        bad.S0 = 0.5;
        CHECK_THROWS_AS(bkw_evaluate(bad, 0.0, Vec::zero(3)), InvalidS);
    }

    SUBCASE("nonnegative on a wide grid") {
        const GridDistribution g = bkw_grid(state, 0.0, 48, 10.0);
        for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(g[i] >= 0.0);
    }
}

TEST_CASE("BKW relaxation rate from the kernel") {
    // b = 1: m2 = 2 pi int sin^3 = 8 pi / 3, rate = 2 pi / 3
    CollisionKernel unit_b = make_hard_sphere_kernel(3, 1.0);
    unit_b.gamma = 0.0;
    CHECK(bkw_rate_maxwell(unit_b) ==
          doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-10));
    // Krook-Wu normalization b = 1/(4 pi): rate = 1/6
    CHECK(bkw_rate_maxwell(krook_wu_kernel()) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK_THROWS_AS(bkw_rate_maxwell(make_hard_sphere_kernel(3)), ConfigError);
}

TEST_CASE("BKW uniform bounds") {
    BKWState state;
    state.S0 = 0.72;
    state.rate = 1.0;

    SUBCASE("conserved moments") {
        const AprioriBounds b = bkw_bounds(state, 0.0);
        CHECK(b.rho_min == 1.0);
        CHECK(b.E == 4.0);
        CHECK(b.W.has_value());
        CHECK(*b.W > 0.0);
        CHECK_NOTHROW(b.validate());
    }

    SUBCASE("equilibrium entropy closed form") {
        BKWState eq = state;
        eq.S0 = 1.0;
        const AprioriBounds b = bkw_bounds(eq, 0.0);
        CHECK(b.H ==
              doctest::Approx(maxwellian_entropy(1.0, 1.0, 3)).epsilon(1e-6));
    }

    SUBCASE("smoothing: W nonincreasing in t_start") {
        const AprioriBounds early = bkw_bounds(state, 0.0);
        const AprioriBounds late = bkw_bounds(state, 2.0);
        CHECK(*late.W <= *early.W * (1.0 + 1e-12));
    }
}

TEST_CASE("homogeneous solver") {
    const CollisionKernel k = krook_wu_kernel();

    SUBCASE("equilibrium is a fixed point") {
        const GridDistribution f0 =
            make_maxwellian_grid(3, 20, 5.0, 1.0, 1.0, Vec::zero(3));
        SolverOptions opts;
        opts.samples_per_node = 20000;
        opts.seed = 5;
        const SolverResult res = solve_homogeneous(k, f0, 0.5, opts);
        CHECK(res.mass_drift_total <= 1e-3);
        const GridDistribution& ff = res.snapshots.back();
        double worst = 0.0;
        for (std::size_t i = 0; i < f0.node_count(); ++i) {
            if (f0.node(i).norm() > 2.5) continue;
            worst = std::max(worst, std::abs(ff[i] - f0[i]) / f0[i]);
        }
        CHECK(worst < 0.05);
    }

    SUBCASE("matches the exact BKW relaxation on a coarse grid") {
        BKWState state;
        state.S0 = 0.72;
        state.rate = bkw_rate_maxwell(k);
        const GridDistribution f0 = bkw_grid(state, 0.0, 16, 6.0);
        SolverOptions opts;
        opts.samples_per_node = 20000;
        opts.seed = 9;
        const double t_end = 0.5;
        const SolverResult res = solve_homogeneous(k, f0, t_end, opts);
        const GridDistribution& ff = res.snapshots.back();
        double worst = 0.0;
        for (std::size_t i = 0; i < ff.node_count(); ++i) {
            const Vec v = ff.node(i);
            if (v.norm() > 3.0) continue;
            const double exact = bkw_evaluate(state, t_end, v);
            worst = std::max(worst, std::abs(ff[i] - exact) / exact);
        }
        CHECK(worst < 0.10);
    }

    SUBCASE("gain spreads mass between two separated bumps") {
        GridDistribution f0(3, 16, 4.0);
        Vec left = Vec::zero(3), right = Vec::zero(3);
        left[0] = -1.5;
        right[0] = 1.5;
        const GridDistribution a =
            make_maxwellian_grid(3, 16, 4.0, 0.5, 0.3, left);
        const GridDistribution b =
            make_maxwellian_grid(3, 16, 4.0, 0.5, 0.3, right);
        for (std::size_t i = 0; i < f0.node_count(); ++i) f0[i] = a[i] + b[i];
        SolverOptions opts;
        opts.samples_per_node = 20000;
        opts.seed = 13;
        opts.drift_limit = 2e-2;  // coarse grid, sharp data
        const SolverResult res = solve_homogeneous(k, f0, 0.4, opts);
        const Vec origin = Vec::zero(3);
        CHECK(res.snapshots.back().at(origin) > f0.at(origin));
    }

    SUBCASE("stability guards") {
        const GridDistribution f0 =
            make_maxwellian_grid(3, 12, 5.0, 1.0, 1.0, Vec::zero(3));
        SolverOptions opts;
        opts.dt = 10.0;  // beyond 0.5 / max_loss
        CHECK_THROWS_AS(solve_homogeneous(k, f0, 1.0, opts), ConfigError);
        CHECK_THROWS_AS(
            solve_homogeneous(make_power_law_kernel(3, 0.0, 1.0, 1.0), f0, 1.0,
                              SolverOptions{}),
            ConfigError);
    }
}

TEST_CASE("domination checks") {
    BKWState state;
    state.S0 = 0.72;
    state.rate = 1.0;
    auto solution = [&state](double t, const Vec& v) {
        return bkw_evaluate(state, t, v);
    };
    VelocityGridSpec grid;
    grid.points_per_axis = 32;
    grid.v_max = 8.0;

    // tight fixture: 0.2 x Maxwellian(theta = 0.7) sits below the BKW
    // family for t >= 0.5 (S in [0.76, 1], so the tail is dominated)
    Certificate cert;
    cert.kind = Certificate::Kind::Maxwellian;
    cert.dimension = 3;
    cert.tau = 0.5;
    cert.R0 = 0.0;
    cert.log_rho_prime = std::log(0.2);
    cert.theta_prime = 0.7;
    cert.provenance["note"] = "hand-built tight fixture";

    const std::vector<double> times{0.5, 1.0, 2.0};

    SUBCASE("tight certificate passes") {
        const DominationReport rep =
            check_domination(cert, solution, times, grid);
        CHECK(rep.pass);
        CHECK(rep.min_margin >= 0.0);
    }

    SUBCASE("inflation flips the verdict") {
        Certificate inflated = cert;
        inflated.log_rho_prime += std::log(1e6);
        const DominationReport rep =
            check_domination(inflated, solution, times, grid);
        CHECK_FALSE(rep.pass);
        CHECK(rep.min_margin < 0.0);
    }

    SUBCASE("shrinking the height never turns pass into fail") {
        Certificate smaller = cert;
        smaller.log_rho_prime -= 5.0;
        const DominationReport rep =
            check_domination(smaller, solution, times, grid);
        CHECK(rep.pass);
    }

    SUBCASE("near-zero heights pass trivially") {
        Certificate tiny = cert;
        tiny.log_rho_prime = -1e6;  // value underflows to zero
        const DominationReport rep =
            check_domination(tiny, solution, times, grid);
        CHECK(rep.pass);
        CHECK(rep.min_margin >= 0.0);
    }

    SUBCASE("times before the stamp are rejected") {
        CHECK_THROWS_AS(check_domination(cert, solution, {0.25}, grid),
                        ConfigError);
    }

    SUBCASE("report serializes") {
        const DominationReport rep =
            check_domination(cert, solution, times, grid);
        const nlohmann::json j = rep.to_json();
        CHECK(j.at("pass").get<bool>() == rep.pass);
        CHECK(j.at("min_margin").get<double>() == rep.min_margin);
    }
}

TEST_CASE("equilibrium dominates every emitted certificate") {
    // sanity ordering: the unit Maxwellian with the solution's own mass and
    // temperature sits above the engine's certificate for those bounds
    CollisionKernel k = krook_wu_kernel();
    AprioriBounds b;
    b.rho_min = 1.0;
    b.E = 4.0;
    b.H = 4.0;
    CascadeConfig cfg;
    cfg.csts.cst_spread = 0.1;
    cfg.csts.cst_CL = 0.5;
    cfg.csts.cst_up = 0.01;
    cfg.delta0_rule = Delta0Rule::user(1.0);
    const Certificate cert = certify_cutoff(k, b, 0.5, cfg);

    GridDistribution nodes(3, 24, 8.0);
    for (std::size_t i = 0; i < nodes.node_count(); ++i) {
        const Vec v = nodes.node(i);
        const double equilibrium =
            std::exp(-0.5 * v.norm2()) / std::pow(2.0 * M_PI, 1.5);
        CHECK(cert.value(v) <= equilibrium);
    }
}

TEST_CASE("grid distribution file round-trip") {
    namespace fs = std::filesystem;
    const GridDistribution g =
        make_maxwellian_grid(3, 12, 4.0, 1.0, 0.8, Vec::zero(3));
    const std::string path =
        (fs::temp_directory_path() / "minorant_grid_roundtrip.bin").string();
    g.save(path);
    const GridDistribution back = GridDistribution::load(path);
    CHECK(back.dimension() == g.dimension());
    CHECK(back.points_per_axis() == g.points_per_axis());
    CHECK(back.v_max() == g.v_max());
    bool identical = true;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        identical &= back[i] == g[i];
    }
    CHECK(identical);
    fs::remove(path);
}
