#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <doctest.h>

#include "minorant/errors.hpp"
#include "minorant/kernel.hpp"
#include "minorant/quadrature.hpp"

using namespace minorant;

namespace {

CollisionKernel tabulated_kernel(int dimension,
                                 const std::function<double(double)>& b) {
    std::vector<double> theta, value;
    for (int i = 1; i <= 4096; ++i) {
        const double t = M_PI * i / 4096.0;
        theta.push_back(t);
        value.push_back(b(t));
    }
    CollisionKernel k;
    k.dimension = dimension;
    k.profile = AngularProfile::tabulated(theta, value);
    return k;
}

}  // namespace

TEST_CASE("sphere and ball measures") {
    CHECK(sphere_area(0) == doctest::Approx(2.0));
    CHECK(sphere_area(1) == doctest::Approx(2.0 * M_PI));
    CHECK(sphere_area(2) == doctest::Approx(4.0 * M_PI));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("angular mass n_b") {
    // b = 1, N = 3: 2 pi int_0^pi sin = 4 pi
    const CollisionKernel hs3 = make_hard_sphere_kernel(3);
    CHECK(angular_mass_nb(hs3) ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-10));

    // b = 1, N = 2: surface measure of the unit circle
    const CollisionKernel hs2 = make_hard_sphere_kernel(2);
    CHECK(angular_mass_nb(hs2) ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-10));

    // grazing singularity with nu in (-1, 0): integrable but singular.
    // The preset gives b sin = b0 theta^{-0.5} exactly below the clamp
    // angle, so that part has a closed form; the smooth tail is quadrature.
    const CollisionKernel soft = make_power_law_kernel(3, 0.0, -0.5, 1.0);
    const double clamp_angle = 3.0 * M_PI / 4.0;
    const double head = 2.0 * std::sqrt(clamp_angle);
    const double tail = integrate_or_throw(
        [&](double t) { return soft.profile(t) * std::sin(t); }, clamp_angle,
        M_PI);
    CHECK(angular_mass_nb(soft) ==
          doctest::Approx(2.0 * M_PI * (head + tail)).epsilon(1e-9));

    CHECK_THROWS_AS(angular_mass_nb(make_power_law_kernel(3, 0.0, 0.5, 1.0)),
                    NonIntegrableAngular);
}

TEST_CASE("momentum transfer m_b") {
    const CollisionKernel hs3 = make_hard_sphere_kernel(3);
    CHECK(momentum_transfer_mb(hs3) ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-10));

    const CollisionKernel hs2 = make_hard_sphere_kernel(2);
    CHECK(momentum_transfer_mb(hs2) ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-10));

    // strong grazing singularity nu = 1.5: (1 - cos) tames theta^{-2.5}
    const CollisionKernel strong = make_power_law_kernel(3, 0.0, 1.5, 1.0);
    const double m = momentum_transfer_mb(strong);
    CHECK(std::isfinite(m));
    CHECK(m > 0.0);
}

TEST_CASE("profile scaling is degree one in the angular integrals") {
    const CollisionKernel one = make_hard_sphere_kernel(3, 1.0);
    const CollisionKernel three = make_hard_sphere_kernel(3, 3.0);
    CHECK(angular_mass_nb(three) ==
          doctest::Approx(3.0 * angular_mass_nb(one)).epsilon(1e-12));
    CHECK(momentum_transfer_mb(three) ==
          doctest::Approx(3.0 * momentum_transfer_mb(one)).epsilon(1e-12));
}

TEST_CASE("angular infimum ell_b") {
    CHECK(angular_infimum_ellb(make_hard_sphere_kernel(3)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // b(theta) = sin(theta): minimum over [pi/4, 3pi/4] at the endpoints
    const CollisionKernel sine =
        tabulated_kernel(3, [](double t) { return std::sin(t); });
    const double ell = angular_infimum_ellb(sine);
    const double expected = std::sqrt(2.0) / 2.0;
    CHECK(ell <= expected);          // certified lower bound never overclaims
    CHECK(ell > expected - 5e-3);

    // theta^{-2}-type profile: infimum sits near the right endpoint
    const CollisionKernel decaying = make_power_law_kernel(3, 0.0, 1.0, 1.0);
    double dense_min = decaying.profile(M_PI / 4.0);
    for (int i = 0; i <= 10000; ++i) {
        const double t = M_PI / 4.0 + (M_PI / 2.0) * i / 10000.0;
        dense_min = std::min(dense_min, decaying.profile(t));
    }
    const double ell_dec = angular_infimum_ellb(decaying);
    CHECK(ell_dec <= dense_min);
    CHECK(ell_dec > 0.995 * dense_min);
    // and the endpoint value is within a percent of the infimum
    CHECK(decaying.profile(3.0 * M_PI / 4.0) ==
          doctest::Approx(dense_min).epsilon(0.02));

    const CollisionKernel vanishing =
        tabulated_kernel(3, [](double t) { return std::max(0.0, t - 2.0); });
    CHECK_THROWS_AS(angular_infimum_ellb(vanishing), NonPositiveInfimum);
}

TEST_CASE("split kernel integrals") {
    const CollisionKernel k = make_power_law_kernel(3, 0.0, 1.0, 1.0);

    SUBCASE("domain checks") {
        CHECK_THROWS_AS(split_kernel(k, 0.9), InvalidEps);
        CHECK_THROWS_AS(split_kernel(k, 0.0), InvalidEps);
        CHECK_THROWS_AS(split_kernel(make_hard_sphere_kernel(3), 0.1),
                        InvalidEps);
    }

    SUBCASE("monotonicity in eps") {
        double prev_n = -1.0, prev_m = -1.0;
        bool first = true;
        for (double eps : {0.05, 0.1, 0.2, 0.4}) {
            const SplitAngularIntegrals s = split_kernel(k, eps);
            if (!first) {
                CHECK(s.n_bS <= prev_n);  // cutoff mass shrinks
                CHECK(s.m_bR >= prev_m);  // grazing transfer grows
            }
            prev_n = s.n_bS;
            prev_m = s.m_bR;
            first = false;
        }
    }

    SUBCASE("grazing and cutoff momentum transfer sum to m_b") {
        const double eps = 0.3;
        const SplitAngularIntegrals s = split_kernel(k, eps);
        const double m_cutoff_part =
            sphere_area(1) *
            integrate_or_throw(
                [&](double t) {
                    return k.profile(t) * (1.0 - std::cos(t)) * std::sin(t);
                },
                eps, M_PI);
        CHECK(s.m_bR + m_cutoff_part ==
              doctest::Approx(momentum_transfer_mb(k)).epsilon(1e-9));
    }

    SUBCASE("power-law asymptotics for nu > 0") {
        for (double nu : {0.5, 1.0, 1.5}) {
            const CollisionKernel kp = make_power_law_kernel(3, 0.0, nu, 1.0);
            const double eps = 1e-3;
            const SplitAngularIntegrals s = split_kernel(kp, eps);
            const double n_form =
                sphere_area(1) * kp.b0 / nu * std::pow(eps, -nu);
            const double m_form = sphere_area(1) * kp.b0 *
                                  std::pow(eps, 2.0 - nu) /
                                  (2.0 * (2.0 - nu));
            CHECK(s.n_bS / n_form == doctest::Approx(1.0).epsilon(0.05));
            CHECK(s.m_bR / m_form == doctest::Approx(1.0).epsilon(0.05));
        }
    }

    SUBCASE("logarithmic growth for nu = 0") {
        const CollisionKernel k0 = make_power_law_kernel(3, 0.0, 0.0, 1.0);
        const double eps = std::exp(-7.0);
        // the |log eps| law is additive-constant free only as a slope:
        // n_bS(eps/e) - n_bS(eps) ~ |S^{N-2}| b0
        const double slope = (split_kernel(k0, eps / M_E).n_bS -
                              split_kernel(k0, eps).n_bS) /
                             (sphere_area(1) * k0.b0);
        CHECK(slope == doctest::Approx(1.0).epsilon(0.10));
    }

    SUBCASE("asymptotic ratio converges along a geometric sequence") {
        const CollisionKernel kp = make_power_law_kernel(3, 0.0, 1.0, 1.0);
        double prev_gap = 1e9;
        for (double eps : {4e-2, 4e-3, 4e-4}) {
            const double ratio =
                split_kernel(kp, eps).n_bS /
                (sphere_area(1) * kp.b0 / kp.nu * std::pow(eps, -kp.nu));
            const double gap = std::abs(ratio - 1.0);
            CHECK(gap < prev_gap + 1e-12);
            prev_gap = gap;
        }
        CHECK(prev_gap < 5e-4);
    }
}

TEST_CASE("tabulated profile from a two-column file") {
    namespace fs = std::filesystem;
    const std::string path =
        (fs::temp_directory_path() / "minorant_profile_table.txt").string();
    {
        std::ofstream out(path);
        out << "# theta  b\n";
        for (int i = 1; i <= 512; ++i) {
            const double t = M_PI * i / 512.0;
            out << t << " " << 2.0 + std::cos(t) << "\n";
        }
    }
    const AngularProfile p = AngularProfile::tabulated_from_file(path);
    CHECK(p(M_PI / 2.0) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(p(1.0) == doctest::Approx(2.0 + std::cos(1.0)).epsilon(1e-4));
    fs::remove(path);

    CHECK_THROWS_AS(AngularProfile::tabulated({1.0, 0.5}, {1.0, 1.0}),
                    ConfigError);  // theta must increase
    CHECK_THROWS_AS(AngularProfile::tabulated_from_file("/nonexistent/t.txt"),
                    IoError);
}

TEST_CASE("kernel validation") {
    CollisionKernel k = make_hard_sphere_kernel(3);
    CHECK_NOTHROW(k.validate());

    CollisionKernel bad_gamma = k;
    bad_gamma.gamma = 1.5;
    CHECK_THROWS_AS(bad_gamma.validate(), ConfigError);

    CollisionKernel bad_phi = k;
    bad_phi.c_phi = 2.0;
    bad_phi.C_phi = 1.0;
    CHECK_THROWS_AS(bad_phi.validate(), ConfigError);

    // declared asymptotic must match the profile: constant b with nu = -1
    // in dimension 3 behaves like theta^{-1-(-2)}, not theta^{-1-(-1)}
    CollisionKernel mismatched = k;
    mismatched.nu = -1.0;
    CHECK_THROWS_AS(mismatched.validate(), ConfigError);
}

TEST_CASE("mollified kinetic factor") {
    CollisionKernel k = make_power_law_kernel(3, -1.0, -1.0, 1.0);
    k.mollified = true;
    CHECK(k.phi(0.5, true) == doctest::Approx(1.0));   // flat core
    CHECK(k.phi(2.0, true) == doctest::Approx(0.5));   // |z|^gamma outside
    k.mollified = false;
    CHECK(k.phi(0.5, true) == doctest::Approx(2.0));
}

