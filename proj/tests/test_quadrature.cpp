#include <cmath>

#include <doctest.h>

#include "minorant/errors.hpp"
#include "minorant/quadrature.hpp"

using namespace minorant;

TEST_CASE("constant and smooth integrands") {
    CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0).value ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    // polynomial well beyond the Gauss rule's exactness degree
    CHECK(integrate([](double x) { return std::pow(x, 17.0); }, 0.0, 1.0).value ==
          doctest::Approx(1.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("reversed limits flip the sign") {
    const double forward =
        integrate([](double x) { return x * x; }, 0.0, 2.0).value;
    const double backward =
        integrate([](double x) { return x * x; }, 2.0, 0.0).value;
    CHECK(forward == doctest::Approx(-backward).epsilon(1e-14));
}

TEST_CASE("integrable endpoint singularities") {
    // int_0^1 x^{-1/2} = 2
    const QuadratureResult r = integrate_left_power(
        [](double x) { return 1.0 / std::sqrt(x); }, 1.0, -0.5);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));

    // int_0^1 x^{0.3} = 1/1.3 with a mild power
    const QuadratureResult s = integrate_left_power(
        [](double x) { return std::pow(x, 0.3); }, 1.0, 0.3);
    CHECK(s.value == doctest::Approx(1.0 / 1.3).epsilon(1e-11));
}

TEST_CASE("non-integrable integrand reports failure") {
    QuadratureOptions opt;
    opt.max_panels = 200;
    CHECK_THROWS_AS(
        integrate_or_throw([](double x) { return 1.0 / x; }, 0.0, 1.0, opt),
        QuadratureFailure);
    CHECK_THROWS_AS(integrate_left_power([](double x) { return 1.0 / x; }, 1.0,
                                         -1.5),
                    QuadratureFailure);
}
