#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "gravphase/quadrature.hpp"

using namespace gravphase;

TEST_CASE("integrate: polynomials are exact in one panel") {
    // Gauss-7/Kronrod-15 integrates degree <= 13 exactly
    const double v = integrate([](double x) { return x * x * x * x * x; }, 0.0, 1.0);
    CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("integrate: sin over [0, pi]") {
    const double v = integrate([](double x) { return std::sin(x); }, 0.0,
                               std::numbers::pi, 1e-14);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("integrate: narrow Gaussian needs adaptivity") {
    // integral of exp(-1000 (x - 0.3)^2) over [0,1]; the tails past the
    // interval are below 1e-40, so sqrt(pi/1000) is exact for this purpose
    const double v = integrate(
        [](double x) { return std::exp(-1000.0 * (x - 0.3) * (x - 0.3)); }, 0.0,
        1.0, 1e-13);
    CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi / 1000.0)).epsilon(1e-12));
}

TEST_CASE("integrate: reversed interval flips the sign") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 1.0, 0.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate(f, 0.5, 0.5) == 0.0);
}

TEST_CASE("integrate: divergent integrand exhausts the subdivision budget") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10),
                    numerical_error);
}

TEST_CASE("integrate: rejects non-finite bounds") {
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0,
                              std::numeric_limits<double>::infinity()),
                    invalid_parameter);
}
