#include <doctest.h>

#include <cmath>
#include <numeric>

#include "bsdelab/errors.hpp"
#include "bsdelab/quadrature.hpp"
#include "oracles.hpp"

using namespace bsdelab;

TEST_CASE("gauss_hermite matches the Newton-iteration rule") {
    for (int n : {5, 16, 64}) {
        const GaussHermiteRule rule = gauss_hermite(n);
        std::vector<double> x, w;
        oracle::gauss_hermite_newton(n, x, w);
        REQUIRE(rule.nodes.size() == n);
        CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
        // sort order of the library rule is ascending
        for (int i = 0; i < n; ++i) {
            CHECK(rule.nodes[i] == doctest::Approx(x[n - 1 - i]).epsilon(1e-10));
            CHECK(std::abs(rule.weights[i] - w[n - 1 - i]) < 1e-12);
        }
    }
}

TEST_CASE("standard normal moments") {
    CHECK(expect_standard_normal([](double) { return 1.0; }, 20) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(expect_standard_normal([](double x) { return x * x; }, 20) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expect_standard_normal([](double x) { return x * x * x * x; }, 20) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(expect_standard_normal([](double x) { return std::cos(x); }, 64) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("gauss_hermite rejects n < 1") {
    CHECK_THROWS_AS(gauss_hermite(0), PreconditionError);
}
