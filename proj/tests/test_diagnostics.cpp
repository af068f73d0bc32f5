#include <doctest.h>

#include <cmath>

#include "bsdelab/diagnostics.hpp"
#include "bsdelab/solver.hpp"

using namespace bsdelab;

TEST_CASE("bound formulas") {
    CHECK(y_bound(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(y_bound(1.0, 1.0, 0.0) == doctest::Approx(2 * std::exp(1.0) - 1));
    CHECK(z_bound(2.0, 1.0, 0.5) == doctest::Approx(2 * std::exp(1.0)));
    CHECK(bound_slack(1.0, 1.0, 0.01) == doctest::Approx(0.5 * std::exp(1.0)));
}

TEST_CASE("solution bounds") {
    const Lattice lat(1.0, 200);
    const auto sin_T = make_terminal("sin@T", 1.0);
    SUBCASE("zero driver passes with margin") {
        const auto sol = solve_backward(make_generator("zero"), sin_T, lat);
        CHECK(check_solution_bounds(sol, 1.0).passed());
        CHECK(sol.z_sup <= 1.0);
        CHECK(worst_offenders(sol, 1.0, 5).empty());
    }
    SUBCASE("quadratic driver passes") {
        CHECK(check_solution_bounds(solve_backward(make_generator("quad(1)"), sin_T, lat), 1.0).passed());
    }
    SUBCASE("3 sin declared with L=1 fails at maturity") {
        const auto sol = solve_backward(make_generator("zero"), make_terminal("sin(3)@T", 1.0), lat);
        const auto rep = check_solution_bounds(sol, 1.0);
        CHECK_FALSE(rep.passed());
        REQUIRE(rep.witness);
        CHECK(std::abs(rep.witness->y) > 1.0);
        const auto off = worst_offenders(sol, 1.0, 20);
        REQUIRE_FALSE(off.empty());
        CHECK(off.size() <= 20);
        for (std::size_t i = 1; i < off.size(); ++i)
            CHECK(std::max(off[i].y_excess, off[i].z_excess) <= std::max(off[i - 1].y_excess, off[i - 1].z_excess));
    }
    SUBCASE("L = 0.1 fails") {
        const auto rep = check_solution_bounds(solve_backward(make_generator("quad(1)"), sin_T, lat), 0.1);
        CHECK_FALSE(rep.passed());
        CHECK(rep.witness);
    }
}

TEST_CASE("BMO estimate") {
    const Lattice lat(1.0, 100);
    CHECK(bmo_estimate(solve_backward(make_generator("zero"), make_terminal("identity@T", 1.0), lat)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bmo_estimate(solve_backward(make_generator("zero"), make_terminal("const(1)@T", 1.0), lat)) == 0.0);
    const auto q = solve_backward(make_generator("quad(1)"), make_terminal("sin@T", 1.0), Lattice(1.0, 200));
    // direct forward sum over the lattice paths of E[sum Z^2 dt] at the root
    Eigen::ArrayXd prob = Eigen::ArrayXd::Ones(1);
    double root = 0.0;
    for (int i = 0; i < q.N; ++i) {
        root += (prob * q.Z[i].square()).sum() * q.dt();
        Eigen::ArrayXd next = Eigen::ArrayXd::Zero(i + 2);
        next.head(i + 1) += 0.5 * prob;
        next.tail(i + 1) += 0.5 * prob;
        prob = next;
    }
    CHECK(q.bmo >= root - 1e-12);
    CHECK(std::isfinite(q.bmo));
    CHECK(q.bmo <= q.z_sup * q.z_sup * q.T + 1e-12);
}
