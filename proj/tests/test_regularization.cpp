#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsdelab/errors.hpp"
#include "bsdelab/regularization.hpp"
#include "oracles.hpp"

using namespace bsdelab;

namespace {

const OptimizerConfig kOpt{};
const auto kSquare = [](double v) { return v * v; };
const auto kIdentity = [](double d) { return d; };

double grid_sup_quadratic(double n, double z) {
    return oracle::grid_convolution(kSquare, [n](double d) { return n * d * d; }, +1, z, 6.0);
}
double grid_inf_quadratic(double n, double z) {
    return oracle::grid_convolution(kSquare, [n](double d) { return n * d * d; }, -1, z, 6.0);
}

std::vector<SamplePoint> z_line(double zmax, int m) {
    std::vector<SamplePoint> pts;
    for (int k = 0; k < m; ++k) pts.push_back({0.0, 0.0, -zmax + 2.0 * zmax * k / (m - 1)});
    return pts;
}

}  // namespace

TEST_CASE("closed-form quadratic convolutions of z^2") {
    const auto g = make_generator("quad(2)");
    CHECK(convolution_value(g, {Direction::Sup, Penalty::Quadratic, 4}, kOpt, 0, 0, 1.0) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(convolution_value(g, {Direction::Inf, Penalty::Quadratic, 4}, kOpt, 0, 0, 1.0) ==
          doctest::Approx(4.0 / 5.0).epsilon(1e-9));
    CHECK(grid_sup_quadratic(4, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(grid_inf_quadratic(4, 1.0) == doctest::Approx(4.0 / 5.0).epsilon(1e-8));
}

TEST_CASE("constant generator is a fixed point") {
    const auto g = make_generator("const(1.5)");
    for (double z : {-3.0, 0.0, 2.2})
        for (auto spec : {PenaltySpec{Direction::Sup, Penalty::Linear, 4}, PenaltySpec{Direction::Inf, Penalty::Linear, 4}})
            CHECK(convolution_value(g, spec, kOpt, 0, 0, z) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("Lipschitz inf-convolution with the linear penalty is the identity") {
    const auto g = make_generator("abs");
    CHECK(convolution_value(g, {Direction::Inf, Penalty::Linear, 2}, kOpt, 0, 0, 2.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(oracle::grid_convolution([](double v) { return std::abs(v); }, [](double d) { return 1.0 * d; }, -1, 2.0,
                                   5.0) == doctest::Approx(2.0).epsilon(1e-12));
    // n = L sits on the admissibility threshold and is refused
    CHECK_THROWS_AS(check_penalty_spec(g, {Direction::Inf, Penalty::Linear, 1}), PreconditionError);
}

TEST_CASE("penalty precondition") {
    const auto q = make_generator("quad(2)");
    CHECK_THROWS_AS(check_penalty_spec(q, {Direction::Sup, Penalty::Quadratic, 2.0}), PreconditionError);
    CHECK_NOTHROW(check_penalty_spec(q, {Direction::Sup, Penalty::Quadratic, 2.0 + 1e-6}));
    CHECK_THROWS_AS(check_penalty_spec(q, {Direction::Sup, Penalty::Linear, 8.0}), PreconditionError);
    CHECK_THROWS_AS(check_penalty_spec(make_generator("abs"), {Direction::Sup, Penalty::Quadratic, 8.0}),
                    PreconditionError);
    CHECK_THROWS_AS(convolve(q, {Direction::Sup, Penalty::Quadratic, 1.0}), PreconditionError);
    try {
        check_penalty_spec(q, {Direction::Sup, Penalty::Quadratic, 1.5});
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
    CHECK(parse_direction("Inf") == Direction::Inf);
    CHECK(parse_penalty("LinearPenalty") == Penalty::Linear);
    CHECK_THROWS_AS(parse_penalty("cubic"), PreconditionError);
}

TEST_CASE("lemma growth bounds") {
    const Box box = Box::symmetric(1.0, 3.0, 3.0);
    CHECK(verify_lemma_bounds(make_generator("quad(2)"), {Direction::Sup, Penalty::Quadratic, 4}, kOpt, box, 400, 1)
              .passed());
    CHECK(verify_lemma_bounds(make_generator("abs"), {Direction::Sup, Penalty::Linear, 2}, kOpt, box, 400, 1).passed());
    CHECK(verify_lemma_bounds(make_generator("zero"), {Direction::Inf, Penalty::Linear, 2}, kOpt, box, 100, 1).passed());
}

TEST_CASE("monotone in n") {
    const auto g = make_generator("quad(2)");
    const std::vector<SamplePoint> at_one{{0.0, 0.0, 1.0}};
    const std::vector<double> ns{4, 8, 16};
    CHECK(verify_monotone_in_n(g, Direction::Sup, Penalty::Quadratic, ns, at_one, kOpt).passed());
    const std::vector<double> ns2{4, 8};
    CHECK(verify_monotone_in_n(g, Direction::Inf, Penalty::Quadratic, ns2, at_one, kOpt).passed());
    CHECK(verify_monotone_in_n(make_generator("zero"), Direction::Sup, Penalty::Linear, ns, z_line(3, 13), kOpt)
              .passed());
    for (double n : ns)
        CHECK(convolution_value(g, {Direction::Sup, Penalty::Quadratic, n}, kOpt, 0, 0, 1.0) ==
              doctest::Approx(n / (n - 1)).epsilon(1e-9));
}

TEST_CASE("pointwise convergence") {
    SUBCASE("z^2 along z_n = 1 + 1/n") {
        std::vector<double> ns;
        for (double n = 4; n <= 256; n *= 2) ns.push_back(n);
        const auto tr = verify_pointwise_convergence(make_generator("quad(2)"), Direction::Sup, Penalty::Quadratic, ns,
                                                     0, 0, 1.0, [](double n) { return 1.0 + 1.0 / n; }, kOpt, 0.35);
        CHECK(tr.report.passed());
        REQUIRE(tr.gaps.size() == ns.size());
        CHECK(tr.gaps.back() < 0.35);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double n = ns[i], zn = 1.0 + 1.0 / n;
            CHECK(tr.gaps[i] == doctest::Approx(n * zn * zn / (n - 1) - 1.0).epsilon(1e-8));
            CHECK(tr.gaps[i] <= tr.rate_bounds[i]);
        }
        for (std::size_t i = 1; i < ns.size(); ++i) CHECK(tr.gaps[i] < tr.gaps[i - 1]);
    }
    SUBCASE("constant") {
        const std::vector<double> ns{2, 4, 8};
        const auto tr = verify_pointwise_convergence(make_generator("const(0.7)"), Direction::Sup, Penalty::Linear, ns,
                                                     0, 0, 1.0, [](double) { return 1.0; }, kOpt);
        for (double gap : tr.gaps) CHECK(gap <= 1e-12);
        CHECK(tr.report.passed());
    }
    SUBCASE("abs under Inf+Linear is exact") {
        const std::vector<double> ns{2, 4, 8, 16};
        const auto tr = verify_pointwise_convergence(make_generator("abs"), Direction::Inf, Penalty::Linear, ns, 0, 0,
                                                     2.0, [](double) { return 2.0; }, kOpt);
        for (double gap : tr.gaps) CHECK(gap <= 1e-12);
    }
    SUBCASE("a tail above tolerance fails") {
        const std::vector<double> ns{4, 8};
        const auto tr = verify_pointwise_convergence(make_generator("quad(2)"), Direction::Sup, Penalty::Quadratic, ns,
                                                     0, 0, 1.0, [](double) { return 1.0; }, kOpt, 1e-3);
        CHECK_FALSE(tr.report.passed());
    }
}

TEST_CASE("local Lipschitz of the convolution") {
    using Pair = std::pair<SamplePoint, SamplePoint>;
    const std::vector<Pair> zpair{{{0, 0, 0}, {0, 0, 1}}};
    CHECK(verify_local_lipschitz(make_generator("quad(2)"), {Direction::Sup, Penalty::Quadratic, 8}, kOpt, zpair)
              .passed());
    const std::vector<Pair> ypair{{{0, -1, 0.5}, {0, 2, 0.5}}};
    const auto fy = Generator("y", [](double, double y, double) { return y; }, GrowthClass::Linear, 1.0, 1.0);
    CHECK(verify_local_lipschitz(fy, {Direction::Sup, Penalty::Linear, 2}, kOpt, ypair).passed());
    const std::vector<Pair> far{{{0, 0, 0}, {0, 0, 3}}};
    CHECK(verify_local_lipschitz(make_generator("abs"), {Direction::Inf, Penalty::Linear, 2}, kOpt, far).passed());
    // quadratic item (4) is only claimed from n >= 2L + 1
    CHECK_THROWS_AS(verify_local_lipschitz(make_generator("quad(2)"), {Direction::Sup, Penalty::Quadratic, 2.5}, kOpt,
                                           zpair),
                    PreconditionError);
}

TEST_CASE("ordering sup >= f >= inf") {
    const auto pts = z_line(4, 41);
    CHECK(verify_ordering(make_generator("quad(2)"), Penalty::Quadratic, 4, kOpt, pts).passed());
    CHECK(verify_ordering(make_generator("sin"), Penalty::Linear, 2, kOpt, pts).passed());
    CHECK(verify_ordering(make_generator("softabs"), Penalty::Linear, 3, kOpt, pts).passed());
}

TEST_CASE("convolve wraps the generator") {
    const auto g = make_generator("quad(2)");
    const auto f4 = convolve(g, {Direction::Sup, Penalty::Quadratic, 4});
    CHECK(f4.growth_class() == GrowthClass::Quadratic);
    CHECK(f4.L() == doctest::Approx(2.0));
    REQUIRE(f4.K());
    CHECK(*f4.K() == doctest::Approx(4.0));
    for (double z : {-3.0, -0.4, 0.0, 1.7, 3.0}) CHECK(f4(0, 0, z) == doctest::Approx(4 * z * z / 3).epsilon(1e-9));
    // widening the search interval does not change the value
    CHECK(convolution_value(g, {Direction::Sup, Penalty::Quadratic, 4}, kOpt, 0, 0, 2.5, 3.0) ==
          doctest::Approx(f4(0, 0, 2.5)).epsilon(1e-10));
}
