#include <doctest.h>

#include "bsdelab/config.hpp"
#include "bsdelab/errors.hpp"

using namespace bsdelab;

TEST_CASE("full config round trip") {
    const auto cfg = parse_config(R"(
[problem]
generator = quad_affine(1, 0.1, 0)
terminal = tanh@[T/2,T]
T = 2
L = 3

[problem2]
generator = quad(1)

[pipeline]
kind = QuadraticUniqueness
n_schedule = 8, 16
N = 100
N_schedule = 25, 50
stability_threshold = 0.25

[optimizer]
coarse_points = 129
refine_iters = 40
tol = 1e-7

[tolerances]
uniqueness_tol = 0.05
monotonicity_slack = 1e-5
fp_tol = 1e-11
fp_max_iter = 50

[regularize]
direction = inf
penalty = quadratic
n = 8

[bounds]
declared_L = 0.5

[run]
seed = 18446744073709551557
output_dir = /tmp/x
validation_samples = 10
)");
    CHECK(cfg.problem.generator == "quad_affine(1, 0.1, 0)");
    CHECK(cfg.T == 2.0);
    CHECK(cfg.generator().L() == 3.0);
    CHECK(cfg.terminal().arity() == 2);
    REQUIRE(cfg.problem2);
    CHECK(cfg.terminal2().name() == "sin@T");
    CHECK(cfg.pipeline == Pipeline::QuadraticUniqueness);
    CHECK(cfg.n_schedule == std::vector<double>{8, 16});
    CHECK(cfg.N == 100);
    CHECK(cfg.N_schedule == std::vector<int>{25, 50});
    CHECK(cfg.stability_threshold == 0.25);
    CHECK(cfg.optimizer.coarse_points == 129);
    CHECK(cfg.optimizer.tol == 1e-7);
    CHECK(cfg.uniqueness_tol == 0.05);
    CHECK(cfg.effective_monotonicity_slack() == 1e-5);
    CHECK(cfg.fixed_point.tol == 1e-11);
    CHECK(cfg.fixed_point.max_iter == 50);
    CHECK(cfg.regularize.direction == Direction::Inf);
    CHECK(cfg.regularize.n == 8.0);
    CHECK(cfg.declared_L == 0.5);
    CHECK(cfg.seed == 18446744073709551557ULL);
    CHECK(cfg.output_dir == "/tmp/x");
    CHECK(cfg.validation_samples == 10);
}

TEST_CASE("defaults") {
    const auto cfg = parse_config("[problem]\ngenerator = quad(1)\n");
    CHECK(cfg.n_schedule == std::vector<double>{4, 8, 16, 32, 64});
    CHECK(cfg.N == 200);
    CHECK(cfg.uniqueness_tol == 1e-2);
    CHECK(cfg.effective_monotonicity_slack() == doctest::Approx(1e-6 + 2e-12));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_config("[bogus]\nx = 1\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("[run]\nseed = -3\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("[pipeline]\nkind = dance\n"), PreconditionError);
    CHECK_THROWS_AS(parse_config("[pipeline]\nN = abc\n"), PreconditionError);
    // quad(2) has L = 1: n = 2 is on the threshold
    CHECK_THROWS_AS(parse_config("[problem]\ngenerator = quad(2)\n[pipeline]\nn_schedule = 2, 4\n").validate(),
                    PreconditionError);
    CHECK_THROWS_AS(parse_config("[pipeline]\nn_schedule = 8, 4\n").validate(), PreconditionError);
    CHECK_THROWS_AS(parse_config("[pipeline]\nkind = compare\n").validate(), PreconditionError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), std::exception);
}

TEST_CASE("pipeline names") {
    CHECK(parse_pipeline("uniqueness") == Pipeline::QuadraticUniqueness);
    CHECK(parse_pipeline("linear-uniqueness") == Pipeline::LinearUniqueness);
    CHECK(parse_pipeline("converge") == Pipeline::Convergence);
    CHECK(parse_pipeline("bounds") == Pipeline::BoundsAudit);
    CHECK(parse_pipeline("compare") == Pipeline::Comparison);
    CHECK(parse_pipeline(to_string(Pipeline::Regularize)) == Pipeline::Regularize);
}
