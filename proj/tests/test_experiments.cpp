#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsdelab/experiments.hpp"
#include "bsdelab/report_io.hpp"
#include "oracles.hpp"

using namespace bsdelab;

namespace {

ExperimentConfig base(const char* generator, std::vector<double> ns, int N = 200) {
    ExperimentConfig cfg;
    cfg.problem.generator = generator;
    cfg.problem.terminal = "sin@T";
    cfg.n_schedule = std::move(ns);
    cfg.N = N;
    cfg.validation_samples = 200;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("quadratic uniqueness for z^2/2") {
    const auto rep = run_quadratic_uniqueness(base("quad(1)", {4, 8, 16, 32, 64}));
    CHECK(rep.pass);
    REQUIRE(rep.rows.size() == 5);
    for (const auto& r : rep.rows) CHECK(r.solved);
    CHECK(rep.gap_strictly_decreasing);
    CHECK(rep.final_gap <= 1e-2);
    CHECK(rep.localized_diff <= 1e-2);
    CHECK(rep.sup_monotonicity_defect <= rep.monotonicity_slack);
    CHECK(rep.inf_monotonicity_defect <= rep.monotonicity_slack);
    const double cole_hopf = std::log(oracle::normal_expectation([](double x) { return std::exp(std::sin(x)); }));
    CHECK(rep.rows.back().Y0_max >= cole_hopf - 5e-3);
    CHECK(rep.rows.back().Y0_min <= cole_hopf + 5e-3);
}

TEST_CASE("Lipschitz driver: both convolutions are the driver") {
    // sin declared as a quadratic-class driver with L = 1
    auto cfg = base("power(1.5, 0.5)", {4, 8});
    cfg.problem.generator = "trig(1, 0)";
    const auto lin = run_linear_uniqueness(cfg);
    for (const auto& r : lin.rows) {
        CHECK(r.solved);
        CHECK(std::abs(r.gap) <= 2 * cfg.fixed_point.tol);
    }
    CHECK(lin.pass);
}

TEST_CASE("zero driver gives E[xi]") {
    const auto rep = run_linear_uniqueness(base("zero", {2, 4}));
    for (const auto& r : rep.rows) {
        CHECK(r.Y0_max == doctest::Approx(0.0).scale(1.0));
        CHECK(r.gap == 0.0);
    }
}

TEST_CASE("linear uniqueness") {
    SUBCASE("abs") {
        const auto rep = run_linear_uniqueness(base("abs", {2, 4}));
        CHECK(rep.pass);
        for (const auto& r : rep.rows) CHECK(std::abs(r.gap) <= 2e-12);
    }
    SUBCASE("softabs at n = 64") {
        const auto rep = run_linear_uniqueness(base("softabs", {2, 8, 64}));
        CHECK(rep.pass);
        CHECK(rep.final_gap < 1e-2);
    }
    CHECK_THROWS(run_linear_uniqueness(base("quad(1)", {4})));
    CHECK_THROWS(run_quadratic_uniqueness(base("abs", {4})));
}

TEST_CASE("stability guard records skipped n") {
    // n = 4: 4.18 * sqrt(dt) = 0.296; n = 64: 3.75 * sqrt(dt) = 0.265 (both on the a priori z-range)
    auto cfg = base("quad(1)", {4, 64});
    cfg.stability_threshold = 0.28;
    const auto rep = run_quadratic_uniqueness(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK_FALSE(rep.rows[0].solved);
    CHECK_FALSE(rep.rows[0].skip_reason.empty());
    CHECK(rep.rows[1].solved);
    const auto table = uniqueness_table(rep);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == "skipped");

    cfg.N = 10;
    const auto none = run_quadratic_uniqueness(cfg);
    CHECK_FALSE(none.pass);
    CHECK(none.rows.size() == 2);
}

TEST_CASE("convergence study") {
    SUBCASE("successive distances decrease for z^2/2") {
        auto cfg = base("quad(1)", {4, 8, 16, 32});
        cfg.N_schedule = {200};
        const auto study = run_convergence_study(cfg);
        REQUIRE(study.rows.size() == 4);
        CHECK(study.reference_kind == "cole-hopf");
        for (std::size_t i = 2; i < study.rows.size(); ++i) {
            CHECK(*study.rows[i].y_dist < *study.rows[i - 1].y_dist);
            CHECK(*study.rows[i].z_dist < *study.rows[i - 1].z_dist);
        }
    }
    SUBCASE("zero driver") {
        auto cfg = base("zero", {2, 4, 8});
        cfg.N_schedule = {50};
        for (const auto& r : run_convergence_study(cfg).rows)
            if (r.y_dist) {
                CHECK(*r.y_dist == 0.0);
                CHECK(*r.z_dist == 0.0);
            }
    }
    SUBCASE("linear driver errors halve") {
        auto cfg = base("linear(1, 0.5, 0.2)", {4});
        cfg.N_schedule = {50, 100, 200, 400};
        const auto study = run_convergence_study(cfg);
        REQUIRE(study.rows.size() == 4);
        for (std::size_t i = 1; i < 4; ++i) {
            const double ratio = *study.rows[i - 1].error / *study.rows[i].error;
            CHECK(ratio > 1.7);
            CHECK(ratio < 2.3);
        }
    }
}

TEST_CASE("bounds audit") {
    auto cfg = base("quad(1)", {4});
    CHECK(run_bounds_audit(cfg).report.passed());
    cfg.problem.generator = "zero";
    CHECK(run_bounds_audit(cfg).report.passed());
    cfg.problem.generator = "quad(1)";
    cfg.declared_L = 0.1;
    const auto audit = run_bounds_audit(cfg);
    CHECK_FALSE(audit.report.passed());
    CHECK(audit.report.witness);
    CHECK_FALSE(audit.offenders.empty());
}

TEST_CASE("comparison wrapper") {
    auto cfg = base("quad(1)", {4});
    cfg.problem2 = ProblemSpec{"quad(1)", "sin@T"};
    const auto same = run_comparison(cfg);
    CHECK(same.report.max_residual == 0.0);
    CHECK(same.report.delta_y_min == 0.0);
    cfg.problem2->generator = "quad_affine(1, 0, -1)";
    const auto shifted = run_comparison(cfg);
    CHECK(shifted.pass);
    CHECK(shifted.report.delta_y0 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("regularize table") {
    auto cfg = base("quad(2)", {4});
    cfg.regularize = {Direction::Sup, Penalty::Quadratic, 4};
    const auto rows = run_regularize(cfg);
    REQUIRE(rows.size() == 61);
    for (const auto& r : rows) CHECK(r.f_n == doctest::Approx(4 * r.z * r.z / 3).epsilon(1e-9));
}

TEST_CASE("reports are byte-identical across runs") {
    const auto dir = std::filesystem::temp_directory_path() / "bsdelab_test_repro";
    std::filesystem::remove_all(dir);
    const auto cfg = base("quad(1)", {4, 8});
    write_csv(dir / "a.csv", uniqueness_table(run_quadratic_uniqueness(cfg)));
    write_csv(dir / "b.csv", uniqueness_table(run_quadratic_uniqueness(cfg)));
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv").rfind("n,status,", 0) == 0);
}

TEST_CASE("nodes table") {
    const auto sol = run_solve(base("zero", {4}, 3));
    const auto t = nodes_table(sol);
    CHECK(t.header == std::vector<std::string>{"step", "state_index", "t", "w", "Y", "Z"});
    CHECK(t.rows.size() == 10);
    CHECK(t.rows.back()[5].empty());
    CHECK(format_real(0.1) == "0.10000000000000001");
}
