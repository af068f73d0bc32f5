#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsdelab/generators.hpp"
#include "bsdelab/regularization.hpp"
#include "bsdelab/solver.hpp"
#include "bsdelab/terminal.hpp"

namespace bsdelab {

enum class Pipeline {
    Solve,
    Regularize,
    QuadraticUniqueness,
    LinearUniqueness,
    Convergence,
    Comparison,
    BoundsAudit,
};

std::string_view to_string(Pipeline p);
/// Accepts both the enum names and the CLI subcommand names.
Pipeline parse_pipeline(std::string_view s);

struct ProblemSpec {
    std::string generator = "quad(1)";
    std::string terminal = "sin@T";
    std::optional<double> L;                   ///< override of the registry L
    std::optional<double> K;                   ///< override of the registry K
    std::optional<double> terminal_sup;        ///< override of the declared |xi| bound
    std::optional<double> terminal_malliavin;  ///< override of the declared |D xi| bound
};

/// Flat INI file, one section per group:
///
///   [problem]     generator, terminal, T, L, K, terminal_sup, terminal_malliavin
///   [problem2]    generator, terminal, L, K, ...   (compare only)
///   [pipeline]    kind, n_schedule, N, N_schedule, stability_threshold
///   [optimizer]   coarse_points, refine_iters, tol
///   [tolerances]  uniqueness_tol, monotonicity_slack, fp_tol, fp_max_iter
///   [regularize]  direction, penalty, n, z_min, z_max, z_points, t, y
///   [bounds]      declared_L
///   [run]         seed, output_dir, validation_samples
struct ExperimentConfig {
    ProblemSpec problem;
    std::optional<ProblemSpec> problem2;
    double T = 1.0;

    Pipeline pipeline = Pipeline::QuadraticUniqueness;
    std::vector<double> n_schedule{4, 8, 16, 32, 64};
    int N = 200;
    std::vector<int> N_schedule{50, 100, 200, 400};
    /// An n is skipped when (effective z-modulus) * sqrt(dt) reaches this.
    double stability_threshold = 0.5;

    OptimizerConfig optimizer;
    FixedPointConfig fixed_point;
    double uniqueness_tol = 1e-2;
    std::optional<double> monotonicity_slack;  ///< default 1e-6 + 2 fp_tol

    PenaltySpec regularize;
    double z_min = -3.0, z_max = 3.0;
    int z_points = 61;
    double reg_t = 0.0, reg_y = 0.0;

    std::optional<double> declared_L;

    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::size_t validation_samples = 2000;

    double effective_monotonicity_slack() const;

    Generator generator() const;
    TerminalCondition terminal() const;
    Generator generator2() const;
    TerminalCondition terminal2() const;

    /// Throws PreconditionError on inconsistent settings.
    void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

Generator build_generator(const ProblemSpec& p);
TerminalCondition build_terminal(const ProblemSpec& p, double T);

}  // namespace bsdelab
