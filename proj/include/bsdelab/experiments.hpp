#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsdelab/comparison.hpp"
#include "bsdelab/config.hpp"
#include "bsdelab/diagnostics.hpp"
#include "bsdelab/lattice.hpp"

namespace bsdelab {

/// Largest sampled difference quotient |f(z1)-f(z2)|/|z1-z2| over z in
/// [-z_radius, z_radius], t in {0, T}, y in {-y_radius, 0, y_radius}.
double effective_z_modulus(const Generator& g, double T, double y_radius, double z_radius,
                           int z_points = 65);

struct UniquenessRow {
    double n = 0.0;
    bool solved = false;
    std::string skip_reason;
    double modulus = 0.0;  ///< effective z-modulus of the two regularized drivers
    double Y0_max = 0.0;   ///< sup-convolution solution
    double Y0_min = 0.0;   ///< inf-convolution solution
    double gap = 0.0;
    double z_sup_max = 0.0;
    double z_sup_min = 0.0;
    double z_bound_violation = 0.0;  ///< linear pipeline only
};

struct UniquenessReport {
    Pipeline pipeline = Pipeline::QuadraticUniqueness;
    std::vector<UniquenessRow> rows;
    double sup_monotonicity_defect = 0.0;  ///< worst increase of Y0_max along n
    double inf_monotonicity_defect = 0.0;  ///< worst decrease of Y0_min along n
    double min_gap = 0.0;
    double final_gap = 0.0;
    bool gap_strictly_decreasing = false;
    double M = 0.0;                        ///< localization radius
    double Y0_localized = 0.0;
    double localized_diff = 0.0;           ///< |Y0_localized - Y0_max at the largest n|
    double z_bound_L = 0.0;
    double uniqueness_tol = 0.0;
    double monotonicity_slack = 0.0;
    ValidationReport preflight_growth{Assumption::A2Growth};
    ValidationReport preflight_y_lipschitz{Assumption::A2YLipschitz};
    bool terminal_certified = false;
    std::vector<std::string> notes;
    bool pass = false;
    std::optional<BsdeSolution> localized_solution;
};

/// Sup/inf quadratic-penalty regularizations over the n schedule, monotone
/// approximation checks, final gap and the localized re-solve.
UniquenessReport run_quadratic_uniqueness(const ExperimentConfig& cfg);

/// Same with the linear penalty, plus the uniform Z bound L e^{L(T-t)}.
UniquenessReport run_linear_uniqueness(const ExperimentConfig& cfg);

struct ConvergenceRow {
    double n = 0.0;
    int N = 0;
    bool solved = false;
    std::string skip_reason;
    double Y0 = 0.0;
    double z_sup = 0.0;
    std::optional<double> y_dist;  ///< max over nodes |Y^{prev n} - Y^n| at equal N
    std::optional<double> z_dist;  ///< sqrt(E sum (Z^{prev n} - Z^n)^2 dt)
    std::optional<double> error;   ///< |Y0 - reference| when a reference exists
    double wall_time = 0.0;        ///< seconds; kept out of the deterministic report
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    std::optional<double> reference_Y0;
    std::string reference_kind;
    Direction direction = Direction::Sup;
    Penalty penalty = Penalty::Quadratic;
};

/// Rows for every (N, n) in N_schedule x n_schedule; the sup-convolution of
/// the configured driver is solved at each.
ConvergenceStudy run_convergence_study(ExperimentConfig cfg);

/// Closed-form Y0 where the registry has one: linear(a,b,c) via the adjoint
/// formula and quad(gamma) via (1/gamma) log E[exp(gamma xi)].
std::optional<double> reference_y0(const ExperimentConfig& cfg, std::string* kind = nullptr);

struct BoundsAudit {
    double L = 0.0;
    ValidationReport report{Assumption::SolutionBounds};
    std::vector<NodeViolation> offenders;
    BsdeSolution solution;
};

/// Solves the configured problem and checks the Y/Z bounds with
/// L = declared_L or max(L_gen, L_xi).
BoundsAudit run_bounds_audit(const ExperimentConfig& cfg);

struct ComparisonRun {
    ComparisonReport report;
    BsdeSolution solution;
    BsdeSolution solution_prime;
    bool pass = false;
};

ComparisonRun run_comparison(ExperimentConfig cfg);

struct RegularizeRow {
    double z = 0.0;
    double f = 0.0;
    double f_n = 0.0;
    double radius = 0.0;
};

/// f and its configured convolution on the z-grid at (reg_t, reg_y).
std::vector<RegularizeRow> run_regularize(ExperimentConfig cfg);

/// Solves the configured problem (tree solver for path-dependent terminals).
BsdeSolution run_solve(const ExperimentConfig& cfg);

}  // namespace bsdelab
