#include "bsdelab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bsdelab/errors.hpp"
#include "bsdelab/quadrature.hpp"
#include "bsdelab/solver.hpp"
#include "registry_parse.hpp"

namespace bsdelab {

double effective_z_modulus(const Generator& g, double T, double y_radius, double z_radius, int z_points) {
    double worst = 0.0;
    const double h = 2.0 * z_radius / (z_points - 1);
    for (double t : {0.0, T}) {
        for (double y : {-y_radius, 0.0, y_radius}) {
            double prev = g(t, y, -z_radius);
            for (int k = 1; k < z_points; ++k) {
                const double cur = g(t, y, -z_radius + h * k);
                worst = std::max(worst, std::abs(cur - prev) / h);
                prev = cur;
            }
        }
    }
    return worst;
}

namespace {

std::string fmt_num(double x) { return detail::format_number(x); }

void preflight(const ExperimentConfig& cfg, const Generator& g, const TerminalCondition& tc,
               UniquenessReport& rep, bool require_sup) {
    const double L = std::max(g.L(), tc.declared_L());
    const double y_r = y_bound(L, cfg.T, 0.0);
    const double z_r = z_bound(L, cfg.T, 0.0) + 1.0;
    const Box box{0.0, cfg.T, -y_r, y_r, -z_r, z_r};
    rep.preflight_growth = validate_growth(g, box, cfg.validation_samples, cfg.seed);
    rep.preflight_y_lipschitz = validate_y_lipschitz(g, box, cfg.validation_samples, cfg.seed + 1);
    if (tc.arity() <= 3) {
        const BoundEstimate est = estimate_bounds(tc, 6.0, tc.arity() == 1 ? 1201 : 201);
        rep.terminal_certified = certify_bounds(tc, est, require_sup);
    }
    if (!rep.preflight_growth.passed())
        rep.notes.push_back("growth assumption violated on sampled domain: worst " +
                            fmt_num(rep.preflight_growth.worst_violation));
    if (!rep.preflight_y_lipschitz.passed())
        rep.notes.push_back("y-Lipschitz assumption violated on sampled domain: worst " +
                            fmt_num(rep.preflight_y_lipschitz.worst_violation));
    if (!rep.terminal_certified) rep.notes.push_back("terminal bounds not certified by grid estimate");
    if (!tc.sup_bound())
        rep.notes.push_back("unbounded terminal value: square integrability is taken from an external lemma");
}

UniquenessReport run_uniqueness(ExperimentConfig cfg, Penalty penalty) {
    cfg.pipeline = penalty == Penalty::Quadratic ? Pipeline::QuadraticUniqueness : Pipeline::LinearUniqueness;
    cfg.validate();
    const Generator g = cfg.generator();
    const TerminalCondition tc = cfg.terminal();
    const bool quadratic = penalty == Penalty::Quadratic;
    if (quadratic && g.growth_class() != GrowthClass::Quadratic)
        throw PreconditionError("uniqueness: generator " + g.name() + " is not declared Quadratic");
    if (!quadratic && g.growth_class() != GrowthClass::Linear)
        throw PreconditionError("linear-uniqueness: generator " + g.name() + " is not declared Linear");
    if (quadratic && !tc.sup_bound())
        throw PreconditionError("uniqueness: terminal " + tc.name() + " has no sup bound");

    UniquenessReport rep;
    rep.pipeline = quadratic ? Pipeline::QuadraticUniqueness : Pipeline::LinearUniqueness;
    rep.uniqueness_tol = cfg.uniqueness_tol;
    rep.monotonicity_slack = cfg.effective_monotonicity_slack();
    preflight(cfg, g, tc, rep, quadratic);

    const Lattice lat(cfg.T, cfg.N);
    const double L = std::max(g.L(), tc.declared_L());
    rep.z_bound_L = L;
    const double y_r = y_bound(L, cfg.T, 0.0);
    double z_range = z_bound(L, cfg.T, 0.0);
    double z_bound_worst = 0.0;

    for (double n : cfg.n_schedule) {
        UniquenessRow row;
        row.n = n;
        const Generator up = convolve(g, {Direction::Sup, penalty, n}, cfg.optimizer);
        const Generator lo = convolve(g, {Direction::Inf, penalty, n}, cfg.optimizer);
        row.modulus = std::max(effective_z_modulus(up, cfg.T, y_r, z_range + 1.0),
                               effective_z_modulus(lo, cfg.T, y_r, z_range + 1.0));
        const double stability = row.modulus * lat.sqrt_dt();
        if (stability >= cfg.stability_threshold) {
            row.skip_reason = "modulus*sqrt(dt)=" + fmt_num(stability) + ">=" + fmt_num(cfg.stability_threshold);
            rep.rows.push_back(row);
            continue;
        }
        const BsdeSolution s_up = solve_backward(up, tc, lat, cfg.fixed_point);
        const BsdeSolution s_lo = solve_backward(lo, tc, lat, cfg.fixed_point);
        row.solved = true;
        row.Y0_max = s_up.Y0;
        row.Y0_min = s_lo.Y0;
        row.gap = s_up.Y0 - s_lo.Y0;
        row.z_sup_max = s_up.z_sup;
        row.z_sup_min = s_lo.z_sup;
        if (!quadratic) {
            row.z_bound_violation = std::max(check_z_bound(s_up, L).worst_violation,
                                             check_z_bound(s_lo, L).worst_violation);
            z_bound_worst = std::max(z_bound_worst, row.z_bound_violation);
        }
        z_range = std::max(s_up.z_sup, s_lo.z_sup);
        rep.rows.push_back(row);
    }

    std::vector<const UniquenessRow*> solved;
    for (const auto& r : rep.rows)
        if (r.solved) solved.push_back(&r);
    if (solved.empty()) {
        rep.notes.push_back("no n in the schedule passed the stability guard");
        rep.pass = false;
        return rep;
    }

    rep.min_gap = solved.front()->gap;
    rep.gap_strictly_decreasing = true;
    for (std::size_t i = 1; i < solved.size(); ++i) {
        rep.sup_monotonicity_defect =
            std::max(rep.sup_monotonicity_defect, solved[i]->Y0_max - solved[i - 1]->Y0_max);
        rep.inf_monotonicity_defect =
            std::max(rep.inf_monotonicity_defect, solved[i - 1]->Y0_min - solved[i]->Y0_min);
        if (!(solved[i]->gap < solved[i - 1]->gap)) rep.gap_strictly_decreasing = false;
        rep.min_gap = std::min(rep.min_gap, solved[i]->gap);
    }
    const UniquenessRow& last = *solved.back();
    rep.final_gap = last.gap;
    rep.M = std::max(last.z_sup_max, last.z_sup_min);

    BsdeSolution loc = solve_backward(localize(g, rep.M), tc, lat, cfg.fixed_point);
    rep.Y0_localized = loc.Y0;
    rep.localized_diff = std::abs(loc.Y0 - last.Y0_max);
    rep.localized_solution = std::move(loc);

    const double order_slack = 2.0 * cfg.fixed_point.tol;
    if (rep.min_gap < -order_slack)
        rep.notes.push_back("maximal approximation fell below minimal one: gap " + fmt_num(rep.min_gap));
    if (solved.size() < rep.rows.size())
        rep.notes.push_back(std::to_string(rep.rows.size() - solved.size()) + " n skipped by the stability guard");

    rep.pass = rep.final_gap <= cfg.uniqueness_tol &&
               rep.sup_monotonicity_defect <= rep.monotonicity_slack &&
               rep.inf_monotonicity_defect <= rep.monotonicity_slack && rep.min_gap >= -order_slack;
    if (!quadratic) rep.pass = rep.pass && z_bound_worst == 0.0;
    return rep;
}

// sqrt(E[sum_i (A_i - B_i)^2 dt]) on a recombining lattice.
double lattice_l2_distance(const BsdeSolution& a, const BsdeSolution& b) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(a.N + 1);
    for (int i = a.N - 1; i >= 0; --i) {
        const auto s = static_cast<std::size_t>(i);
        acc = conditional_mean(a, i, acc) + (a.Z[s] - b.Z[s]).square() * a.dt();
    }
    return std::sqrt(acc[0]);
}

double max_node_distance(const BsdeSolution& a, const BsdeSolution& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.Y.size(); ++i) worst = std::max(worst, (a.Y[i] - b.Y[i]).abs().maxCoeff());
    return worst;
}

}  // namespace

UniquenessReport run_quadratic_uniqueness(const ExperimentConfig& cfg) {
    return run_uniqueness(cfg, Penalty::Quadratic);
}

UniquenessReport run_linear_uniqueness(const ExperimentConfig& cfg) {
    return run_uniqueness(cfg, Penalty::Linear);
}

std::optional<double> reference_y0(const ExperimentConfig& cfg, std::string* kind) {
    const TerminalCondition tc = cfg.terminal();
    if (!tc.is_markovian()) return std::nullopt;
    const auto call = detail::parse_call(cfg.problem.generator);
    if (call.name == "linear" && call.args.size() == 3) {
        if (kind) *kind = "linear-closed-form";
        return solve_linear_closed_form(call.args[0], call.args[1], call.args[2], tc, 64);
    }
    if (call.name == "zero") {
        if (kind) *kind = "linear-closed-form";
        return solve_linear_closed_form(0.0, 0.0, 0.0, tc, 64);
    }
    if (call.name == "quad" && call.args.size() == 1) {
        const double gamma = call.args[0];
        const double sqT = std::sqrt(tc.horizon());
        Eigen::VectorXd w(1);
        const double e = expect_standard_normal(
            [&](double x) {
                w[0] = sqT * x;
                return std::exp(gamma * tc.evaluate(w));
            },
            128);
        if (kind) *kind = "cole-hopf";
        return std::log(e) / gamma;
    }
    return std::nullopt;
}

ConvergenceStudy run_convergence_study(ExperimentConfig cfg) {
    cfg.pipeline = Pipeline::Convergence;
    cfg.validate();
    const Generator g = cfg.generator();
    const TerminalCondition tc = cfg.terminal();
    ConvergenceStudy study;
    study.penalty = g.growth_class() == GrowthClass::Quadratic ? Penalty::Quadratic : Penalty::Linear;
    study.reference_Y0 = reference_y0(cfg, &study.reference_kind);

    const double L = std::max(g.L(), tc.declared_L());
    const double y_r = y_bound(L, cfg.T, 0.0);
    const double z_r = z_bound(L, cfg.T, 0.0) + 1.0;
    for (int N : cfg.N_schedule) {
        const Lattice lat(cfg.T, N);
        std::optional<BsdeSolution> prev;
        for (double n : cfg.n_schedule) {
            ConvergenceRow row;
            row.n = n;
            row.N = N;
            const Generator fn = convolve(g, {study.direction, study.penalty, n}, cfg.optimizer);
            const double stability = effective_z_modulus(fn, cfg.T, y_r, z_r) * lat.sqrt_dt();
            if (stability >= cfg.stability_threshold) {
                row.skip_reason = "modulus*sqrt(dt)=" + fmt_num(stability) + ">=" + fmt_num(cfg.stability_threshold);
                study.rows.push_back(row);
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            BsdeSolution sol = solve_backward(fn, tc, lat, cfg.fixed_point);
            row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row.solved = true;
            row.Y0 = sol.Y0;
            row.z_sup = sol.z_sup;
            if (study.reference_Y0) row.error = std::abs(sol.Y0 - *study.reference_Y0);
            if (prev) {
                row.y_dist = max_node_distance(*prev, sol);
                row.z_dist = lattice_l2_distance(*prev, sol);
            }
            prev = std::move(sol);
            study.rows.push_back(row);
        }
    }
    return study;
}

std::vector<RegularizeRow> run_regularize(ExperimentConfig cfg) {
    cfg.pipeline = Pipeline::Regularize;
    cfg.validate();
    const Generator g = cfg.generator();
    check_penalty_spec(g, cfg.regularize);
    std::vector<RegularizeRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.z_points));
    for (int k = 0; k < cfg.z_points; ++k) {
        const double z =
            cfg.z_points == 1 ? cfg.z_min : cfg.z_min + (cfg.z_max - cfg.z_min) * k / (cfg.z_points - 1);
        rows.push_back({z, g(cfg.reg_t, cfg.reg_y, z),
                        convolution_value(g, cfg.regularize, cfg.optimizer, cfg.reg_t, cfg.reg_y, z),
                        certified_radius(g, cfg.regularize, cfg.reg_y, z)});
    }
    return rows;
}

BsdeSolution run_solve(const ExperimentConfig& cfg) {
    const Generator g = cfg.generator();
    const TerminalCondition tc = cfg.terminal();
    if (tc.is_markovian()) return solve_backward(g, tc, Lattice(cfg.T, cfg.N), cfg.fixed_point);
    return solve_backward_tree(g, tc, cfg.N, cfg.fixed_point);
}

BoundsAudit run_bounds_audit(const ExperimentConfig& cfg) {
    const Generator g = cfg.generator();
    const TerminalCondition tc = cfg.terminal();
    BoundsAudit audit{cfg.declared_L.value_or(std::max(g.L(), tc.declared_L())),
                      ValidationReport{Assumption::SolutionBounds}, {}, run_solve(cfg)};
    if (!(audit.L > 0.0)) throw PreconditionError("bounds: declared L must be > 0");
    audit.report = check_solution_bounds(audit.solution, audit.L);
    audit.offenders = worst_offenders(audit.solution, audit.L, 20);
    return audit;
}

ComparisonRun run_comparison(ExperimentConfig cfg) {
    cfg.pipeline = Pipeline::Comparison;
    cfg.validate();
    const Lattice lat(cfg.T, cfg.N);
    const Generator g = cfg.generator();
    const Generator gp = cfg.generator2();
    ComparisonRun run{{}, solve_backward(g, cfg.terminal(), lat, cfg.fixed_point),
                      solve_backward(gp, cfg.terminal2(), lat, cfg.fixed_point), false};
    run.report = compare_solutions(g, gp, run.solution, run.solution_prime);
    run.pass = run.report.delta_y_min >= -1e-10 && run.report.gamma_min > 0.0;
    return run;
}

}  // namespace bsdelab
