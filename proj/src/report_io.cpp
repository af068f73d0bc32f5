#include "bsdelab/report_io.hpp"

#include <fstream>
#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "bsdelab/errors.hpp"

namespace bsdelab {

namespace {

std::string opt_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string{}; }
std::string yes_no(bool b) { return b ? "true" : "false"; }

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    auto out = open_out(path);
    out << fmt::format("{}\n", fmt::join(table.header, ","));
    for (const auto& row : table.rows) out << fmt::format("{}\n", fmt::join(row, ","));
}

void write_summary(const std::filesystem::path& path, const KeyValues& kv) {
    auto out = open_out(path);
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

CsvTable nodes_table(const BsdeSolution& sol) {
    CsvTable t{{"step", "state_index", "t", "w", "Y", "Z"}, {}};
    for (int i = 0; i <= sol.N; ++i) {
        const auto& Y = sol.Y[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < Y.size(); ++k) {
            const std::string z = i < sol.N ? format_real(sol.Z[static_cast<std::size_t>(i)][k]) : "";
            t.rows.push_back({std::to_string(i), std::to_string(k), format_real(sol.time(i)),
                              format_real(sol.w(i, k)), format_real(Y[k]), z});
        }
    }
    return t;
}

CsvTable uniqueness_table(const UniquenessReport& rep) {
    const bool linear = rep.pipeline == Pipeline::LinearUniqueness;
    CsvTable t{{"n", "status", "modulus", "Y0_max", "Y0_min", "gap", "z_sup_max", "z_sup_min"}, {}};
    if (linear) t.header.push_back("z_bound_violation");
    t.header.push_back("skip_reason");
    for (const auto& r : rep.rows) {
        std::vector<std::string> row{format_real(r.n), r.solved ? "solved" : "skipped", format_real(r.modulus)};
        if (r.solved) {
            for (double x : {r.Y0_max, r.Y0_min, r.gap, r.z_sup_max, r.z_sup_min}) row.push_back(format_real(x));
            if (linear) row.push_back(format_real(r.z_bound_violation));
        } else {
            row.insert(row.end(), linear ? 6 : 5, "");
        }
        row.push_back(r.skip_reason);
        t.rows.push_back(std::move(row));
    }
    return t;
}

KeyValues validation_summary(const ValidationReport& rep, const std::string& prefix) {
    KeyValues kv{{prefix + ".assumption", std::string(to_string(rep.assumption))},
                 {prefix + ".samples", std::to_string(rep.samples_tested)},
                 {prefix + ".worst_violation", format_real(rep.worst_violation)},
                 {prefix + ".passed", yes_no(rep.passed())}};
    if (rep.witness) {
        const Witness& w = *rep.witness;
        kv.emplace_back(prefix + ".witness",
                        fmt::format("t={} y={} z={}{}{}{}", format_real(w.t), format_real(w.y), format_real(w.z),
                                    w.y2 ? " y2=" + format_real(*w.y2) : "", w.z2 ? " z2=" + format_real(*w.z2) : "",
                                    w.n ? " n=" + format_real(*w.n) : ""));
    }
    return kv;
}

KeyValues uniqueness_summary(const UniquenessReport& rep) {
    KeyValues kv{{"pipeline", std::string(to_string(rep.pipeline))},
                 {"verdict", rep.pass ? "pass" : "fail"},
                 {"final_gap", format_real(rep.final_gap)},
                 {"min_gap", format_real(rep.min_gap)},
                 {"gap_strictly_decreasing", yes_no(rep.gap_strictly_decreasing)},
                 {"sup_monotonicity_defect", format_real(rep.sup_monotonicity_defect)},
                 {"inf_monotonicity_defect", format_real(rep.inf_monotonicity_defect)},
                 {"localization_radius", format_real(rep.M)},
                 {"Y0_localized", format_real(rep.Y0_localized)},
                 {"localized_diff", format_real(rep.localized_diff)},
                 {"uniqueness_tol", format_real(rep.uniqueness_tol)},
                 {"monotonicity_slack", format_real(rep.monotonicity_slack)},
                 {"terminal_certified", yes_no(rep.terminal_certified)}};
    if (rep.pipeline == Pipeline::LinearUniqueness) kv.emplace_back("z_bound_L", format_real(rep.z_bound_L));
    for (auto& e : validation_summary(rep.preflight_growth, "preflight_growth")) kv.push_back(std::move(e));
    for (auto& e : validation_summary(rep.preflight_y_lipschitz, "preflight_y_lipschitz")) kv.push_back(std::move(e));
    for (std::size_t i = 0; i < rep.notes.size(); ++i) kv.emplace_back("note." + std::to_string(i), rep.notes[i]);
    return kv;
}

CsvTable convergence_table(const ConvergenceStudy& study) {
    CsvTable t{{"n", "N", "status", "Y0", "z_sup", "y_dist", "z_dist", "error", "skip_reason"}, {}};
    for (const auto& r : study.rows) {
        if (r.solved)
            t.rows.push_back({format_real(r.n), std::to_string(r.N), "solved", format_real(r.Y0), format_real(r.z_sup),
                              opt_real(r.y_dist), opt_real(r.z_dist), opt_real(r.error), ""});
        else
            t.rows.push_back({format_real(r.n), std::to_string(r.N), "skipped", "", "", "", "", "", r.skip_reason});
    }
    return t;
}

CsvTable convergence_timing_table(const ConvergenceStudy& study) {
    CsvTable t{{"n", "N", "wall_time"}, {}};
    for (const auto& r : study.rows)
        t.rows.push_back({format_real(r.n), std::to_string(r.N), fmt::format("{:.6f}", r.wall_time)});
    return t;
}

KeyValues convergence_summary(const ConvergenceStudy& study) {
    KeyValues kv{{"pipeline", "Convergence"},
                 {"direction", std::string(to_string(study.direction))},
                 {"penalty", std::string(to_string(study.penalty))},
                 {"reference_kind", study.reference_kind.empty() ? "none" : study.reference_kind},
                 {"reference_Y0", opt_real(study.reference_Y0)}};
    std::size_t solved = 0;
    for (const auto& r : study.rows) solved += r.solved ? 1 : 0;
    kv.emplace_back("rows", std::to_string(study.rows.size()));
    kv.emplace_back("solved", std::to_string(solved));
    kv.emplace_back("verdict", solved == study.rows.size() ? "pass" : "fail");
    return kv;
}

CsvTable bounds_table(const BoundsAudit& audit) {
    CsvTable t{{"step", "state_index", "t", "w", "Y", "Z", "y_excess", "z_excess"}, {}};
    for (const auto& v : audit.offenders)
        t.rows.push_back({std::to_string(v.step), std::to_string(v.index), format_real(v.t), format_real(v.w),
                          format_real(v.Y), format_real(v.Z), format_real(v.y_excess), format_real(v.z_excess)});
    return t;
}

KeyValues bounds_summary(const BoundsAudit& audit) {
    KeyValues kv{{"pipeline", "BoundsAudit"},
                 {"verdict", audit.report.passed() ? "pass" : "fail"},
                 {"L", format_real(audit.L)},
                 {"N", std::to_string(audit.solution.N)},
                 {"Y0", format_real(audit.solution.Y0)},
                 {"y_sup", format_real(audit.solution.y_sup)},
                 {"z_sup", format_real(audit.solution.z_sup)},
                 {"slack", format_real(bound_slack(audit.L, audit.solution.T, audit.solution.dt()))}};
    for (auto& e : validation_summary(audit.report, "bounds")) kv.push_back(std::move(e));
    return kv;
}

CsvTable comparison_table(const ComparisonRun& run) {
    const ComparisonReport& r = run.report;
    return CsvTable{{"N", "delta_y0", "delta_y_min", "gamma_min", "min_step_factor", "max_residual",
                     "terminal_gap_min", "driver_gap_min", "a_sup", "b_sup"},
                    {{std::to_string(r.N), format_real(r.delta_y0), format_real(r.delta_y_min),
                      format_real(r.gamma_min), format_real(r.min_step_factor), format_real(r.max_residual),
                      format_real(r.terminal_gap_min), format_real(r.driver_gap_min), format_real(r.a_sup),
                      format_real(r.b_sup)}}};
}

KeyValues comparison_summary(const ComparisonRun& run) {
    const ComparisonReport& r = run.report;
    KeyValues kv{{"pipeline", "Comparison"},
                 {"verdict", run.pass ? "pass" : "fail"},
                 {"Y0", format_real(run.solution.Y0)},
                 {"Y0_prime", format_real(run.solution_prime.Y0)},
                 {"delta_y0", format_real(r.delta_y0)},
                 {"delta_y_min", format_real(r.delta_y_min)},
                 {"gamma_min", format_real(r.gamma_min)},
                 {"max_residual", format_real(r.max_residual)},
                 {"terminal_gap_min", format_real(r.terminal_gap_min)},
                 {"driver_gap_min", format_real(r.driver_gap_min)}};
    if (r.terminal_gap_min < 0.0 || r.driver_gap_min < 0.0)
        kv.emplace_back("note.0", "comparison hypotheses violated: xi >= xi' or f >= f' fails somewhere");
    return kv;
}

CsvTable regularize_table(const std::vector<RegularizeRow>& rows) {
    CsvTable t{{"z", "f", "f_n", "radius"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_real(r.z), format_real(r.f), format_real(r.f_n), format_real(r.radius)});
    return t;
}

CsvTable solve_table(const BsdeSolution& sol) {
    CsvTable t{{"step", "t", "Y_min", "Y_max", "Z_min", "Z_max"}, {}};
    for (int i = 0; i <= sol.N; ++i) {
        const auto& Y = sol.Y[static_cast<std::size_t>(i)];
        std::string zmin, zmax;
        if (i < sol.N) {
            const auto& Z = sol.Z[static_cast<std::size_t>(i)];
            zmin = format_real(Z.minCoeff());
            zmax = format_real(Z.maxCoeff());
        }
        t.rows.push_back({std::to_string(i), format_real(sol.time(i)), format_real(Y.minCoeff()),
                          format_real(Y.maxCoeff()), zmin, zmax});
    }
    return t;
}

KeyValues solve_summary(const BsdeSolution& sol) {
    return {{"pipeline", "Solve"},
            {"topology", sol.topology == Topology::Recombining ? "recombining" : "tree"},
            {"N", std::to_string(sol.N)},
            {"T", format_real(sol.T)},
            {"Y0", format_real(sol.Y0)},
            {"y_sup", format_real(sol.y_sup)},
            {"z_sup", format_real(sol.z_sup)},
            {"bmo", format_real(sol.bmo)}};
}

}  // namespace bsdelab
