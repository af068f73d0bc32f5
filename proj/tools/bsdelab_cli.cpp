#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "bsdelab/config.hpp"
#include "bsdelab/errors.hpp"
#include "bsdelab/experiments.hpp"
#include "bsdelab/report_io.hpp"

namespace fs = std::filesystem;
using namespace bsdelab;

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool dump_nodes = false;
};

int emit(const fs::path& dir, const CsvTable& table, const KeyValues& summary, bool pass) {
    write_csv(dir / "report.csv", table);
    write_summary(dir / "summary.txt", summary);
    for (const auto& [k, v] : summary)
        if (k == "verdict" || k == "final_gap" || k == "Y0" || k == "max_residual") std::cout << k << " = " << v << '\n';
    std::cout << "wrote " << (dir / "report.csv").string() << '\n';
    return pass ? kPass : kFail;
}

int run(Pipeline pipeline, const Options& opts) {
    ExperimentConfig cfg = load_config(opts.config);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out) cfg.output_dir = *opts.out;
    cfg.pipeline = pipeline;
    cfg.validate();
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    switch (pipeline) {
        case Pipeline::Solve: {
            const BsdeSolution sol = run_solve(cfg);
            if (opts.dump_nodes) write_csv(dir / "nodes.csv", nodes_table(sol));
            KeyValues kv = solve_summary(sol);
            kv.insert(kv.begin() + 1, {"verdict", "pass"});
            return emit(dir, solve_table(sol), kv, true);
        }
        case Pipeline::Regularize: {
            const auto rows = run_regularize(cfg);
            const KeyValues kv{{"pipeline", "Regularize"},
                               {"verdict", "pass"},
                               {"direction", std::string(to_string(cfg.regularize.direction))},
                               {"penalty", std::string(to_string(cfg.regularize.penalty))},
                               {"n", format_real(cfg.regularize.n)},
                               {"t", format_real(cfg.reg_t)},
                               {"y", format_real(cfg.reg_y)}};
            return emit(dir, regularize_table(rows), kv, true);
        }
        case Pipeline::QuadraticUniqueness:
        case Pipeline::LinearUniqueness: {
            const UniquenessReport rep = pipeline == Pipeline::QuadraticUniqueness ? run_quadratic_uniqueness(cfg)
                                                                                     : run_linear_uniqueness(cfg);
            if (opts.dump_nodes && rep.localized_solution)
                write_csv(dir / "nodes.csv", nodes_table(*rep.localized_solution));
            return emit(dir, uniqueness_table(rep), uniqueness_summary(rep), rep.pass);
        }
        case Pipeline::Convergence: {
            const ConvergenceStudy study = run_convergence_study(cfg);
            write_csv(dir / "timing.csv", convergence_timing_table(study));
            const KeyValues kv = convergence_summary(study);
            bool pass = false;
            for (const auto& [k, v] : kv)
                if (k == "verdict") pass = v == "pass";
            return emit(dir, convergence_table(study), kv, pass);
        }
        case Pipeline::BoundsAudit: {
            const BoundsAudit audit = run_bounds_audit(cfg);
            if (opts.dump_nodes) write_csv(dir / "nodes.csv", nodes_table(audit.solution));
            return emit(dir, bounds_table(audit), bounds_summary(audit), audit.report.passed());
        }
        case Pipeline::Comparison: {
            const ComparisonRun cmp = run_comparison(cfg);
            if (opts.dump_nodes) {
                write_csv(dir / "nodes.csv", nodes_table(cmp.solution));
                write_csv(dir / "nodes_prime.csv", nodes_table(cmp.solution_prime));
            }
            return emit(dir, comparison_table(cmp), comparison_summary(cmp), cmp.pass);
        }
    }
    return kError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice experiments for quadratic and linear-growth BSDEs"};
    app.require_subcommand(1);
    Options opts;
    Pipeline selected = Pipeline::Solve;

    const std::pair<const char*, const char*> commands[] = {
        {"solve", "solve the configured BSDE"},
        {"regularize", "tabulate the configured convolution over a z-grid"},
        {"uniqueness", "quadratic-growth monotone approximation and uniqueness gap"},
        {"linear-uniqueness", "linear-growth monotone approximation and uniqueness gap"},
        {"converge", "convergence study over the n and N schedules"},
        {"bounds", "audit the a priori Y and Z bounds"},
        {"compare", "comparison identity for [problem] vs [problem2]"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config, "INI configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "override [run] seed");
        sub->add_option("--out", opts.out, "override [run] output_dir");
        sub->add_flag("--dump-nodes", opts.dump_nodes, "also write nodes.csv");
        sub->callback([&selected, name = std::string(name)] { selected = parse_pipeline(name); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kError;
    }

    try {
        return run(selected, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
}
