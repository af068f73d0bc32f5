#include "bsdelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bsdelab/errors.hpp"
#include "registry_parse.hpp"

namespace bsdelab {

namespace pt = boost::property_tree;

std::string_view to_string(Pipeline p) {
    switch (p) {
        case Pipeline::Solve: return "Solve";
        case Pipeline::Regularize: return "Regularize";
        case Pipeline::QuadraticUniqueness: return "QuadraticUniqueness";
        case Pipeline::LinearUniqueness: return "LinearUniqueness";
        case Pipeline::Convergence: return "Convergence";
        case Pipeline::Comparison: return "Comparison";
        case Pipeline::BoundsAudit: return "BoundsAudit";
    }
    return "unknown";
}

Pipeline parse_pipeline(std::string_view s) {
    s = detail::trim(s);
    if (s == "Solve" || s == "solve") return Pipeline::Solve;
    if (s == "Regularize" || s == "regularize") return Pipeline::Regularize;
    if (s == "QuadraticUniqueness" || s == "uniqueness") return Pipeline::QuadraticUniqueness;
    if (s == "LinearUniqueness" || s == "linear-uniqueness") return Pipeline::LinearUniqueness;
    if (s == "Convergence" || s == "converge") return Pipeline::Convergence;
    if (s == "Comparison" || s == "compare") return Pipeline::Comparison;
    if (s == "BoundsAudit" || s == "bounds") return Pipeline::BoundsAudit;
    throw PreconditionError("unknown pipeline '" + std::string(s) + "'");
}

double ExperimentConfig::effective_monotonicity_slack() const {
    return monotonicity_slack.value_or(1e-6 + 2.0 * fixed_point.tol);
}

Generator build_generator(const ProblemSpec& p) {
    Generator g = make_generator(p.generator);
    if (p.L || p.K) g = g.with_constants(p.L.value_or(g.L()), p.K ? p.K : g.K());
    return g;
}

TerminalCondition build_terminal(const ProblemSpec& p, double T) {
    TerminalCondition tc = make_terminal(p.terminal, T);
    if (p.terminal_sup || p.terminal_malliavin)
        tc = tc.with_bounds(p.terminal_sup ? p.terminal_sup : tc.sup_bound(),
                            p.terminal_malliavin.value_or(tc.malliavin_bound()));
    return tc;
}

Generator ExperimentConfig::generator() const { return build_generator(problem); }
TerminalCondition ExperimentConfig::terminal() const { return build_terminal(problem, T); }

Generator ExperimentConfig::generator2() const {
    if (!problem2) throw PreconditionError("config has no [problem2] section");
    return build_generator(*problem2);
}

TerminalCondition ExperimentConfig::terminal2() const {
    if (!problem2) throw PreconditionError("config has no [problem2] section");
    return build_terminal(*problem2, T);
}

void ExperimentConfig::validate() const {
    if (!(T > 0.0)) throw PreconditionError("config: T must be > 0");
    if (N < 1) throw PreconditionError("config: N must be >= 1");
    if (n_schedule.empty()) throw PreconditionError("config: empty n_schedule");
    if (!std::is_sorted(n_schedule.begin(), n_schedule.end()) ||
        std::adjacent_find(n_schedule.begin(), n_schedule.end()) != n_schedule.end())
        throw PreconditionError("config: n_schedule must be strictly increasing");
    if (N_schedule.empty() || !std::is_sorted(N_schedule.begin(), N_schedule.end()))
        throw PreconditionError("config: N_schedule must be non-empty and increasing");
    optimizer.validate();
    if (!(fixed_point.tol > 0.0) || fixed_point.max_iter < 1)
        throw PreconditionError("config: fixed point settings must be positive");
    if (!(uniqueness_tol > 0.0)) throw PreconditionError("config: uniqueness_tol must be > 0");
    if (!(stability_threshold > 0.0)) throw PreconditionError("config: stability_threshold must be > 0");
    if (z_points < 2 || !(z_max > z_min)) throw PreconditionError("config: bad z grid for regularize");
    if (pipeline == Pipeline::Comparison && !problem2)
        throw PreconditionError("config: compare needs a [problem2] section");

    const bool uses_schedule = pipeline == Pipeline::QuadraticUniqueness ||
                               pipeline == Pipeline::LinearUniqueness ||
                               pipeline == Pipeline::Convergence;
    if (uses_schedule) {
        const Generator g = generator();
        const Penalty pen = pipeline == Pipeline::LinearUniqueness ||
                                    (pipeline == Pipeline::Convergence &&
                                     g.growth_class() == GrowthClass::Linear)
                                ? Penalty::Linear
                                : Penalty::Quadratic;
        for (double n : n_schedule) check_penalty_spec(g, {Direction::Sup, pen, n});
    }
}

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (detail::trim(item).empty()) continue;
        const double v = detail::parse_number(item);
        out.push_back(static_cast<T>(v));
    }
    return out;
}

std::optional<double> opt_number(const pt::ptree& tree, const std::string& key) {
    if (auto v = tree.get_optional<std::string>(key)) return detail::parse_number(*v);
    return std::nullopt;
}

ProblemSpec read_problem(const pt::ptree& sec, const ProblemSpec& defaults) {
    ProblemSpec p = defaults;
    if (auto v = sec.get_optional<std::string>("generator")) p.generator = *v;
    if (auto v = sec.get_optional<std::string>("terminal")) p.terminal = *v;
    if (auto v = opt_number(sec, "L")) p.L = v;
    if (auto v = opt_number(sec, "K")) p.K = v;
    if (auto v = opt_number(sec, "terminal_sup")) p.terminal_sup = v;
    if (auto v = opt_number(sec, "terminal_malliavin")) p.terminal_malliavin = v;
    return p;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }

    ExperimentConfig cfg;
    const pt::ptree empty;
    auto section = [&](const char* name) -> const pt::ptree& {
        auto it = tree.find(name);
        return it == tree.not_found() ? empty : it->second;
    };
    auto num = [](const pt::ptree& sec, const char* key, auto& target) {
        if (auto v = opt_number(sec, key)) target = static_cast<std::remove_reference_t<decltype(target)>>(*v);
    };

    for (const auto& [name, _] : tree) {
        static const char* known[] = {"problem", "problem2", "pipeline", "optimizer", "tolerances",
                                      "regularize", "bounds", "run"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return name == k; }) ==
            std::end(known))
            throw PreconditionError("config: unknown section [" + name + "]");
    }

    const auto& prob = section("problem");
    cfg.problem = read_problem(prob, cfg.problem);
    num(prob, "T", cfg.T);
    if (tree.find("problem2") != tree.not_found()) cfg.problem2 = read_problem(section("problem2"), ProblemSpec{});

    const auto& pipe = section("pipeline");
    if (auto v = pipe.get_optional<std::string>("kind")) cfg.pipeline = parse_pipeline(*v);
    if (auto v = pipe.get_optional<std::string>("n_schedule")) cfg.n_schedule = parse_list<double>(*v);
    num(pipe, "N", cfg.N);
    if (auto v = pipe.get_optional<std::string>("N_schedule")) cfg.N_schedule = parse_list<int>(*v);
    num(pipe, "stability_threshold", cfg.stability_threshold);

    const auto& opt = section("optimizer");
    num(opt, "coarse_points", cfg.optimizer.coarse_points);
    num(opt, "refine_iters", cfg.optimizer.refine_iters);
    num(opt, "tol", cfg.optimizer.tol);

    const auto& tol = section("tolerances");
    num(tol, "uniqueness_tol", cfg.uniqueness_tol);
    if (auto v = opt_number(tol, "monotonicity_slack")) cfg.monotonicity_slack = v;
    num(tol, "fp_tol", cfg.fixed_point.tol);
    num(tol, "fp_max_iter", cfg.fixed_point.max_iter);

    const auto& reg = section("regularize");
    if (auto v = reg.get_optional<std::string>("direction")) cfg.regularize.direction = parse_direction(*v);
    if (auto v = reg.get_optional<std::string>("penalty")) cfg.regularize.penalty = parse_penalty(*v);
    num(reg, "n", cfg.regularize.n);
    num(reg, "z_min", cfg.z_min);
    num(reg, "z_max", cfg.z_max);
    num(reg, "z_points", cfg.z_points);
    num(reg, "t", cfg.reg_t);
    num(reg, "y", cfg.reg_y);

    if (auto v = opt_number(section("bounds"), "declared_L")) cfg.declared_L = v;

    const auto& run = section("run");
    if (auto v = run.get_optional<std::string>("seed")) {
        const std::string_view text = detail::trim(*v);
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cfg.seed);
        if (ec != std::errc{} || end != text.data() + text.size())
            throw PreconditionError("config: seed must be a non-negative integer");
    }
    if (auto v = run.get_optional<std::string>("output_dir")) cfg.output_dir = *v;
    num(run, "validation_samples", cfg.validation_samples);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace bsdelab
