#include "bsdelab/terminal.hpp"

#include <algorithm>
#include <cmath>

#include "bsdelab/errors.hpp"
#include "registry_parse.hpp"

namespace bsdelab {

TerminalCondition::TerminalCondition(std::string name, double T, std::vector<double> obs_times,
                                     Fn phi, Gradient grad, std::optional<double> sup_bound,
                                     double malliavin_bound)
    : name_(std::move(name)),
      T_(T),
      obs_times_(std::move(obs_times)),
      phi_(std::move(phi)),
      grad_(std::move(grad)),
      sup_bound_(sup_bound),
      malliavin_bound_(malliavin_bound) {
    if (!(T_ > 0.0)) throw PreconditionError("terminal " + name_ + ": horizon must be > 0");
    if (obs_times_.empty()) throw PreconditionError("terminal " + name_ + ": no observation times");
    for (std::size_t i = 0; i < obs_times_.size(); ++i) {
        if (!(obs_times_[i] > 0.0) || obs_times_[i] > T_ * (1.0 + 1e-12))
            throw PreconditionError("terminal " + name_ + ": observation times must lie in (0, T]");
        if (i > 0 && !(obs_times_[i] > obs_times_[i - 1]))
            throw PreconditionError("terminal " + name_ + ": observation times must be strictly increasing");
    }
    if (sup_bound_ && !(*sup_bound_ >= 0.0)) throw PreconditionError("terminal " + name_ + ": sup bound must be >= 0");
    if (!(malliavin_bound_ >= 0.0)) throw PreconditionError("terminal " + name_ + ": Malliavin bound must be >= 0");
}

double TerminalCondition::evaluate(const Eigen::VectorXd& w) const {
    if (static_cast<std::size_t>(w.size()) != arity())
        throw PreconditionError("terminal " + name_ + ": expected " + std::to_string(arity()) +
                                " observation values, got " + std::to_string(w.size()));
    return phi_(w);
}

double TerminalCondition::evaluate(std::initializer_list<double> w) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
    std::copy(w.begin(), w.end(), v.data());
    return evaluate(v);
}

Eigen::VectorXd TerminalCondition::gradient(const Eigen::VectorXd& w) const {
    if (static_cast<std::size_t>(w.size()) != arity())
        throw PreconditionError("terminal " + name_ + ": gradient length mismatch");
    return grad_(w);
}

bool TerminalCondition::is_markovian() const {
    return arity() == 1 && std::abs(obs_times_.front() - T_) <= 1e-12 * T_;
}

double TerminalCondition::declared_L() const {
    return std::max(sup_bound_.value_or(0.0), malliavin_bound_);
}

TerminalCondition TerminalCondition::with_bounds(std::optional<double> sup_bound, double malliavin_bound) const {
    return TerminalCondition(name_, T_, obs_times_, phi_, grad_, sup_bound, malliavin_bound);
}

double malliavin_derivative(const TerminalCondition& tc, const Eigen::VectorXd& w, double t) {
    const Eigen::VectorXd g = tc.gradient(w);
    double d = 0.0;
    const auto& times = tc.obs_times();
    for (std::size_t i = 0; i < times.size(); ++i)
        if (t <= times[i]) d += g[static_cast<Eigen::Index>(i)];
    return d;
}

namespace {

struct GridMax {
    double sup = 0.0;
    double malliavin = 0.0;
    double grad_l1 = 0.0;
};

GridMax grid_scan(const TerminalCondition& tc, double radius, int points) {
    const int k = static_cast<int>(tc.arity());
    GridMax out;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    Eigen::VectorXd w(k);
    const double h = points > 1 ? 2.0 * radius / (points - 1) : 0.0;
    while (true) {
        for (int d = 0; d < k; ++d) w[d] = -radius + h * idx[static_cast<std::size_t>(d)];
        out.sup = std::max(out.sup, std::abs(tc.evaluate(w)));
        const Eigen::VectorXd g = tc.gradient(w);
        out.grad_l1 = std::max(out.grad_l1, g.cwiseAbs().sum());
        // D_t xi takes the k suffix sums of the gradient as t crosses t_1..t_k
        double suffix = 0.0;
        for (int d = k - 1; d >= 0; --d) {
            suffix += g[d];
            out.malliavin = std::max(out.malliavin, std::abs(suffix));
        }
        int d = 0;
        while (d < k && ++idx[static_cast<std::size_t>(d)] == points) idx[static_cast<std::size_t>(d++)] = 0;
        if (d == k) break;
    }
    return out;
}

}  // namespace

BoundEstimate estimate_bounds(const TerminalCondition& tc, double grid_radius, int grid_points) {
    if (tc.arity() > 3)
        throw PreconditionError("estimate_bounds: " + std::to_string(tc.arity()) +
                                " observation times; grid estimation supports k <= 3");
    if (!(grid_radius > 0.0) || grid_points < 2)
        throw PreconditionError("estimate_bounds: need grid_radius > 0 and grid_points >= 2");
    const GridMax full = grid_scan(tc, grid_radius, grid_points);
    const GridMax half = grid_scan(tc, 0.5 * grid_radius, (grid_points + 1) / 2);
    BoundEstimate est;
    est.sup_estimate = full.sup;
    est.malliavin_estimate = full.malliavin;
    est.grid_tolerance = full.grad_l1 * 2.0 * grid_radius / (grid_points - 1);
    est.sup_grows_with_radius = full.sup - half.sup > 0.05 * full.sup + est.grid_tolerance;
    return est;
}

bool certify_bounds(const TerminalCondition& tc, const BoundEstimate& est, bool require_sup) {
    if (tc.malliavin_bound() < est.malliavin_estimate - est.grid_tolerance) return false;
    if (!tc.sup_bound()) return !require_sup;
    if (est.sup_grows_with_radius) return false;
    return *tc.sup_bound() >= est.sup_estimate - est.grid_tolerance;
}

namespace {

double parse_time(std::string_view s, double T) {
    s = detail::trim(s);
    if (s == "T") return T;
    if (s.size() > 2 && s.substr(0, 2) == "T/") return T / detail::parse_number(s.substr(2));
    if (s.size() > 2 && s.substr(0, 2) == "T*") return T * detail::parse_number(s.substr(2));
    return detail::parse_number(s);
}

std::vector<double> parse_times(std::string_view s, double T) {
    s = detail::trim(s);
    std::vector<double> out;
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw PreconditionError("unterminated time list '" + std::string(s) + "'");
        s = s.substr(1, s.size() - 2);
        while (true) {
            const auto comma = s.find(',');
            out.push_back(parse_time(s.substr(0, comma), T));
            if (comma == std::string_view::npos) break;
            s.remove_prefix(comma + 1);
        }
    } else {
        out.push_back(parse_time(s, T));
    }
    return out;
}

}  // namespace

TerminalCondition make_terminal(std::string_view spec, double T) {
    const auto at = spec.find('@');
    if (at == std::string_view::npos)
        throw PreconditionError("terminal '" + std::string(spec) + "' needs '@<times>'");
    const auto call = detail::parse_call(spec.substr(0, at));
    std::vector<double> times = parse_times(spec.substr(at + 1), T);
    const double k = static_cast<double>(times.size());
    if (call.args.size() > 1) throw PreconditionError("terminal '" + std::string(spec) + "': at most one parameter");
    const double a = call.args.empty() ? 1.0 : call.args[0];
    const double abs_a = std::abs(a);

    using G = std::function<double(double)>;
    G g, dg;
    std::optional<double> sup;
    double mal = abs_a * k;
    if (call.name == "identity") {
        g = [](double s) { return s; };
        dg = [](double) { return 1.0; };
    } else if (call.name == "sin") {
        g = [](double s) { return std::sin(s); };
        dg = [](double s) { return std::cos(s); };
        sup = abs_a;
    } else if (call.name == "cos") {
        g = [](double s) { return std::cos(s); };
        dg = [](double s) { return -std::sin(s); };
        sup = abs_a;
    } else if (call.name == "tanh") {
        g = [](double s) { return std::tanh(s); };
        dg = [](double s) {
            const double c = 1.0 / std::cosh(s);
            return c * c;
        };
        sup = abs_a;
    } else if (call.name == "const") {
        return TerminalCondition(
            std::string(spec), T, std::move(times), [a](const Eigen::VectorXd&) { return a; },
            [](const Eigen::VectorXd& w) { return Eigen::VectorXd::Zero(w.size()).eval(); }, abs_a, 0.0);
    } else {
        throw PreconditionError("unknown terminal family '" + call.name + "'");
    }
    auto phi = [a, g](const Eigen::VectorXd& w) { return a * g(w.sum()); };
    auto grad = [a, dg](const Eigen::VectorXd& w) {
        return Eigen::VectorXd::Constant(w.size(), a * dg(w.sum())).eval();
    };
    return TerminalCondition(std::string(spec), T, std::move(times), phi, grad, sup, mal);
}

}  // namespace bsdelab
