#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bsdelab {

/// Cylindrical terminal value xi = phi(W_{t_1}, ..., W_{t_k}) with closed-form
/// partial derivatives, so that D_t xi = sum over {i : t <= t_i} of d_i phi.
class TerminalCondition {
public:
    using Fn = std::function<double(const Eigen::VectorXd&)>;
    using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    TerminalCondition(std::string name, double T, std::vector<double> obs_times, Fn phi,
                      Gradient grad, std::optional<double> sup_bound, double malliavin_bound);

    const std::string& name() const { return name_; }
    double horizon() const { return T_; }
    const std::vector<double>& obs_times() const { return obs_times_; }
    std::size_t arity() const { return obs_times_.size(); }
    const std::optional<double>& sup_bound() const { return sup_bound_; }
    double malliavin_bound() const { return malliavin_bound_; }

    /// phi(w); throws PreconditionError on a length mismatch.
    double evaluate(const Eigen::VectorXd& w) const;
    double evaluate(std::initializer_list<double> w) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& w) const;

    /// Single observation at the horizon: the recombining lattice applies.
    bool is_markovian() const;

    /// Largest of the declared bounds, the L of (A1) for this terminal value.
    double declared_L() const;

    TerminalCondition with_bounds(std::optional<double> sup_bound, double malliavin_bound) const;

private:
    std::string name_;
    double T_;
    std::vector<double> obs_times_;
    Fn phi_;
    Gradient grad_;
    std::optional<double> sup_bound_;
    double malliavin_bound_;
};

/// D_t xi at the observation values w; zero after the last observation time.
double malliavin_derivative(const TerminalCondition& tc, const Eigen::VectorXd& w, double t);

struct BoundEstimate {
    double sup_estimate = 0.0;        ///< grid max of |phi|
    double malliavin_estimate = 0.0;  ///< grid max over t of |D_t xi|
    double grid_tolerance = 0.0;      ///< spacing times grid max of sum_i |d_i phi|
    bool sup_grows_with_radius = false;
};

/// Grid maxima over [-radius, radius]^k with `grid_points` per axis.
/// Refuses k > 3. The unboundedness flag compares against the half-radius grid.
BoundEstimate estimate_bounds(const TerminalCondition& tc, double grid_radius, int grid_points);

/// True when every declared bound is at least the grid estimate minus the grid
/// tolerance (a missing sup bound is accepted only if `require_sup` is false).
bool certify_bounds(const TerminalCondition& tc, const BoundEstimate& est, bool require_sup);

/// Registry: "<family>[(a)]@<times>", family in {identity, sin, cos, tanh,
/// const}, value a * g(W_{t_1} + ... + W_{t_k}) (for const: the constant a).
/// Times: "T", "T/2", "0.5", or a list "[T/2,T]".
TerminalCondition make_terminal(std::string_view spec, double T);

}  // namespace bsdelab
