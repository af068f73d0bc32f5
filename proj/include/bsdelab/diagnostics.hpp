#pragma once

#include <vector>

#include "bsdelab/lattice.hpp"
#include "bsdelab/validation.hpp"

namespace bsdelab {

/// max over nodes (i, k) of E_{(i,k)}[ sum_{r >= i} Z_r^2 dt ]: the BMO norm of Z
/// with conditioning restricted to lattice nodes (a lower bound for the
/// stopping-time version).
double bmo_estimate(const BsdeSolution& sol);

/// |Y_t| <= (L+1) e^{L(T-t)} - 1
double y_bound(double L, double T, double t);
/// |Z_t| <= L e^{L(T-t)}
double z_bound(double L, double T, double t);
/// Additive discretization allowance C sqrt(dt) with C = 5 L e^{LT}.
double bound_slack(double L, double T, double dt);

/// Worst node violation of both bounds (each relaxed by bound_slack).
/// Witness: t = node time, y = Y, z = Z at the node.
ValidationReport check_solution_bounds(const BsdeSolution& sol, double L);

/// Z part only; the bound that survives for linear-growth drivers.
ValidationReport check_z_bound(const BsdeSolution& sol, double L);

struct NodeViolation {
    int step;
    long index;
    double t, w, Y, Z;
    double y_excess;
    double z_excess;
};

/// The `count` nodes with the largest bound excess, worst first; only nodes
/// with a positive excess are returned.
std::vector<NodeViolation> worst_offenders(const BsdeSolution& sol, double L, std::size_t count);

/// max over nodes of |Y_i - (E_i[Y_{i+1}] + dt f(t_i, Y_i, Z_i))|: how well the
/// stored solution satisfies the discrete dynamics.
template <typename Driver>
double dynamics_residual(const BsdeSolution& sol, const Driver& f) {
    double worst = 0.0;
    for (int i = 0; i < sol.N; ++i) {
        const auto& next = sol.Y[static_cast<std::size_t>(i + 1)];
        const auto& Y = sol.Y[static_cast<std::size_t>(i)];
        const auto& Z = sol.Z[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < Y.size(); ++k) {
            const double m = 0.5 * (next[sol.up(k)] + next[sol.down(k)]);
            worst = std::max(worst, std::abs(Y[k] - (m + sol.dt() * f(sol.time(i), Y[k], Z[k]))));
        }
    }
    return worst;
}

}  // namespace bsdelab
