#pragma once

#include "bsdelab/generators.hpp"
#include "bsdelab/lattice.hpp"
#include "bsdelab/solver.hpp"
#include "bsdelab/terminal.hpp"

namespace bsdelab {

/// Outcome of the discrete linearization of two BSDEs (Y, Z) (driver f, terminal
/// xi) and (Y', Z') (driver f', terminal xi').
///
/// With a_i = [f(Y,Z) - f(Y',Z)]/dY, b_i = [f(Y',Z) - f(Y',Z')]/dZ (zero on a
/// vanishing denominator) and the adjoint Gamma_{i+1} = Gamma_i (1 + a_i dt + b_i dW),
/// the residual is the worst node gap in
///   Gamma_i dY_i = E_i[ Gamma_N dxi + sum_{r >= i} Gamma_r df_r dt ],
/// with Gamma normalised to 1 at the conditioning node.
struct ComparisonReport {
    double max_residual = 0.0;
    double gamma_min = 1.0;        ///< min over all paths and steps of Gamma
    double delta_y_min = 0.0;      ///< min over nodes of Y - Y'
    double delta_y0 = 0.0;
    double min_step_factor = 1.0;  ///< min over nodes of 1 + a dt +- b sqrt(dt)
    double terminal_gap_min = 0.0; ///< min of xi - xi' (hypothesis: >= 0)
    double driver_gap_min = 0.0;   ///< min of f - f' along (Y', Z') (hypothesis: >= 0)
    double a_sup = 0.0;
    double b_sup = 0.0;
    int N = 0;
};

/// Solves both problems on `lat` and reports the identity residual and sign
/// checks. Failed hypotheses are reported, never thrown.
ComparisonReport verify_comparison(const Generator& g, const Generator& g_prime,
                                   const TerminalCondition& tc, const TerminalCondition& tc_prime,
                                   const Lattice& lat, const FixedPointConfig& fp = {});

/// Same analysis on already solved problems (same lattice).
ComparisonReport compare_solutions(const Generator& g, const Generator& g_prime,
                                   const BsdeSolution& sol, const BsdeSolution& sol_prime);

}  // namespace bsdelab
