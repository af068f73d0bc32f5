#pragma once

#include "bsdelab/generators.hpp"
#include "bsdelab/lattice.hpp"
#include "bsdelab/terminal.hpp"

namespace bsdelab {

struct FixedPointConfig {
    double tol = 1e-12;
    int max_iter = 200;
};

/// Backward induction on the recombining lattice:
///   Z_i = (Y_{i+1}^up - Y_{i+1}^down) / (2 sqrt(dt))
///   Y_i = m + dt f(t_i, Y_i, Z_i),  m = (Y_{i+1}^up + Y_{i+1}^down) / 2
/// with the implicit y-equation solved by fixed-point iteration.
/// Requires a Markovian terminal value and L dt < 1.
BsdeSolution solve_backward(const Generator& g, const TerminalCondition& tc, const Lattice& lat,
                            const FixedPointConfig& fp = {});

inline constexpr int kMaxTreeSteps = 18;

/// Same scheme on the non-recombining tree (2^N leaves), so that the terminal
/// value may depend on W at up to three observation times; each must fall on
/// a time step.
BsdeSolution solve_backward_tree(const Generator& g, const TerminalCondition& tc, int N,
                                 const FixedPointConfig& fp = {});

/// Y_0 for the linear driver a y + b z + c:
///   E[Gamma_T xi] + c int_0^T E[Gamma_s] ds,  Gamma_t = exp((a - b^2/2) t + b W_t),
/// by Gauss-Hermite quadrature; throws if doubling the node count moves the
/// result by more than 1e-10 relative.
double solve_linear_closed_form(double a, double b, double c, const TerminalCondition& tc,
                                int quad_points = 64);

}  // namespace bsdelab
