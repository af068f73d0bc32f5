#include "bsdelab/solver.hpp"

#include <cmath>
#include <string>

#include "bsdelab/diagnostics.hpp"
#include "bsdelab/errors.hpp"
#include "bsdelab/quadrature.hpp"

namespace bsdelab {

namespace {

double implicit_step(const Generator& g, double t, double m, double z, double dt,
                     const FixedPointConfig& fp, int step, long index) {
    double y = m;
    for (int it = 0; it < fp.max_iter; ++it) {
        const double f = g(t, y, z);
        if (!std::isfinite(f)) throw SolverError("non-finite generator value", step, index);
        const double next = m + dt * f;
        if (std::abs(next - y) <= fp.tol * std::max(1.0, std::abs(next))) return next;
        y = next;
    }
    throw SolverError("fixed point not converged in " + std::to_string(fp.max_iter) + " iterations",
                      step, index);
}

void check_contraction(const Generator& g, double dt) {
    if (!(g.L() * dt < 1.0))
        throw PreconditionError("L dt = " + std::to_string(g.L() * dt) + " >= 1 for " + g.name() +
                                "; refine the lattice");
}

// Fills layers N-1..0 given the terminal layer already in sol.Y[N].
void backward_induction(const Generator& g, BsdeSolution& sol, const FixedPointConfig& fp) {
    const double dt = sol.dt();
    const double sq = sol.sqrt_dt();
    for (int i = sol.N - 1; i >= 0; --i) {
        const Eigen::ArrayXd& next = sol.Y[static_cast<std::size_t>(i + 1)];
        const Eigen::Index m = sol.topology == Topology::Recombining ? i + 1 : (Eigen::Index{1} << i);
        Eigen::ArrayXd Y(m), Z(m);
        const double t = sol.time(i);
        for (Eigen::Index k = 0; k < m; ++k) {
            const double up = next[sol.up(k)];
            const double dn = next[sol.down(k)];
            Z[k] = (up - dn) / (2.0 * sq);
            Y[k] = implicit_step(g, t, 0.5 * (up + dn), Z[k], dt, fp, i, static_cast<long>(k));
        }
        sol.Y[static_cast<std::size_t>(i)] = std::move(Y);
        sol.Z[static_cast<std::size_t>(i)] = std::move(Z);
    }
    sol.Y0 = sol.Y[0][0];
    sol.y_sup = 0.0;
    sol.z_sup = 0.0;
    for (const auto& l : sol.Y) sol.y_sup = std::max(sol.y_sup, l.abs().maxCoeff());
    for (const auto& l : sol.Z) sol.z_sup = std::max(sol.z_sup, l.abs().maxCoeff());
    sol.bmo = bmo_estimate(sol);
}

}  // namespace

BsdeSolution solve_backward(const Generator& g, const TerminalCondition& tc, const Lattice& lat,
                            const FixedPointConfig& fp) {
    if (!tc.is_markovian())
        throw PreconditionError("solve_backward: terminal " + tc.name() +
                                " is path-dependent; use solve_backward_tree");
    if (std::abs(tc.horizon() - lat.T) > 1e-12 * lat.T)
        throw PreconditionError("solve_backward: terminal horizon differs from lattice horizon");
    check_contraction(g, lat.dt());

    BsdeSolution sol{Topology::Recombining, lat.T, lat.N, {}, {}};
    sol.Y.resize(static_cast<std::size_t>(lat.N + 1));
    sol.Z.resize(static_cast<std::size_t>(lat.N));
    Eigen::ArrayXd terminal(lat.N + 1);
    Eigen::VectorXd w(1);
    for (int k = 0; k <= lat.N; ++k) {
        w[0] = lat.w(lat.N, k);
        terminal[k] = tc.evaluate(w);
        if (!std::isfinite(terminal[k])) throw SolverError("non-finite terminal value", lat.N, k);
    }
    sol.Y[static_cast<std::size_t>(lat.N)] = std::move(terminal);
    backward_induction(g, sol, fp);
    return sol;
}

BsdeSolution solve_backward_tree(const Generator& g, const TerminalCondition& tc, int N,
                                 const FixedPointConfig& fp) {
    if (N < 1 || N > kMaxTreeSteps)
        throw PreconditionError("solve_backward_tree: N = " + std::to_string(N) + " outside [1, " +
                                std::to_string(kMaxTreeSteps) + "] (2^N paths)");
    if (tc.arity() > 3) throw PreconditionError("solve_backward_tree: at most 3 observation times");
    const Lattice lat(tc.horizon(), N);
    check_contraction(g, lat.dt());

    std::vector<int> obs_steps;
    for (double t : tc.obs_times()) {
        const double s = t / lat.dt();
        const double r = std::round(s);
        if (std::abs(s - r) > 1e-9 * N)
            throw PreconditionError("solve_backward_tree: observation time " + std::to_string(t) +
                                    " is not on the time grid of N = " + std::to_string(N));
        obs_steps.push_back(static_cast<int>(r));
    }

    BsdeSolution sol{Topology::Tree, lat.T, N, {}, {}};
    sol.Y.resize(static_cast<std::size_t>(N + 1));
    sol.Z.resize(static_cast<std::size_t>(N));
    const long leaves = 1L << N;
    Eigen::ArrayXd terminal(leaves);
    Eigen::VectorXd w(static_cast<Eigen::Index>(obs_steps.size()));
    for (long k = 0; k < leaves; ++k) {
        for (std::size_t j = 0; j < obs_steps.size(); ++j) {
            const int s = obs_steps[j];
            const auto prefix = static_cast<unsigned long>(k) >> (N - s);
            w[static_cast<Eigen::Index>(j)] = static_cast<double>(2 * std::popcount(prefix) - s) * lat.sqrt_dt();
        }
        terminal[k] = tc.evaluate(w);
        if (!std::isfinite(terminal[k])) throw SolverError("non-finite terminal value", N, k);
    }
    sol.Y[static_cast<std::size_t>(N)] = std::move(terminal);
    backward_induction(g, sol, fp);
    return sol;
}

double solve_linear_closed_form(double a, double b, double c, const TerminalCondition& tc,
                                int quad_points) {
    if (!tc.is_markovian())
        throw PreconditionError("solve_linear_closed_form: terminal must be a function of W_T");
    const double T = tc.horizon();
    const double sqT = std::sqrt(T);
    Eigen::VectorXd w(1);
    auto integrand = [&](double x) {
        w[0] = sqT * x;
        return std::exp((a - 0.5 * b * b) * T + b * sqT * x) * tc.evaluate(w);
    };
    const double coarse = expect_standard_normal(integrand, quad_points);
    const double fine = expect_standard_normal(integrand, 2 * quad_points);
    if (std::abs(fine - coarse) > 1e-10 * std::max(1.0, std::abs(fine)))
        throw PreconditionError("solve_linear_closed_form: quadrature not converged with " +
                                std::to_string(quad_points) + " nodes");
    // E[Gamma_s] = e^{a s}
    const double drift = std::abs(a) > 1e-14 ? c * std::expm1(a * T) / a : c * T;
    return fine + drift;
}

}  // namespace bsdelab
