#include "bsdelab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsdelab/errors.hpp"

namespace bsdelab {

ComparisonReport verify_comparison(const Generator& g, const Generator& g_prime,
                                   const TerminalCondition& tc, const TerminalCondition& tc_prime,
                                   const Lattice& lat, const FixedPointConfig& fp) {
    const BsdeSolution sol = solve_backward(g, tc, lat, fp);
    const BsdeSolution solp = solve_backward(g_prime, tc_prime, lat, fp);
    return compare_solutions(g, g_prime, sol, solp);
}

ComparisonReport compare_solutions(const Generator& g, const Generator& g_prime,
                                   const BsdeSolution& sol, const BsdeSolution& solp) {
    if (sol.topology != Topology::Recombining || solp.topology != Topology::Recombining ||
        sol.N != solp.N || sol.T != solp.T)
        throw PreconditionError("compare_solutions: both solutions must live on the same recombining lattice");

    const int N = sol.N;
    const double dt = sol.dt();
    const double sq = sol.sqrt_dt();

    ComparisonReport rep;
    rep.N = N;
    const auto& xi = sol.Y[static_cast<std::size_t>(N)];
    const auto& xip = solp.Y[static_cast<std::size_t>(N)];
    rep.terminal_gap_min = (xi - xip).minCoeff();
    rep.delta_y_min = rep.terminal_gap_min;
    rep.driver_gap_min = std::numeric_limits<double>::infinity();

    // Coefficients per node, needed forwards (Gamma) and backwards (identity).
    std::vector<Eigen::ArrayXd> a(static_cast<std::size_t>(N)), b(static_cast<std::size_t>(N)),
        df(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const auto& Y = sol.Y[s];
        const auto& Yp = solp.Y[s];
        const auto& Z = sol.Z[s];
        const auto& Zp = solp.Z[s];
        const double t = sol.time(i);
        a[s].resize(i + 1);
        b[s].resize(i + 1);
        df[s].resize(i + 1);
        for (int k = 0; k <= i; ++k) {
            const double dY = Y[k] - Yp[k];
            const double dZ = Z[k] - Zp[k];
            a[s][k] = dY != 0.0 ? (g(t, Y[k], Z[k]) - g(t, Yp[k], Z[k])) / dY : 0.0;
            b[s][k] = dZ != 0.0 ? (g(t, Yp[k], Z[k]) - g(t, Yp[k], Zp[k])) / dZ : 0.0;
            df[s][k] = g(t, Yp[k], Zp[k]) - g_prime(t, Yp[k], Zp[k]);
            rep.delta_y_min = std::min(rep.delta_y_min, dY);
        }
        rep.driver_gap_min = std::min(rep.driver_gap_min, df[s].minCoeff());
        rep.a_sup = std::max(rep.a_sup, a[s].abs().maxCoeff());
        rep.b_sup = std::max(rep.b_sup, b[s].abs().maxCoeff());
        rep.min_step_factor =
            std::min(rep.min_step_factor, (1.0 + a[s] * dt - b[s].abs() * sq).minCoeff());
    }
    rep.delta_y0 = sol.Y0 - solp.Y0;

    // Range of Gamma over all paths reaching each node.
    Eigen::ArrayXd gmin = Eigen::ArrayXd::Ones(1), gmax = Eigen::ArrayXd::Ones(1);
    rep.gamma_min = 1.0;
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        Eigen::ArrayXd nmin = Eigen::ArrayXd::Constant(i + 2, std::numeric_limits<double>::infinity());
        Eigen::ArrayXd nmax = Eigen::ArrayXd::Constant(i + 2, -std::numeric_limits<double>::infinity());
        for (int k = 0; k <= i; ++k) {
            const double up = 1.0 + a[s][k] * dt + b[s][k] * sq;
            const double dn = 1.0 + a[s][k] * dt - b[s][k] * sq;
            for (auto [child, fac] : {std::pair{k + 1, up}, std::pair{k, dn}}) {
                const double p = gmin[k] * fac, q = gmax[k] * fac;
                nmin[child] = std::min({nmin[child], p, q});
                nmax[child] = std::max({nmax[child], p, q});
            }
        }
        gmin = std::move(nmin);
        gmax = std::move(nmax);
        rep.gamma_min = std::min(rep.gamma_min, gmin.minCoeff());
    }

    // V_i = E_i[(Gamma_N/Gamma_i) dxi + sum_{r>=i} (Gamma_r/Gamma_i) df_r dt]
    Eigen::ArrayXd V = xi - xip;
    rep.max_residual = 0.0;
    for (int i = N - 1; i >= 0; --i) {
        const auto s = static_cast<std::size_t>(i);
        Eigen::ArrayXd Vi(i + 1);
        for (int k = 0; k <= i; ++k) {
            const double up = 1.0 + a[s][k] * dt + b[s][k] * sq;
            const double dn = 1.0 + a[s][k] * dt - b[s][k] * sq;
            Vi[k] = df[s][k] * dt + 0.5 * (up * V[k + 1] + dn * V[k]);
        }
        const Eigen::ArrayXd dY = sol.Y[s] - solp.Y[s];
        rep.max_residual = std::max(rep.max_residual, (dY - Vi).abs().maxCoeff());
        V = std::move(Vi);
    }
    return rep;
}

}  // namespace bsdelab
