#include "bsdelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace bsdelab {

double bmo_estimate(const BsdeSolution& sol) {
    if (sol.N == 0 || sol.Z.empty()) return 0.0;
    const double dt = sol.dt();
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(sol.Y.back().size());
    double worst = 0.0;
    for (int i = sol.N - 1; i >= 0; --i) {
        const auto& Z = sol.Z[static_cast<std::size_t>(i)];
        acc = conditional_mean(sol, i, acc) + Z.square() * dt;
        worst = std::max(worst, acc.maxCoeff());
    }
    return worst;
}

double y_bound(double L, double T, double t) { return (L + 1.0) * std::exp(L * (T - t)) - 1.0; }
double z_bound(double L, double T, double t) { return L * std::exp(L * (T - t)); }
double bound_slack(double L, double T, double dt) { return 5.0 * L * std::exp(L * T) * std::sqrt(dt); }

namespace {

template <typename Visit>
void for_each_node_excess(const BsdeSolution& sol, double L, bool with_y, Visit&& visit) {
    const double slack = bound_slack(L, sol.T, sol.dt());
    for (int i = 0; i <= sol.N; ++i) {
        const double t = sol.time(i);
        const auto& Y = sol.Y[static_cast<std::size_t>(i)];
        const double yb = y_bound(L, sol.T, t) + slack;
        const double zb = z_bound(L, sol.T, t) + slack;
        for (Eigen::Index k = 0; k < Y.size(); ++k) {
            const bool has_z = i < sol.N;
            const double z = has_z ? sol.Z[static_cast<std::size_t>(i)][k] : 0.0;
            const double ye = with_y ? excess(std::abs(Y[k]), yb, yb) : 0.0;
            const double ze = has_z ? excess(std::abs(z), zb, zb) : 0.0;
            visit(i, static_cast<long>(k), t, Y[k], z, ye, ze);
        }
    }
}

}  // namespace

ValidationReport check_solution_bounds(const BsdeSolution& sol, double L) {
    ValidationReport rep{Assumption::SolutionBounds};
    for_each_node_excess(sol, L, true, [&](int, long, double t, double y, double z, double ye, double ze) {
        rep.record(std::max(ye, ze), {t, y, z});
    });
    return rep;
}

ValidationReport check_z_bound(const BsdeSolution& sol, double L) {
    ValidationReport rep{Assumption::ZBound};
    for_each_node_excess(sol, L, false, [&](int i, long, double t, double y, double z, double, double ze) {
        if (i < sol.N) rep.record(ze, {t, y, z});
    });
    return rep;
}

std::vector<NodeViolation> worst_offenders(const BsdeSolution& sol, double L, std::size_t count) {
    std::vector<NodeViolation> all;
    for_each_node_excess(sol, L, true, [&](int i, long k, double t, double y, double z, double ye, double ze) {
        if (ye > 0.0 || ze > 0.0) all.push_back({i, k, t, sol.w(i, k), y, z, ye, ze});
    });
    auto key = [](const NodeViolation& v) { return std::max(v.y_excess, v.z_excess); };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) > key(b); });
    if (all.size() > count) all.resize(count);
    return all;
}

}  // namespace bsdelab
