#include "bsdelab/lattice.hpp"

#include "bsdelab/errors.hpp"

namespace bsdelab {

Lattice::Lattice(double T_, int N_) : T(T_), N(N_) {
    if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionError("lattice: T must be > 0");
    if (N < 1) throw PreconditionError("lattice: N must be >= 1");
}

std::size_t BsdeSolution::node_count() const {
    std::size_t n = 0;
    for (const auto& layer : Y) n += static_cast<std::size_t>(layer.size());
    return n;
}

Eigen::ArrayXd conditional_mean(const BsdeSolution& sol, int i, const Eigen::ArrayXd& next) {
    const Eigen::Index m = sol.Y[static_cast<std::size_t>(i)].size();
    Eigen::ArrayXd out(m);
    for (Eigen::Index k = 0; k < m; ++k) out[k] = 0.5 * (next[sol.down(k)] + next[sol.up(k)]);
    return out;
}

}  // namespace bsdelab
