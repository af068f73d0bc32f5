#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace bsdelab {

/// Recombining binomial walk for W on [0, T]: step i holds states
/// k = 0..i with W = (2k - i) sqrt(dt); increments are +-sqrt(dt) w.p. 1/2.
struct Lattice {
    double T;
    int N;

    Lattice(double T, int N);

    double dt() const { return T / N; }
    double sqrt_dt() const { return std::sqrt(dt()); }
    double time(int i) const { return T * i / N; }
    double w(int i, long k) const { return static_cast<double>(2 * k - i) * sqrt_dt(); }
};

enum class Topology { Recombining, Tree };

/// Node values of a solved BSDE. Layer i of Y has i+1 entries on the
/// recombining lattice and 2^i on the full binary tree; Z has layers 0..N-1.
/// Successors of (i, k) are down(k) and up(k) in layer i+1.
struct BsdeSolution {
    Topology topology;
    double T;
    int N;
    std::vector<Eigen::ArrayXd> Y;
    std::vector<Eigen::ArrayXd> Z;

    double Y0 = 0.0;
    double y_sup = 0.0;
    double z_sup = 0.0;
    double bmo = 0.0;

    double dt() const { return T / N; }
    double sqrt_dt() const { return std::sqrt(dt()); }
    double time(int i) const { return T * i / N; }

    long down(long k) const { return topology == Topology::Recombining ? k : 2 * k; }
    long up(long k) const { return topology == Topology::Recombining ? k + 1 : 2 * k + 1; }

    /// Brownian value at node (i, k); on the tree bit j of k (from the top)
    /// records whether step j+1 went up.
    double w(int i, long k) const {
        const long ups = topology == Topology::Recombining
                             ? k
                             : static_cast<long>(std::popcount(static_cast<unsigned long>(k)));
        return static_cast<double>(2 * ups - i) * sqrt_dt();
    }

    std::size_t node_count() const;
};

/// Exact one-step conditional mean E_i[X_{i+1}] of a layer-(i+1) array.
Eigen::ArrayXd conditional_mean(const BsdeSolution& sol, int i, const Eigen::ArrayXd& next);

}  // namespace bsdelab
