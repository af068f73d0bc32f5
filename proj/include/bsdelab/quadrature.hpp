#pragma once

#include <functional>

#include <Eigen/Dense>

namespace bsdelab {

/// Gauss-Hermite rule for the standard normal law:
/// E[g(G)] ~ sum_i weights[i] * g(nodes[i]), exact for polynomials of degree < 2n.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the
/// probabilists' Hermite recurrence x He_k = He_{k+1} + k He_{k-1}.
GaussHermiteRule gauss_hermite(int n);

/// E[g(G)], G ~ N(0,1), with an n-point rule.
double expect_standard_normal(const std::function<double(double)>& g, int n);

}  // namespace bsdelab
