#include "bsdelab/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bsdelab/errors.hpp"

namespace bsdelab {

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw PreconditionError("gauss_hermite: need at least one node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        J(k - 1, k) = b;
        J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw PreconditionError("gauss_hermite: eigen-decomposition failed");
    GaussHermiteRule rule{es.eigenvalues(), es.eigenvectors().row(0).transpose().array().square().matrix()};
    rule.weights /= rule.weights.sum();
    return rule;
}

double expect_standard_normal(const std::function<double(double)>& g, int n) {
    const GaussHermiteRule rule = gauss_hermite(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += rule.weights[i] * g(rule.nodes[i]);
    return acc;
}

}  // namespace bsdelab
