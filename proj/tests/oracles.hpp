#pragma once

// Test-only reference computations, written independently of the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Probabilists' Gauss-Hermite rule from Newton iteration on the orthonormal
// Hermite recurrence (no eigen-solver). Weights sum to 1.
inline void gauss_hermite_newton(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    // physicists' nodes, scaled to probabilists' at the end
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6);
        else if (i == 1) z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2) z = 1.86 * z - 0.86 * x[0];
        else if (i == 3) z = 1.91 * z - 0.91 * x[1];
        else z = 2.0 * z - x[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
    }
    for (int i = 0; i < n; ++i) {
        x[i] *= std::sqrt(2.0);
        w[i] /= std::sqrt(std::numbers::pi);
    }
}

inline double normal_expectation(const std::function<double(double)>& g, int n = 96) {
    std::vector<double> x, w;
    gauss_hermite_newton(n, x, w);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * g(x[i]);
    return s;
}

// sup_v { f(v) - pen(|z-v|) } (sign = +1) or inf_v { f(v) + pen(|z-v|) } (sign = -1)
// by exhaustive search over a uniform grid on [z - r, z + r].
inline double grid_convolution(const std::function<double(double)>& f,
                               const std::function<double(double)>& pen, int sign, double z, double r,
                               int points = 100001) {
    double best = sign > 0 ? -INFINITY : INFINITY;
    for (int k = 0; k < points; ++k) {
        const double v = z - r + 2.0 * r * k / (points - 1);
        const double val = f(v) - sign * pen(std::abs(z - v));
        best = sign > 0 ? std::max(best, val) : std::min(best, val);
    }
    return best;
}

// E[phi(W_{t_1}, ..., W_{t_k})] by enumerating all 2^N paths of the
// symmetric +-sqrt(dt) walk; obs_steps are grid indices in 1..N.
inline double path_sum(int N, double T, const std::vector<int>& obs_steps,
                       const std::function<double(const std::vector<double>&)>& phi) {
    const double h = std::sqrt(T / N);
    double s = 0.0;
    std::vector<double> w(obs_steps.size());
    for (unsigned long path = 0; path < (1UL << N); ++path) {
        double pos = 0.0;
        std::size_t o = 0;
        for (int step = 1; step <= N; ++step) {
            pos += ((path >> (N - step)) & 1UL) ? h : -h;
            if (o < obs_steps.size() && obs_steps[o] == step) w[o++] = pos;
        }
        s += phi(w);
    }
    return s / static_cast<double>(1UL << N);
}

}  // namespace oracle
