#include "bsdelab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bsdelab {

std::string_view to_string(Assumption a) {
    switch (a) {
        case Assumption::A2Growth: return "A2-growth";
        case Assumption::A2YLipschitz: return "A2-y-lipschitz";
        case Assumption::A3: return "A3";
        case Assumption::B2Growth: return "B2-growth";
        case Assumption::ConvolutionGrowth: return "convolution-growth";
        case Assumption::ConvolutionMonotone: return "convolution-monotone";
        case Assumption::ConvolutionConvergence: return "convolution-convergence";
        case Assumption::ConvolutionLipschitz: return "convolution-lipschitz";
        case Assumption::ConvolutionOrdering: return "convolution-ordering";
        case Assumption::SolutionBounds: return "solution-bounds";
        case Assumption::ZBound: return "z-bound";
    }
    return "unknown";
}

void ValidationReport::record(double violation, const Witness& w) {
    ++samples_tested;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    if (violation > worst_violation) {
        worst_violation = violation;
        witness = w;
    }
}

void ValidationReport::merge(const ValidationReport& other) {
    samples_tested += other.samples_tested;
    if (other.worst_violation > worst_violation) {
        worst_violation = other.worst_violation;
        witness = other.witness;
    }
}

double excess(double lhs, double rhs, double scale) {
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) return std::numeric_limits<double>::infinity();
    // ~4500 ulps of the compared magnitude
    const double resolution = 1e-12 * std::max(1.0, std::abs(scale));
    const double d = lhs - rhs;
    return d > resolution ? d : 0.0;
}

std::vector<SamplePoint> sample_box(const Box& box, std::size_t n_samples, std::uint64_t seed) {
    std::vector<SamplePoint> out;
    out.reserve(n_samples);

    const bool t_flat = box.t_max <= box.t_min;
    // Half the budget goes to the grid.
    std::size_t per_axis = 3;
    const int dims = t_flat ? 2 : 3;
    while (std::pow(static_cast<double>(per_axis + 2), dims) <= 0.5 * static_cast<double>(n_samples))
        per_axis += 2;

    auto axis = [per_axis](double lo, double hi, std::size_t k) {
        return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(per_axis - 1);
    };
    const std::size_t t_count = t_flat ? 1 : per_axis;
    for (std::size_t it = 0; it < t_count && out.size() < n_samples; ++it)
        for (std::size_t iy = 0; iy < per_axis && out.size() < n_samples; ++iy)
            for (std::size_t iz = 0; iz < per_axis && out.size() < n_samples; ++iz)
                out.push_back({t_flat ? box.t_min : axis(box.t_min, box.t_max, it),
                               axis(box.y_min, box.y_max, iy), axis(box.z_min, box.z_max, iz)});

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (out.size() < n_samples) {
        const double t = box.t_min + (box.t_max - box.t_min) * u(rng);
        const double y = box.y_min + (box.y_max - box.y_min) * u(rng);
        const double z = box.z_min + (box.z_max - box.z_min) * u(rng);
        out.push_back({t, y, z});
    }
    return out;
}

}  // namespace bsdelab
