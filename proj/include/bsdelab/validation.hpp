#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bsdelab {

/// Axis-aligned box in (t, y, z) space used for sampled assumption checks.
struct Box {
    double t_min = 0.0, t_max = 1.0;
    double y_min = -5.0, y_max = 5.0;
    double z_min = -5.0, z_max = 5.0;

    static Box symmetric(double T, double y_radius, double z_radius) {
        return {0.0, T, -y_radius, y_radius, -z_radius, z_radius};
    }
};

struct SamplePoint {
    double t, y, z;
};

enum class Assumption {
    A2Growth,
    A2YLipschitz,
    A3,
    B2Growth,
    ConvolutionGrowth,
    ConvolutionMonotone,
    ConvolutionConvergence,
    ConvolutionLipschitz,
    ConvolutionOrdering,
    SolutionBounds,
    ZBound,
};

std::string_view to_string(Assumption a);

/// Point (or pair of points) achieving the worst violation.
struct Witness {
    double t = 0.0, y = 0.0, z = 0.0;
    std::optional<double> y2, z2;
    std::optional<double> n;
};

struct ValidationReport {
    Assumption assumption;
    std::size_t samples_tested = 0;
    double worst_violation = 0.0;
    std::optional<Witness> witness;

    bool passed() const { return worst_violation == 0.0; }

    /// Records one sample. A violation of +inf or NaN (non-finite evaluation)
    /// dominates every finite one.
    void record(double violation, const Witness& w);
    void merge(const ValidationReport& other);
};

/// Amount by which `lhs <= rhs` fails, ignoring differences at the
/// floating-point resolution of `scale`. Non-finite inputs map to +inf.
double excess(double lhs, double rhs, double scale);

/// Deterministic sample set: a stratified grid (odd count per axis, so the box
/// centre and faces are hit exactly) followed by pseudorandom interior points.
std::vector<SamplePoint> sample_box(const Box& box, std::size_t n_samples, std::uint64_t seed);

/// Pair offsets used by the Lipschitz checks, cycling over three scales.
inline constexpr double kPairScales[] = {1e-4, 1e-2, 1.0};

}  // namespace bsdelab
