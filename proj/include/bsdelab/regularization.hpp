#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bsdelab/generators.hpp"
#include "bsdelab/validation.hpp"

namespace bsdelab {

enum class Direction { Sup, Inf };
enum class Penalty { Quadratic, Linear };

std::string_view to_string(Direction d);
std::string_view to_string(Penalty p);
Direction parse_direction(std::string_view s);
Penalty parse_penalty(std::string_view s);

/// Which convolution to take and with which index n:
///
///   Sup, Quadratic:  sup_v { f(t,y,v) - n |z-v|^2 }
///   Inf, Quadratic:  inf_v { f(t,y,v) + n |z-v|^2 }
///   Sup, Linear:     sup_v { f(t,y,v) - n |z-v| }
///   Inf, Linear:     inf_v { f(t,y,v) + n |z-v| }
struct PenaltySpec {
    Direction direction = Direction::Sup;
    Penalty penalty = Penalty::Quadratic;
    double n = 4.0;
};

struct OptimizerConfig {
    int coarse_points = 257;
    int refine_iters = 60;
    double tol = 1e-8;

    /// Throws PreconditionError unless coarse_points >= 16, refine_iters >= 20, tol > 0.
    void validate() const;
    /// Absolute accuracy target at a value of magnitude |value|.
    double tolerance_at(double value) const;
};

/// Smallest admissible n: 2L for the quadratic penalty, L for the linear one.
/// The optimizer requires n to exceed it by more than kIndexMargin.
double index_threshold(Penalty p, double L);
inline constexpr double kIndexMargin = 1e-9;

/// Throws PreconditionError if `spec` is not admissible for `g`.
void check_penalty_spec(const Generator& g, const PenaltySpec& spec);

/// Half-width r of the interval [z-r, z+r] that provably contains the
/// optimizer, from the growth bound of g (10% safety margin included).
double certified_radius(const Generator& g, const PenaltySpec& spec, double y, double z);

/// One convolution value: coarse grid over the certified interval, then
/// golden-section refinement around the best cell. `radius_scale` widens the
/// search interval (used to check that the certificate is not binding).
double convolution_value(const Generator& g, const PenaltySpec& spec, const OptimizerConfig& opt,
                         double t, double y, double z, double radius_scale = 1.0);

/// The regularized generator. Quadratic penalty: growth constant 2L
/// (|f_n| <= L(1+|y|+2|z|^2)); linear: L. Both keep the y-Lipschitz constant
/// and get K = n.
Generator convolve(const Generator& g, const PenaltySpec& spec, const OptimizerConfig& opt = {});

// ---------------------------------------------------------------------------
// Lemma property checks. Every violation is measured beyond the optimizer
// tolerance stated per check.

/// |f_n| <= L(1+|y|+2|z|^2) (quadratic) or L(1+|y|+|z|) (linear), bound
/// inflated by opt.tol.
ValidationReport verify_lemma_bounds(const Generator& g, const PenaltySpec& spec,
                                     const OptimizerConfig& opt, const Box& domain,
                                     std::size_t samples, std::uint64_t seed);

/// Sup-convolutions must not increase and inf-convolutions must not decrease
/// along the ascending `n_list`; slack 2 opt.tol.
ValidationReport verify_monotone_in_n(const Generator& g, Direction direction, Penalty penalty,
                                      std::span<const double> n_list,
                                      std::span<const SamplePoint> points,
                                      const OptimizerConfig& opt);

struct ConvergenceTrace {
    std::vector<double> n;
    std::vector<double> z_n;
    std::vector<double> gaps;           ///< |f_n(t,y,z_n) - f(t,y,z)|
    std::vector<double> rate_bounds;    ///< a priori bound on each gap
    double tail_tolerance = 0.0;
    ValidationReport report;            ///< violation of gap <= bound, and of the tail tolerance
};

/// A priori bound on |f_n(t,y,z_n) - f(t,y,z)| from the local z-Lipschitz
/// modulus rho = K(1+2R) on the certified search region (R its radius around 0):
/// rho^2/(4n) + rho|z_n-z| for the quadratic penalty, (rho-n)^+ r + rho|z_n-z|
/// for the linear one. Requires g.K().
double convergence_rate_bound(const Generator& g, const PenaltySpec& spec, double y, double z,
                              double z_n);

/// Evaluates f_n(t,y,z_n) for each n and reports the gaps to f(t,y,z).
/// Fails when a gap exceeds its rate bound (when g.K() is present) or when the
/// last gap exceeds `tail_tolerance` (defaults to the last rate bound).
ConvergenceTrace verify_pointwise_convergence(const Generator& g, Direction direction,
                                              Penalty penalty, std::span<const double> n_list,
                                              double t, double y, double z,
                                              const std::function<double(double n)>& z_sequence,
                                              const OptimizerConfig& opt,
                                              std::optional<double> tail_tolerance = std::nullopt);

/// |f_n(y1,z1) - f_n(y2,z2)| <= L|y1-y2| + n(1+|z1|+|z2|)|z1-z2| (quadratic,
/// n >= 2L+1 required) or L|y1-y2| + n|z1-z2| (linear); slack 2 opt.tol.
ValidationReport verify_local_lipschitz(const Generator& g, const PenaltySpec& spec,
                                        const OptimizerConfig& opt,
                                        std::span<const std::pair<SamplePoint, SamplePoint>> pairs);

/// Sup-convolution >= f >= inf-convolution at every point, slack 2 opt.tol.
ValidationReport verify_ordering(const Generator& g, Penalty penalty, double n,
                                 const OptimizerConfig& opt, std::span<const SamplePoint> points);

}  // namespace bsdelab
