#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bsdelab/validation.hpp"

namespace bsdelab {

enum class GrowthClass { Quadratic, Linear };

std::string_view to_string(GrowthClass g);

/// Deterministic BSDE driver f(t, y, z) with its declared constants.
///
/// L bounds both the growth, |f| <= L(1+|y|+|z|^2) (Quadratic) or
/// L(1+|y|+|z|) (Linear), and the y-Lipschitz modulus. K, when present, is
/// the local z-Lipschitz constant: |f(z)-f(z')| <= K(1+|z|+|z'|)|z-z'|.
class Generator {
public:
    using Fn = std::function<double(double t, double y, double z)>;

    Generator(std::string name, Fn fn, GrowthClass growth, double L,
              std::optional<double> K = std::nullopt);

    double operator()(double t, double y, double z) const { return (*fn_)(t, y, z); }

    const std::string& name() const { return name_; }
    GrowthClass growth_class() const { return growth_; }
    double L() const { return L_; }
    const std::optional<double>& K() const { return K_; }

    /// Same function, different declared constants.
    Generator with_constants(double L, std::optional<double> K) const;
    Generator with_constants(double L) const { return with_constants(L, K_); }

    /// Growth bound of the declared class at (y, z).
    double growth_bound(double y, double z) const;

private:
    std::string name_;
    std::shared_ptr<const Fn> fn_;
    GrowthClass growth_;
    double L_;
    std::optional<double> K_;
};

ValidationReport validate_growth(const Generator& g, const Box& domain, std::size_t n_samples,
                                 std::uint64_t seed);

ValidationReport validate_y_lipschitz(const Generator& g, const Box& domain, std::size_t n_pairs,
                                      std::uint64_t seed);

/// Requires g.K(); throws PreconditionError otherwise.
ValidationReport validate_local_z_lipschitz(const Generator& g, const Box& domain,
                                            std::size_t n_pairs, std::uint64_t seed);

/// Radial truncation in z: f(t, y, M z/|z|) for |z| > M, f itself otherwise.
Generator localize(const Generator& g, double M);

/// Builds a generator from the registry, e.g. "quad(1)", "abs", "trig(1,0.5)".
///
///   zero                    0
///   const(c)                c
///   linear(a,b,c)           a y + b z + c
///   quad(gamma)             (gamma/2) z^2
///   quad_affine(gamma,a,c)  (gamma/2) z^2 + a y + c
///   abs                     |z|
///   power(p[,s])            s |z|^p           (1 <= p <= 2)
///   sin                     sin z
///   trig(a,b)               a sin z + b y
///   softabs                 sqrt(1+z^2) - 1
///
/// Growth class and constants are the tightest ones the registry can certify;
/// use Generator::with_constants to override.
Generator make_generator(std::string_view spec);

}  // namespace bsdelab
