#include "bsdelab/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "bsdelab/errors.hpp"
#include "registry_parse.hpp"

namespace bsdelab {

std::string_view to_string(GrowthClass g) {
    return g == GrowthClass::Quadratic ? "Quadratic" : "Linear";
}

Generator::Generator(std::string name, Fn fn, GrowthClass growth, double L, std::optional<double> K)
    : name_(std::move(name)),
      fn_(std::make_shared<const Fn>(std::move(fn))),
      growth_(growth),
      L_(L),
      K_(K) {
    if (!(L_ > 0.0) || !std::isfinite(L_)) throw PreconditionError("generator " + name_ + ": L must be > 0");
    if (K_ && !(*K_ > 0.0)) throw PreconditionError("generator " + name_ + ": K must be > 0 when present");
}

Generator Generator::with_constants(double L, std::optional<double> K) const {
    Generator g = *this;
    if (!(L > 0.0)) throw PreconditionError("generator " + name_ + ": L must be > 0");
    if (K && !(*K > 0.0)) throw PreconditionError("generator " + name_ + ": K must be > 0 when present");
    g.L_ = L;
    g.K_ = K;
    return g;
}

double Generator::growth_bound(double y, double z) const {
    const double zt = growth_ == GrowthClass::Quadratic ? z * z : std::abs(z);
    return L_ * (1.0 + std::abs(y) + zt);
}

ValidationReport validate_growth(const Generator& g, const Box& domain, std::size_t n_samples,
                                 std::uint64_t seed) {
    if (n_samples == 0) throw PreconditionError("validate_growth: n_samples must be >= 1");
    ValidationReport rep{g.growth_class() == GrowthClass::Quadratic ? Assumption::A2Growth
                                                                     : Assumption::B2Growth};
    for (const auto& p : sample_box(domain, n_samples, seed)) {
        const double v = g(p.t, p.y, p.z);
        const double bound = g.growth_bound(p.y, p.z);
        rep.record(excess(std::abs(v), bound, bound), {p.t, p.y, p.z});
    }
    return rep;
}

namespace {

// Partner coordinate at distance `delta`, kept inside [lo, hi] when possible.
double partner(double x, double delta, double lo, double hi) {
    if (x + delta <= hi) return x + delta;
    if (x - delta >= lo) return x - delta;
    return x + delta;
}

}  // namespace

ValidationReport validate_y_lipschitz(const Generator& g, const Box& domain, std::size_t n_pairs,
                                      std::uint64_t seed) {
    if (n_pairs == 0) throw PreconditionError("validate_y_lipschitz: n_pairs must be >= 1");
    ValidationReport rep{Assumption::A2YLipschitz};
    std::size_t k = 0;
    for (const auto& p : sample_box(domain, n_pairs, seed)) {
        const double y2 = partner(p.y, kPairScales[k++ % 3], domain.y_min, domain.y_max);
        const double f1 = g(p.t, p.y, p.z);
        const double f2 = g(p.t, y2, p.z);
        const double lhs = std::abs(f1 - f2);
        rep.record(excess(lhs, g.L() * std::abs(p.y - y2), std::max(std::abs(f1), std::abs(f2))),
                   {p.t, p.y, p.z, y2, p.z});
    }
    return rep;
}

ValidationReport validate_local_z_lipschitz(const Generator& g, const Box& domain,
                                            std::size_t n_pairs, std::uint64_t seed) {
    if (!g.K()) throw PreconditionError("validate_local_z_lipschitz: generator " + g.name() + " has no K");
    if (n_pairs == 0) throw PreconditionError("validate_local_z_lipschitz: n_pairs must be >= 1");
    const double K = *g.K();
    ValidationReport rep{Assumption::A3};
    std::size_t k = 0;
    for (const auto& p : sample_box(domain, n_pairs, seed)) {
        const double z2 = partner(p.z, kPairScales[k++ % 3], domain.z_min, domain.z_max);
        const double f1 = g(p.t, p.y, p.z);
        const double f2 = g(p.t, p.y, z2);
        const double bound = K * (1.0 + std::abs(p.z) + std::abs(z2)) * std::abs(p.z - z2);
        rep.record(excess(std::abs(f1 - f2), bound, std::max(std::abs(f1), std::abs(f2))),
                   {p.t, p.y, p.z, p.y, z2});
    }
    return rep;
}

Generator localize(const Generator& g, double M) {
    if (!(M > 0.0)) throw PreconditionError("localize: M must be > 0");
    auto fn = [g, M](double t, double y, double z) {
        if (std::abs(z) <= M) return g(t, y, z);
        return g(t, y, std::copysign(M, z));
    };
    return Generator(g.name() + "|loc(" + detail::format_number(M) + ")", fn, g.growth_class(), g.L(), g.K());
}

Generator make_generator(std::string_view spec) {
    const auto call = detail::parse_call(spec);
    const auto& p = call.args;
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (p.size() < lo || p.size() > hi)
            throw PreconditionError("generator '" + std::string(spec) + "': wrong number of parameters");
    };
    const std::string& name = call.name;
    const std::string label(spec);

    if (name == "zero") {
        need(0, 0);
        return {label, [](double, double, double) { return 0.0; }, GrowthClass::Linear, 1.0, 1.0};
    }
    if (name == "const") {
        need(1, 1);
        const double c = p[0];
        return {label, [c](double, double, double) { return c; }, GrowthClass::Linear,
                std::max(std::abs(c), 1e-12), 1.0};
    }
    if (name == "linear") {
        need(3, 3);
        const double a = p[0], b = p[1], c = p[2];
        const double L = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-12});
        return {label, [a, b, c](double, double y, double z) { return a * y + b * z + c; },
                GrowthClass::Linear, L, std::max(std::abs(b), 1e-12)};
    }
    if (name == "quad") {
        need(1, 1);
        const double gamma = p[0];
        if (!(gamma > 0.0)) throw PreconditionError("quad(gamma): gamma must be > 0");
        const double half = 0.5 * gamma;
        return {label, [half](double, double, double z) { return half * z * z; },
                GrowthClass::Quadratic, half, half};
    }
    if (name == "quad_affine") {
        need(3, 3);
        const double half = 0.5 * p[0], a = p[1], c = p[2];
        if (!(half > 0.0)) throw PreconditionError("quad_affine(gamma,a,c): gamma must be > 0");
        const double L = std::max({half, std::abs(a), std::abs(c)});
        return {label, [half, a, c](double, double y, double z) { return half * z * z + a * y + c; },
                GrowthClass::Quadratic, L, half};
    }
    if (name == "abs") {
        need(0, 0);
        return {label, [](double, double, double z) { return std::abs(z); }, GrowthClass::Linear, 1.0, 1.0};
    }
    if (name == "power") {
        need(1, 2);
        const double q = p[0];
        const double s = p.size() > 1 ? p[1] : 1.0;
        if (q < 1.0 || q > 2.0) throw PreconditionError("power(p): p must lie in [1, 2]");
        // |z|^p <= 1 + z^2 on [1,2]; linear growth only at p = 1
        const GrowthClass gc = q == 1.0 ? GrowthClass::Linear : GrowthClass::Quadratic;
        return {label, [q, s](double, double, double z) { return s * std::pow(std::abs(z), q); }, gc,
                std::max(std::abs(s), 1e-12), std::max(std::abs(s) * q, 1e-12)};
    }
    if (name == "sin") {
        need(0, 0);
        return {label, [](double, double, double z) { return std::sin(z); }, GrowthClass::Linear, 1.0, 1.0};
    }
    if (name == "trig") {
        need(2, 2);
        const double a = p[0], b = p[1];
        const double L = std::max({std::abs(a), std::abs(b), 1e-12});
        return {label, [a, b](double, double y, double z) { return a * std::sin(z) + b * y; },
                GrowthClass::Linear, L, std::max(std::abs(a), 1e-12)};
    }
    if (name == "softabs") {
        need(0, 0);
        return {label, [](double, double, double z) { return std::sqrt(1.0 + z * z) - 1.0; },
                GrowthClass::Linear, 1.0, 1.0};
    }
    throw PreconditionError("unknown generator '" + std::string(spec) + "'");
}

}  // namespace bsdelab
