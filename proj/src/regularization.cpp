#include "bsdelab/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bsdelab/errors.hpp"
#include "registry_parse.hpp"

namespace bsdelab {

std::string_view to_string(Direction d) { return d == Direction::Sup ? "sup" : "inf"; }
std::string_view to_string(Penalty p) { return p == Penalty::Quadratic ? "quadratic" : "linear"; }

Direction parse_direction(std::string_view s) {
    s = detail::trim(s);
    if (s == "sup" || s == "Sup") return Direction::Sup;
    if (s == "inf" || s == "Inf") return Direction::Inf;
    throw PreconditionError("direction must be 'sup' or 'inf', got '" + std::string(s) + "'");
}

Penalty parse_penalty(std::string_view s) {
    s = detail::trim(s);
    if (s == "quadratic" || s == "QuadraticPenalty") return Penalty::Quadratic;
    if (s == "linear" || s == "LinearPenalty") return Penalty::Linear;
    throw PreconditionError("penalty must be 'quadratic' or 'linear', got '" + std::string(s) + "'");
}

void OptimizerConfig::validate() const {
    if (coarse_points < 16) throw PreconditionError("optimizer: coarse_points must be >= 16");
    if (refine_iters < 20) throw PreconditionError("optimizer: refine_iters must be >= 20");
    if (!(tol > 0.0)) throw PreconditionError("optimizer: tol must be > 0");
}

double OptimizerConfig::tolerance_at(double value) const {
    return tol * std::max(1.0, std::abs(value));
}

double index_threshold(Penalty p, double L) { return p == Penalty::Quadratic ? 2.0 * L : L; }

void check_penalty_spec(const Generator& g, const PenaltySpec& spec) {
    const bool quad_growth = g.growth_class() == GrowthClass::Quadratic;
    if (quad_growth != (spec.penalty == Penalty::Quadratic)) {
        throw PreconditionError("penalty " + std::string(to_string(spec.penalty)) +
                                " does not match growth class " +
                                std::string(to_string(g.growth_class())) + " of " + g.name());
    }
    const double thr = index_threshold(spec.penalty, g.L());
    if (!(spec.n > thr + kIndexMargin)) {
        throw PreconditionError("convolution index n = " + detail::format_number(spec.n) +
                                " too small for " + g.name() + ": need n > " +
                                (spec.penalty == Penalty::Quadratic ? "2L = " : "L = ") +
                                detail::format_number(thr));
    }
}

double certified_radius(const Generator& g, const PenaltySpec& spec, double y, double z) {
    const double L = g.L();
    const double gap = spec.n - index_threshold(spec.penalty, L);
    if (spec.penalty == Penalty::Quadratic)
        return 1.1 * std::sqrt(2.0 * L * (1.0 + std::abs(y) + 2.0 * z * z) / gap);
    return 1.1 * 2.0 * L * (1.0 + std::abs(y) + std::abs(z)) / gap;
}

namespace {

// Objective to maximise; the convolution value is sign * max.
struct Objective {
    const Generator& g;
    double t, y, z, n, sign;
    bool quadratic;

    double operator()(double v) const {
        const double d = z - v;
        const double pen = quadratic ? d * d : std::abs(d);
        return sign * g(t, y, v) - n * pen;
    }
};

struct Best {
    double v;
    double value;
    void offer(double cand_v, double cand_value) {
        if (cand_value > value) {
            v = cand_v;
            value = cand_value;
        }
    }
};

}  // namespace

double convolution_value(const Generator& g, const PenaltySpec& spec, const OptimizerConfig& opt,
                         double t, double y, double z, double radius_scale) {
    const double sign = spec.direction == Direction::Sup ? 1.0 : -1.0;
    const Objective h{g, t, y, z, spec.n, sign, spec.penalty == Penalty::Quadratic};
    const double r = radius_scale * certified_radius(g, spec, y, z);
    const int P = opt.coarse_points;

    // v = z is always feasible, which pins sup >= f >= inf exactly.
    Best best{z, h(z)};
    const double lo = z - r;
    const double step = 2.0 * r / (P - 1);
    int k_best = -1;
    for (int k = 0; k < P; ++k) {
        const double v = lo + step * k;
        const double val = h(v);
        if (val > best.value) {
            best = {v, val};
            k_best = k;
        }
    }
    double a, b;
    if (k_best < 0) {
        a = z - step;
        b = z + step;
    } else {
        a = lo + step * std::max(k_best - 1, 0);
        b = lo + step * std::min(k_best + 1, P - 1);
    }

    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double hc = h(c), hd = h(d);
    best.offer(c, hc);
    best.offer(d, hd);
    for (int it = 0; it < opt.refine_iters; ++it) {
        if (b - a <= 1e-15 * (1.0 + std::abs(a))) break;
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
            best.offer(c, hc);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
            best.offer(d, hd);
        }
    }
    return sign * best.value;
}

Generator convolve(const Generator& g, const PenaltySpec& spec, const OptimizerConfig& opt) {
    check_penalty_spec(g, spec);
    opt.validate();
    auto fn = [g, spec, opt](double t, double y, double z) {
        return convolution_value(g, spec, opt, t, y, z);
    };
    const double L = spec.penalty == Penalty::Quadratic ? 2.0 * g.L() : g.L();
    const std::string name = std::string(to_string(spec.direction)) + "_" +
                             std::string(to_string(spec.penalty)) + "[n=" +
                             detail::format_number(spec.n) + "](" + g.name() + ")";
    return Generator(name, fn, g.growth_class(), L, spec.n);
}

// ---------------------------------------------------------------------------

namespace {

double lemma_growth_bound(Penalty p, double L, double y, double z) {
    return p == Penalty::Quadratic ? L * (1.0 + std::abs(y) + 2.0 * z * z)
                                   : L * (1.0 + std::abs(y) + std::abs(z));
}

}  // namespace

ValidationReport verify_lemma_bounds(const Generator& g, const PenaltySpec& spec,
                                     const OptimizerConfig& opt, const Box& domain,
                                     std::size_t samples, std::uint64_t seed) {
    const Generator fn = convolve(g, spec, opt);
    ValidationReport rep{Assumption::ConvolutionGrowth};
    for (const auto& p : sample_box(domain, samples, seed)) {
        const double v = fn(p.t, p.y, p.z);
        const double bound = lemma_growth_bound(spec.penalty, g.L(), p.y, p.z);
        rep.record(excess(std::abs(v), bound + opt.tolerance_at(v), bound), {p.t, p.y, p.z, {}, {}, spec.n});
    }
    return rep;
}

ValidationReport verify_monotone_in_n(const Generator& g, Direction direction, Penalty penalty,
                                      std::span<const double> n_list,
                                      std::span<const SamplePoint> points,
                                      const OptimizerConfig& opt) {
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw PreconditionError("verify_monotone_in_n: n_list must be ascending");
    std::vector<Generator> fns;
    for (double n : n_list) fns.push_back(convolve(g, {direction, penalty, n}, opt));

    ValidationReport rep{Assumption::ConvolutionMonotone};
    for (const auto& p : points) {
        double prev = 0.0;
        for (std::size_t i = 0; i < fns.size(); ++i) {
            const double cur = fns[i](p.t, p.y, p.z);
            if (i > 0) {
                // sup: cur <= prev; inf: cur >= prev
                const double lhs = direction == Direction::Sup ? cur : prev;
                const double rhs = direction == Direction::Sup ? prev : cur;
                const double slack = 2.0 * opt.tolerance_at(std::max(std::abs(cur), std::abs(prev)));
                rep.record(excess(lhs, rhs + slack, rhs), {p.t, p.y, p.z, {}, {}, n_list[i]});
            }
            prev = cur;
        }
    }
    return rep;
}

double convergence_rate_bound(const Generator& g, const PenaltySpec& spec, double y, double z,
                              double z_n) {
    if (!g.K()) throw PreconditionError("convergence_rate_bound: generator " + g.name() + " has no K");
    const double r = certified_radius(g, spec, y, z_n);
    const double R = std::max(std::abs(z), std::abs(z_n)) + r;
    const double rho = *g.K() * (1.0 + 2.0 * R);
    const double shift = rho * std::abs(z_n - z);
    if (spec.penalty == Penalty::Quadratic) return rho * rho / (4.0 * spec.n) + shift;
    return std::max(rho - spec.n, 0.0) * r + shift;
}

ConvergenceTrace verify_pointwise_convergence(const Generator& g, Direction direction,
                                              Penalty penalty, std::span<const double> n_list,
                                              double t, double y, double z,
                                              const std::function<double(double n)>& z_sequence,
                                              const OptimizerConfig& opt,
                                              std::optional<double> tail_tolerance) {
    if (n_list.empty()) throw PreconditionError("verify_pointwise_convergence: empty n_list");
    ConvergenceTrace tr{.report = ValidationReport{Assumption::ConvolutionConvergence}};
    const double target = g(t, y, z);
    for (double n : n_list) {
        const PenaltySpec spec{direction, penalty, n};
        const Generator fn = convolve(g, spec, opt);
        const double zn = z_sequence(n);
        const double gap = std::abs(fn(t, y, zn) - target);
        tr.n.push_back(n);
        tr.z_n.push_back(zn);
        tr.gaps.push_back(gap);
        if (g.K()) {
            const double bound = convergence_rate_bound(g, spec, y, z, zn);
            tr.rate_bounds.push_back(bound);
            tr.report.record(excess(gap, bound + 2.0 * opt.tolerance_at(target), bound),
                             {t, y, z, {}, zn, n});
        }
    }
    if (tail_tolerance) {
        tr.tail_tolerance = *tail_tolerance;
    } else if (!tr.rate_bounds.empty()) {
        tr.tail_tolerance = tr.rate_bounds.back();
    } else {
        throw PreconditionError("verify_pointwise_convergence: no tail tolerance and no K to derive one");
    }
    tr.report.record(excess(tr.gaps.back(), tr.tail_tolerance + 2.0 * opt.tolerance_at(target), tr.tail_tolerance),
                     {t, y, z, {}, tr.z_n.back(), tr.n.back()});
    return tr;
}

ValidationReport verify_local_lipschitz(const Generator& g, const PenaltySpec& spec,
                                        const OptimizerConfig& opt,
                                        std::span<const std::pair<SamplePoint, SamplePoint>> pairs) {
    if (spec.penalty == Penalty::Quadratic && spec.n < 2.0 * g.L() + 1.0)
        throw PreconditionError("verify_local_lipschitz: quadratic penalty tested only for n >= 2L+1");
    const Generator fn = convolve(g, spec, opt);
    ValidationReport rep{Assumption::ConvolutionLipschitz};
    for (const auto& [p1, p2] : pairs) {
        const double f1 = fn(p1.t, p1.y, p1.z);
        const double f2 = fn(p1.t, p2.y, p2.z);
        const double dz = std::abs(p1.z - p2.z);
        const double zfac = spec.penalty == Penalty::Quadratic
                                ? (1.0 + std::abs(p1.z) + std::abs(p2.z)) * dz
                                : dz;
        const double bound = g.L() * std::abs(p1.y - p2.y) + spec.n * zfac;
        const double slack = 2.0 * opt.tolerance_at(std::max(std::abs(f1), std::abs(f2)));
        rep.record(excess(std::abs(f1 - f2), bound + slack, std::max(std::abs(f1), std::abs(f2))),
                   {p1.t, p1.y, p1.z, p2.y, p2.z, spec.n});
    }
    return rep;
}

ValidationReport verify_ordering(const Generator& g, Penalty penalty, double n,
                                 const OptimizerConfig& opt, std::span<const SamplePoint> points) {
    const Generator up = convolve(g, {Direction::Sup, penalty, n}, opt);
    const Generator lo = convolve(g, {Direction::Inf, penalty, n}, opt);
    ValidationReport rep{Assumption::ConvolutionOrdering};
    for (const auto& p : points) {
        const double f = g(p.t, p.y, p.z);
        const double s = up(p.t, p.y, p.z);
        const double i = lo(p.t, p.y, p.z);
        const double slack = 2.0 * opt.tolerance_at(f);
        rep.record(std::max(excess(f, s + slack, f), excess(i, f + slack, f)), {p.t, p.y, p.z, {}, {}, n});
    }
    return rep;
}

}  // namespace bsdelab
