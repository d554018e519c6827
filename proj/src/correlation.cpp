#include "wcorr/correlation.hpp"

#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wcorr {

namespace {

constexpr double kClampSlack = 1e-6;

// Upper bound on |y - z|^p over the atoms of both measures (bounding-box diagonal).
double cost_scale(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
    double sq = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        double lo = a.atom(0)[k];
        double hi = lo;
        for (const auto* m : {&a, &b})
            for (std::size_t i = 0; i < m->size(); ++i) {
                lo = std::min(lo, m->atom(i)[k]);
                hi = std::max(hi, m->atom(i)[k]);
            }
        sq += (hi - lo) * (hi - lo);
    }
    return std::pow(std::sqrt(sq), p);
}

struct Numerator {
    double value;
    double violation;
    Method method;
};

Numerator numerator(const DiscreteCoupling& pi, double p, const SolverConfig& cfg) {
    const auto& mu = pi.first_marginal();
    const auto& nu = pi.second_marginal();
    Numerator out{0.0, 0.0, cfg.method};
    for (std::size_t a = 0; a < mu.size(); ++a) {
        const auto& cond = pi.conditional(a);
        const auto cost = transport_cost(cond, nu, p, cfg);
        // Conditional weights carry rounding from the division by mu(x); a cost
        // at that level is zero, and leaving it would survive the p-th root.
        const double noise = 8.0 * static_cast<double>(cond.size() + nu.size()) *
                             std::numeric_limits<double>::epsilon() * cost_scale(cond, nu, p);
        out.value += cost.value <= noise ? 0.0 : mu.weight(a) * cost.value;
        out.violation = std::max(out.violation, cost.marginal_violation);
        out.method = cost.method;
    }
    out.value = p == 1.0 ? out.value : std::pow(out.value, 1.0 / p);
    return out;
}

CorrelationValue one_direction(const DiscreteCoupling& pi, double p, const SolverConfig& cfg,
                               Direction direction) {
    const auto& nu = pi.second_marginal();
    if (nu.is_dirac()) {
        throw DegenerateData(std::string(direction == Direction::forward ? "second" : "first") +
                             " marginal is a single atom; the " +
                             std::string(to_string(direction)) + " coefficient is undefined");
    }
    const double denominator = mean_pairwise_distance(nu, p);
    const Numerator num = numerator(pi, p, cfg);

    CorrelationValue out;
    out.direction = direction;
    out.p = p;
    out.method = num.method;
    out.max_marginal_violation = num.violation;
    out.value = num.value / denominator;
    if (out.value > 1.0) {
        if (out.value > 1.0 + kClampSlack) {
            throw SolverError("correlation ratio " + std::to_string(out.value) +
                                  " exceeds 1 beyond solver tolerance",
                              num.violation);
        }
        out.value = 1.0;
        out.clamped = true;
    }
    return out;
}

}  // namespace

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::forward: return "forward";
        case Direction::backward: return "backward";
        case Direction::symmetric_max: return "symmetric_max";
    }
    return "forward";
}

double conditional_transport(const DiscreteCoupling& pi, double p, const SolverConfig& cfg) {
    return numerator(pi, p, cfg).value;
}

CorrelationValue wasserstein_correlation(const DiscreteCoupling& pi, double p,
                                         const SolverConfig& cfg, Direction direction) {
    switch (direction) {
        case Direction::forward:
            return one_direction(pi, p, cfg, Direction::forward);
        case Direction::backward:
            return one_direction(pi.swapped(), p, cfg, Direction::backward);
        case Direction::symmetric_max: {
            const auto fwd = one_direction(pi, p, cfg, Direction::forward);
            const auto bwd = one_direction(pi.swapped(), p, cfg, Direction::backward);
            CorrelationValue out = fwd.value >= bwd.value ? fwd : bwd;
            out.direction = Direction::symmetric_max;
            out.max_marginal_violation = std::max(fwd.max_marginal_violation, bwd.max_marginal_violation);
            out.clamped = fwd.clamped || bwd.clamped;
            return out;
        }
    }
    throw InvalidArgument("unknown direction");
}

}  // namespace wcorr
