#pragma once

#include "wcorr/measure.hpp"
#include "wcorr/ot.hpp"

#include <string_view>

namespace wcorr {

enum class Direction {
    forward,        // conditional law of X2 given X1 against the law of X2
    backward,       // roles of the coordinates exchanged
    symmetric_max,  // larger of the two
};

std::string_view to_string(Direction d);

struct CorrelationValue {
    double value = 0.0;
    Direction direction = Direction::forward;
    double p = 1.0;
    Method method = Method::exact;
    double max_marginal_violation = 0.0;
    // Set when the raw ratio exceeded 1 by solver noise and was clamped.
    bool clamped = false;
};

/// (sum over first atoms x of pi_1(x) * W_p(pi_x, pi_2)^p)^(1/p).
double conditional_transport(const DiscreteCoupling& pi, double p, const SolverConfig& cfg = {});

/**
 * Wasserstein correlation coefficient of a finite coupling.
 *
 * forward = conditional_transport(pi, p) / mean_pairwise_distance(pi_2, p).
 * Throws DegenerateData when the relevant marginal is a single atom. A ratio
 * above 1 by at most 1e-6 is clamped (and flagged); anything larger is
 * reported as a SolverError.
 */
CorrelationValue wasserstein_correlation(const DiscreteCoupling& pi, double p = 1.0,
                                         const SolverConfig& cfg = {},
                                         Direction direction = Direction::forward);

}  // namespace wcorr
