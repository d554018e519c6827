#pragma once

#include "wcorr/measure.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wcorr {

enum class Method {
    exact,       // exact_1d for one-dimensional measures, exact_flow otherwise
    exact_1d,    // sorted quantile coupling; d = 1 only
    exact_flow,  // transportation simplex
    sinkhorn,    // log-domain entropic scaling, upward-biased cost
};

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct SolverConfig {
    Method method = Method::exact;
    double entropic_epsilon = 0.01;
    int sinkhorn_max_iters = 5000;
    // L1 violation of the row marginal after a column update.
    double sinkhorn_tolerance = 1e-9;
};

/// Dense rows x cols matrix of nonnegative transport costs.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Entry (i, j) = |x_i - y_j|^p for the Euclidean metric.
    static CostMatrix euclidean(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double max_entry() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

struct PlanEntry {
    std::size_t row;
    std::size_t col;
    double mass;
};

struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<PlanEntry> entries;
    double cost = 0.0;  // sum of mass * cost entry

    /// L1 distance of the plan's row and column sums to the given marginals
    /// (maximum of the two).
    double marginal_violation(std::span<const double> source,
                              std::span<const double> target) const;
};

/// Optimal plan for an arbitrary cost matrix by the transportation simplex.
/// Entering cells follow Dantzig's rule with lowest (i, j) tie-breaking and
/// switch to Bland's rule after a run of degenerate pivots.
TransportPlan solve_transport(std::span<const double> source, std::span<const double> target,
                              const CostMatrix& cost);

/// Monotone (quantile) coupling of two one-dimensional measures.
TransportPlan quantile_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

struct SinkhornResult {
    TransportPlan plan;
    double marginal_violation = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Entropic plan; never throws on non-convergence, the caller inspects
/// `converged` and `marginal_violation`.
SinkhornResult sinkhorn_plan(std::span<const double> source, std::span<const double> target,
                             const CostMatrix& cost, const SolverConfig& cfg);

struct TransportCost {
    double value = 0.0;               // W_p^p (the optimal or entropic plan cost)
    double marginal_violation = 0.0;  // zero for exact methods
    Method method = Method::exact;    // method actually used
};

/// W_p(mu, nu)^p and diagnostics.
TransportCost transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                             const SolverConfig& cfg);

/// p-Wasserstein distance with Euclidean ground metric.
double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   const SolverConfig& cfg = {});

/// (sum_ij w_i w_j |y_i - y_j|^p)^(1/p), diagonal terms included.
double mean_pairwise_distance(const DiscreteMeasure& nu, double p);

/**
 * Adapted (nested, bicausal) p-Wasserstein distance between two couplings.
 *
 * The inner layer solves W_p between every pair of conditional laws; the
 * outer layer transports the first marginals with cost
 * |x1 - y1|^p + W_p(pi_x1, pi~_y1)^p. The p-th root is taken at the end.
 */
double adapted_wasserstein(const DiscreteCoupling& pi, const DiscreteCoupling& other, double p,
                           const SolverConfig& cfg = {});

/// Plain p-Wasserstein distance between two couplings viewed as measures on
/// the product space, with cost |x1 - y1|^p + |x2 - y2|^p.
double coupling_wasserstein(const DiscreteCoupling& pi, const DiscreteCoupling& other, double p,
                            const SolverConfig& cfg = {});

}  // namespace wcorr
