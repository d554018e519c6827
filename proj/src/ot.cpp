#include "wcorr/ot.hpp"

#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace wcorr {

namespace {

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

double root_p(double v, double p) {
    if (p == 1.0) return v;
    if (p == 2.0) return std::sqrt(v);
    return std::pow(v, 1.0 / p);
}

void check_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("Wasserstein exponent must be a finite real >= 1");
    }
}

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Transportation simplex on the spanning-tree basis of the bipartite
// row/column graph. Nodes 0..m-1 are rows, m..m+n-1 are columns.
class TransportationSimplex {
public:
    TransportationSimplex(std::span<const double> source, std::span<const double> target,
                          const CostMatrix& cost)
        : m_(source.size()), n_(target.size()), source_(source), target_(target), cost_(cost) {}

    TransportPlan solve() {
        initial_basis();
        const double tol = 1e-11 * (1.0 + cost_.max_entry());
        const std::size_t max_pivots = 50 * m_ * n_ + 1000;
        const std::size_t degenerate_limit = 2 * (m_ + n_);
        std::size_t degenerate_run = 0;
        bool bland = false;

        for (std::size_t pivot = 0;; ++pivot) {
            if (pivot > max_pivots) {
                throw SolverError("transportation simplex did not terminate", 0.0);
            }
            build_tree();
            std::size_t ei = 0;
            std::size_t ej = 0;
            if (!select_entering(tol, bland, ei, ej)) break;
            const double theta = pivot_on(ei, ej);
            if (theta == 0.0) {
                if (++degenerate_run > degenerate_limit) bland = true;
            } else {
                degenerate_run = 0;
            }
        }
        return extract();
    }

private:
    struct Cell {
        std::size_t i;
        std::size_t j;
        double flow;
    };

    void initial_basis() {
        // North-west corner rule; always yields m + n - 1 cells forming a tree.
        is_basic_.assign(m_ * n_, 0);
        basis_.clear();
        std::size_t i = 0;
        std::size_t j = 0;
        double ra = source_[0];
        double rb = target_[0];
        while (true) {
            const double x = std::max(0.0, std::min(ra, rb));
            add_basic(i, j, x);
            if (i + 1 == m_ && j + 1 == n_) break;
            ra -= x;
            rb -= x;
            const bool row_done = ra <= rb;
            if ((row_done && i + 1 < m_) || j + 1 == n_) {
                ++i;
                ra = source_[i];
            } else {
                ++j;
                rb = target_[j];
            }
        }
    }

    void add_basic(std::size_t i, std::size_t j, double flow) {
        basis_.push_back({i, j, flow});
        is_basic_[i * n_ + j] = 1;
    }

    void build_tree() {
        const std::size_t nodes = m_ + n_;
        adjacency_.assign(nodes, {});
        for (std::size_t e = 0; e < basis_.size(); ++e) {
            adjacency_[basis_[e].i].push_back(e);
            adjacency_[m_ + basis_[e].j].push_back(e);
        }
        parent_.assign(nodes, nodes);
        parent_edge_.assign(nodes, basis_.size());
        depth_.assign(nodes, 0);
        potential_.assign(nodes, 0.0);
        visited_.assign(nodes, 0);

        queue_.clear();
        queue_.push_back(0);
        visited_[0] = 1;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const std::size_t node = queue_[head];
            for (std::size_t e : adjacency_[node]) {
                const Cell& c = basis_[e];
                const std::size_t other = node < m_ ? m_ + c.j : c.i;
                if (visited_[other]) continue;
                visited_[other] = 1;
                parent_[other] = node;
                parent_edge_[other] = e;
                depth_[other] = depth_[node] + 1;
                // u_i + v_j = c_ij on basic cells
                potential_[other] = cost_(c.i, c.j) - potential_[node];
                queue_.push_back(other);
            }
        }
        if (queue_.size() != nodes) {
            throw SolverError("transportation simplex basis is not a spanning tree", 0.0);
        }
    }

    bool select_entering(double tol, bool bland, std::size_t& ei, std::size_t& ej) const {
        double best = -tol;
        bool found = false;
        for (std::size_t i = 0; i < m_; ++i) {
            const double u = potential_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[i * n_ + j]) continue;
                const double reduced = cost_(i, j) - u - potential_[m_ + j];
                if (reduced < best) {
                    ei = i;
                    ej = j;
                    found = true;
                    if (bland) return true;
                    best = reduced;
                }
            }
        }
        return found;
    }

    // Returns the step length theta.
    double pivot_on(std::size_t ei, std::size_t ej) {
        path_a_.clear();
        path_b_.clear();
        std::size_t a = m_ + ej;
        std::size_t b = ei;
        while (depth_[a] > depth_[b]) {
            path_a_.push_back(parent_edge_[a]);
            a = parent_[a];
        }
        while (depth_[b] > depth_[a]) {
            path_b_.push_back(parent_edge_[b]);
            b = parent_[b];
        }
        while (a != b) {
            path_a_.push_back(parent_edge_[a]);
            a = parent_[a];
            path_b_.push_back(parent_edge_[b]);
            b = parent_[b];
        }
        // Cycle after the entering cell: column ej -> ... -> row ei, signs
        // alternate starting with a decrease.
        cycle_.assign(path_a_.begin(), path_a_.end());
        cycle_.insert(cycle_.end(), path_b_.rbegin(), path_b_.rend());

        std::size_t leave = basis_.size();
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cycle_.size(); k += 2) {
            const Cell& c = basis_[cycle_[k]];
            // Bland: among tied candidates the lowest (i, j) leaves.
            if (leave == basis_.size() || c.flow < theta ||
                (c.flow == theta && std::pair(c.i, c.j) < std::pair(basis_[leave].i, basis_[leave].j))) {
                theta = c.flow;
                leave = cycle_[k];
            }
        }
        for (std::size_t k = 0; k < cycle_.size(); ++k) {
            Cell& c = basis_[cycle_[k]];
            if (k % 2 == 0) {
                c.flow = std::max(0.0, c.flow - theta);
            } else {
                c.flow += theta;
            }
        }
        is_basic_[basis_[leave].i * n_ + basis_[leave].j] = 0;
        basis_[leave] = {ei, ej, theta};
        is_basic_[ei * n_ + ej] = 1;
        return theta;
    }

    TransportPlan extract() const {
        TransportPlan plan;
        plan.rows = m_;
        plan.cols = n_;
        for (const Cell& c : basis_) {
            if (c.flow > 0.0) plan.entries.push_back({c.i, c.j, c.flow});
        }
        std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& x, const PlanEntry& y) {
            return x.row != y.row ? x.row < y.row : x.col < y.col;
        });
        for (const auto& e : plan.entries) plan.cost += e.mass * cost_(e.row, e.col);
        return plan;
    }

    std::size_t m_;
    std::size_t n_;
    std::span<const double> source_;
    std::span<const double> target_;
    const CostMatrix& cost_;

    std::vector<Cell> basis_;
    std::vector<char> is_basic_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> parent_edge_;
    std::vector<std::size_t> depth_;
    std::vector<double> potential_;
    std::vector<char> visited_;
    std::vector<std::size_t> queue_;
    std::vector<std::size_t> path_a_;
    std::vector<std::size_t> path_b_;
    std::vector<std::size_t> cycle_;
};

void check_marginals(std::span<const double> source, std::span<const double> target,
                     const CostMatrix& cost) {
    if (source.empty() || target.empty()) {
        throw InvalidArgument("transport between empty marginals");
    }
    if (cost.rows() != source.size() || cost.cols() != target.size()) {
        throw InvalidArgument("cost matrix shape does not match the marginals");
    }
    for (double w : source) {
        if (!(w >= 0.0)) throw InvalidArgument("negative source weight");
    }
    for (double w : target) {
        if (!(w >= 0.0)) throw InvalidArgument("negative target weight");
    }
    if (std::abs(sum_of(source) - sum_of(target)) > 1e-9) {
        throw InvalidArgument("source and target carry different total mass");
    }
}

double log_sum_exp(const std::vector<double>& x) {
    const double c = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(c)) return c;
    double s = 0.0;
    for (double v : x) s += std::exp(v - c);
    return c + std::log(s);
}

// Exact W_p^p when one side is a single atom: the only coupling is the product.
double dirac_cost(std::span<const double> point, const DiscreteMeasure& nu, double p) {
    double s = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        s += nu.weight(j) * pow_p(euclidean(point, nu.atom(j)), p);
    }
    return s;
}

TransportPlan solve_outer(std::span<const double> source, std::span<const double> target,
                          const CostMatrix& cost, const SolverConfig& cfg) {
    if (cfg.method == Method::sinkhorn) {
        auto result = sinkhorn_plan(source, target, cost, cfg);
        if (!result.converged) {
            throw SolverError("Sinkhorn did not converge (marginal violation " +
                                  std::to_string(result.marginal_violation) + ")",
                              result.marginal_violation);
        }
        return std::move(result.plan);
    }
    return solve_transport(source, target, cost);
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::exact_1d: return "exact_1d";
        case Method::exact_flow: return "exact_flow";
        case Method::sinkhorn: return "sinkhorn";
    }
    return "exact";
}

Method method_from_string(std::string_view name) {
    if (name == "exact") return Method::exact;
    if (name == "exact_1d") return Method::exact_1d;
    if (name == "exact_flow") return Method::exact_flow;
    if (name == "sinkhorn") return Method::sinkhorn;
    throw InvalidArgument("unknown solver method '" + std::string(name) + "'");
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw InvalidArgument("cost matrix has the wrong size");
    for (double c : data_) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw InvalidArgument("cost entries must be finite and nonnegative");
        }
    }
}

CostMatrix CostMatrix::euclidean(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    if (mu.dim() != nu.dim()) throw InvalidArgument("measures live in different dimensions");
    std::vector<double> data(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            data[i * nu.size() + j] = pow_p(wcorr::euclidean(mu.atom(i), nu.atom(j)), p);
        }
    }
    return CostMatrix(mu.size(), nu.size(), std::move(data));
}

double CostMatrix::max_entry() const {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

double TransportPlan::marginal_violation(std::span<const double> source,
                                         std::span<const double> target) const {
    std::vector<double> row_sum(rows, 0.0);
    std::vector<double> col_sum(cols, 0.0);
    for (const auto& e : entries) {
        row_sum[e.row] += e.mass;
        col_sum[e.col] += e.mass;
    }
    double rv = 0.0;
    double cv = 0.0;
    for (std::size_t i = 0; i < rows; ++i) rv += std::abs(row_sum[i] - source[i]);
    for (std::size_t j = 0; j < cols; ++j) cv += std::abs(col_sum[j] - target[j]);
    return std::max(rv, cv);
}

TransportPlan solve_transport(std::span<const double> source, std::span<const double> target,
                              const CostMatrix& cost) {
    check_marginals(source, target, cost);
    return TransportationSimplex(source, target, cost).solve();
}

TransportPlan quantile_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    if (mu.dim() != 1 || nu.dim() != 1) {
        throw InvalidArgument("quantile coupling needs one-dimensional measures");
    }
    check_exponent(p);
    TransportPlan plan;
    plan.rows = mu.size();
    plan.cols = nu.size();
    std::size_t i = 0;
    std::size_t j = 0;
    double ra = mu.weight(0);
    double rb = nu.weight(0);
    while (i < mu.size() && j < nu.size()) {
        const double x = std::min(ra, rb);
        if (x > 0.0) {
            plan.entries.push_back({i, j, x});
            plan.cost += x * pow_p(std::abs(mu.atom(i)[0] - nu.atom(j)[0]), p);
        }
        ra -= x;
        rb -= x;
        if (ra <= 0.0 && ++i < mu.size()) ra = mu.weight(i);
        if (rb <= 0.0 && ++j < nu.size()) rb = nu.weight(j);
    }
    return plan;
}

SinkhornResult sinkhorn_plan(std::span<const double> source, std::span<const double> target,
                             const CostMatrix& cost, const SolverConfig& cfg) {
    check_marginals(source, target, cost);
    if (!(cfg.entropic_epsilon > 0.0)) {
        throw InvalidArgument("entropic epsilon must be positive");
    }
    const std::size_t m = source.size();
    const std::size_t n = target.size();
    const double eps = cfg.entropic_epsilon;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    std::vector<double> log_a(m);
    std::vector<double> log_b(n);
    for (std::size_t i = 0; i < m; ++i) log_a[i] = source[i] > 0.0 ? std::log(source[i]) : kNegInf;
    for (std::size_t j = 0; j < n; ++j) log_b[j] = target[j] > 0.0 ? std::log(target[j]) : kNegInf;

    std::vector<double> f(m, 0.0);
    std::vector<double> g(n, 0.0);
    std::vector<double> f_next(m, 0.0);
    std::vector<double> row_buf(n);
    std::vector<double> col_buf(m);

    auto update_f = [&](std::vector<double>& out) {
        for (std::size_t i = 0; i < m; ++i) {
            if (source[i] <= 0.0) {
                out[i] = kNegInf;
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) row_buf[j] = (g[j] - cost(i, j)) / eps;
            out[i] = eps * log_a[i] - eps * log_sum_exp(row_buf);
        }
    };
    auto update_g = [&]() {
        for (std::size_t j = 0; j < n; ++j) {
            if (target[j] <= 0.0) {
                g[j] = kNegInf;
                continue;
            }
            for (std::size_t i = 0; i < m; ++i) col_buf[i] = (f[i] - cost(i, j)) / eps;
            g[j] = eps * log_b[j] - eps * log_sum_exp(col_buf);
        }
    };

    SinkhornResult result;
    update_f(f);
    update_g();
    result.marginal_violation = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.sinkhorn_max_iters; ++it) {
        result.iterations = it;
        // After a g-update the columns are exact and row i sums to
        // a_i * exp((f_i - f_next_i) / eps).
        update_f(f_next);
        double violation = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (source[i] > 0.0) violation += source[i] * std::abs(std::expm1((f[i] - f_next[i]) / eps));
        }
        result.marginal_violation = violation;
        if (violation <= cfg.sinkhorn_tolerance) {
            result.converged = true;
            break;
        }
        f.swap(f_next);
        update_g();
    }

    TransportPlan& plan = result.plan;
    plan.rows = m;
    plan.cols = n;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double mass = std::exp((f[i] + g[j] - cost(i, j)) / eps);
            if (mass > 0.0) {
                plan.entries.push_back({i, j, mass});
                plan.cost += mass * cost(i, j);
            }
        }
    }
    return result;
}

TransportCost transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                             const SolverConfig& cfg) {
    if (mu.dim() != nu.dim()) throw InvalidArgument("measures live in different dimensions");
    check_exponent(p);
    Method method = cfg.method;
    if (method == Method::exact) method = mu.dim() == 1 ? Method::exact_1d : Method::exact_flow;
    if (method == Method::exact_1d && mu.dim() != 1) {
        throw InvalidArgument("exact_1d requires one-dimensional measures");
    }

    TransportCost out;
    out.method = method;
    if (mu.is_dirac()) {
        out.value = dirac_cost(mu.atom(0), nu, p);
        return out;
    }
    if (nu.is_dirac()) {
        out.value = dirac_cost(nu.atom(0), mu, p);
        return out;
    }
    switch (method) {
        case Method::exact_1d:
            out.value = quantile_plan(mu, nu, p).cost;
            break;
        case Method::exact_flow:
            out.value = solve_transport(mu.weights(), nu.weights(), CostMatrix::euclidean(mu, nu, p)).cost;
            break;
        case Method::sinkhorn: {
            auto result = sinkhorn_plan(mu.weights(), nu.weights(), CostMatrix::euclidean(mu, nu, p), cfg);
            if (!result.converged) {
                throw SolverError("Sinkhorn did not converge within " +
                                      std::to_string(cfg.sinkhorn_max_iters) +
                                      " iterations (marginal violation " +
                                      std::to_string(result.marginal_violation) + ")",
                                  result.marginal_violation);
            }
            out.value = result.plan.cost;
            out.marginal_violation = result.marginal_violation;
            break;
        }
        case Method::exact:
            break;
    }
    return out;
}

double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                   const SolverConfig& cfg) {
    return root_p(transport_cost(mu, nu, p, cfg).value, p);
}

double mean_pairwise_distance(const DiscreteMeasure& nu, double p) {
    check_exponent(p);
    if (nu.dim() == 1 && p == 1.0) {
        // Atoms are sorted: sum_{i<j} w_i w_j (y_j - y_i), doubled.
        double mass_below = 0.0;
        double moment_below = 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            const double y = nu.atom(i)[0];
            s += nu.weight(i) * (y * mass_below - moment_below);
            mass_below += nu.weight(i);
            moment_below += nu.weight(i) * y;
        }
        return 2.0 * s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nu.size(); ++j) {
            row += nu.weight(j) * pow_p(euclidean(nu.atom(i), nu.atom(j)), p);
        }
        s += nu.weight(i) * row;
    }
    return root_p(s, p);
}

double adapted_wasserstein(const DiscreteCoupling& pi, const DiscreteCoupling& other, double p,
                           const SolverConfig& cfg) {
    if (pi.dim1() != other.dim1() || pi.dim2() != other.dim2()) {
        throw InvalidArgument("couplings live in different dimensions");
    }
    check_exponent(p);
    const auto& mu = pi.first_marginal();
    const auto& mu2 = other.first_marginal();
    std::vector<double> cost(mu.size() * mu2.size());
    for (std::size_t a = 0; a < mu.size(); ++a) {
        for (std::size_t b = 0; b < mu2.size(); ++b) {
            const double inner = transport_cost(pi.conditional(a), other.conditional(b), p, cfg).value;
            cost[a * mu2.size() + b] = pow_p(euclidean(mu.atom(a), mu2.atom(b)), p) + inner;
        }
    }
    const CostMatrix outer(mu.size(), mu2.size(), std::move(cost));
    return root_p(solve_outer(mu.weights(), mu2.weights(), outer, cfg).cost, p);
}

double coupling_wasserstein(const DiscreteCoupling& pi, const DiscreteCoupling& other, double p,
                            const SolverConfig& cfg) {
    if (pi.dim1() != other.dim1() || pi.dim2() != other.dim2()) {
        throw InvalidArgument("couplings live in different dimensions");
    }
    check_exponent(p);
    std::vector<double> cost(pi.size() * other.size());
    for (std::size_t a = 0; a < pi.size(); ++a) {
        for (std::size_t b = 0; b < other.size(); ++b) {
            cost[a * other.size() + b] = pow_p(euclidean(pi.first(a), other.first(b)), p) +
                                         pow_p(euclidean(pi.second(a), other.second(b)), p);
        }
    }
    const CostMatrix matrix(pi.size(), other.size(), std::move(cost));
    return root_p(solve_outer(pi.weights(), other.weights(), matrix, cfg).cost, p);
}

}  // namespace wcorr
