#pragma once

// Reference computations used only by tests. They share no code path with
// the library beyond the measure containers.

#include "wcorr/measure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Minimum of sum_ij P_ij C_ij over all vertices of the transportation
/// polytope, found by enumerating every spanning tree of K_{m,n} and keeping
/// those whose (unique) tree flow is nonnegative. Dense cost, row-major.
inline double transport_by_vertices(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& cost) {
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    const std::size_t nodes = m + n;
    const std::size_t need = nodes - 1;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) edges.emplace_back(i, m + j);

    std::vector<std::size_t> parent(nodes);
    std::vector<std::size_t> chosen;
    double best = std::numeric_limits<double>::infinity();

    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };

    auto evaluate = [&] {
        // Peel leaves: a leaf's single edge carries its whole residual supply.
        std::vector<double> residual(nodes);
        for (std::size_t i = 0; i < m; ++i) residual[i] = a[i];
        for (std::size_t j = 0; j < n; ++j) residual[m + j] = b[j];
        std::vector<std::vector<std::size_t>> incident(nodes);
        for (std::size_t e : chosen) {
            incident[edges[e].first].push_back(e);
            incident[edges[e].second].push_back(e);
        }
        std::vector<std::size_t> degree(nodes);
        for (std::size_t v = 0; v < nodes; ++v) degree[v] = incident[v].size();
        std::vector<char> used(edges.size(), 0);
        double total = 0.0;
        for (std::size_t round = 0; round < need; ++round) {
            std::size_t leaf = nodes;
            for (std::size_t v = 0; v < nodes && leaf == nodes; ++v)
                if (degree[v] == 1) leaf = v;
            std::size_t edge = edges.size();
            for (std::size_t e : incident[leaf])
                if (!used[e]) edge = e;
            const double flow = residual[leaf];
            if (flow < -1e-12) return;
            used[edge] = 1;
            const std::size_t other = edges[edge].first == leaf ? edges[edge].second : edges[edge].first;
            residual[other] -= flow;
            residual[leaf] = 0.0;
            --degree[leaf];
            --degree[other];
            total += flow * cost[edges[edge].first * n + (edges[edge].second - m)];
        }
        best = std::min(best, total);
    };

    // Backtracking over forests; parent arrays are copied for undo.
    auto recurse = [&](auto&& self, std::size_t next) -> void {
        if (chosen.size() == need) {
            evaluate();
            return;
        }
        if (edges.size() - next < need - chosen.size()) return;
        const std::size_t ra = find(edges[next].first);
        const std::size_t rb = find(edges[next].second);
        if (ra != rb) {
            const auto saved = parent;
            parent[ra] = rb;
            chosen.push_back(next);
            self(self, next + 1);
            chosen.pop_back();
            parent = saved;
        }
        self(self, next + 1);
    };
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    recurse(recurse, 0);
    return best;
}

/// Minimum over permutations of (1/n) sum_i C(i, sigma(i)); for uniform
/// weights on equal numbers of atoms these are the polytope's vertices.
inline double assignment_by_permutations(std::size_t n, const std::vector<double>& cost) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += cost[i * n + perm[i]];
        best = std::min(best, s / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// W_1 on the line as the integral of |F_mu - F_nu|.
inline double w1_by_cdf(const wcorr::DiscreteMeasure& mu, const wcorr::DiscreteMeasure& nu) {
    std::vector<std::pair<double, double>> jumps;  // (location, signed mass)
    for (std::size_t i = 0; i < mu.size(); ++i) jumps.emplace_back(mu.atom(i)[0], mu.weight(i));
    for (std::size_t j = 0; j < nu.size(); ++j) jumps.emplace_back(nu.atom(j)[0], -nu.weight(j));
    std::sort(jumps.begin(), jumps.end());
    double diff = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < jumps.size(); ++k) {
        diff += jumps[k].second;
        total += std::abs(diff) * (jumps[k + 1].first - jumps[k].first);
    }
    return total;
}

/// Cost of pairing sorted atoms by quantile level, by explicit integration
/// over u in (0,1) of |F^-1(u) - G^-1(u)|^p.
inline double wp_pow_by_quantiles(const wcorr::DiscreteMeasure& mu, const wcorr::DiscreteMeasure& nu,
                                  double p) {
    std::vector<double> levels{0.0};
    double c = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) levels.push_back(c += mu.weight(i));
    c = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) levels.push_back(c += nu.weight(j));
    std::sort(levels.begin(), levels.end());
    auto quantile = [](const wcorr::DiscreteMeasure& m, double u) {
        double cum = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            cum += m.weight(i);
            if (u < cum) return m.atom(i)[0];
        }
        return m.atom(m.size() - 1)[0];
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const double width = levels[k + 1] - levels[k];
        if (width <= 0.0) continue;
        const double mid = 0.5 * (levels[k] + levels[k + 1]);
        total += width * std::pow(std::abs(quantile(mu, mid) - quantile(nu, mid)), p);
    }
    return total;
}

/// sum_{G,H} |n(G,H)/N - n(G,.) n(.,H) / N^2| by direct double summation.
inline double t_tilde_dense(std::size_t rows, std::size_t cols, const std::vector<std::size_t>& counts) {
    double n = 0.0;
    std::vector<double> r(rows, 0.0);
    std::vector<double> c(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = static_cast<double>(counts[i * cols + j]);
            r[i] += v;
            c[j] += v;
            n += v;
        }
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            s += std::abs(static_cast<double>(counts[i * cols + j]) / n - (r[i] / n) * (c[j] / n));
    return s;
}

/// xi_N for data without ties: 1 - 3 sum |r_(i+1) - r_(i)| / (N^2 - 1).
inline double xi_no_ties(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += y[j] <= y[i] ? 1.0 : 0.0;
        rank[i] = r;
    }
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) s += std::abs(rank[order[k + 1]] - rank[order[k]]);
    const double nd = static_cast<double>(n);
    return 1.0 - 3.0 * s / (nd * nd - 1.0);
}

/// Squared distance covariance through the three-term expansion
/// S1 + S2 - 2 S3 (no double centering).
inline double dcov2_expansion(const std::vector<double>& x, std::size_t dx, const std::vector<double>& y,
                              std::size_t dy) {
    const std::size_t n = x.size() / dx;
    auto dist = [](const std::vector<double>& v, std::size_t d, std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += (v[i * d + k] - v[j * d + k]) * (v[i * d + k] - v[j * d + k]);
        return std::sqrt(s);
    };
    const double nd = static_cast<double>(n);
    double s1 = 0.0;
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            s1 += dist(x, dx, i, j) * dist(y, dy, i, j);
            ma += dist(x, dx, i, j);
            mb += dist(y, dy, i, j);
        }
    s1 /= nd * nd;
    const double s2 = (ma / (nd * nd)) * (mb / (nd * nd));
    double s3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ra = 0.0;
        double rb = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ra += dist(x, dx, i, j);
            rb += dist(y, dy, i, j);
        }
        s3 += ra * rb;
    }
    s3 /= nd * nd * nd;
    return s1 + s2 - 2.0 * s3;
}

inline double dcor_expansion(const std::vector<double>& x, std::size_t dx, const std::vector<double>& y,
                             std::size_t dy) {
    const double vxy = dcov2_expansion(x, dx, y, dy);
    const double vxx = dcov2_expansion(x, dx, x, dx);
    const double vyy = dcov2_expansion(y, dy, y, dy);
    if (vxx <= 0.0 || vyy <= 0.0) return 0.0;
    return std::sqrt(std::max(0.0, vxy) / std::sqrt(vxx * vyy));
}

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

/// W_2 between N(m1, A) and N(m2, B):
/// |m1 - m2|^2 + tr(A + B - 2 (A^(1/2) B A^(1/2))^(1/2)).
inline double gaussian_w2(const Eigen::VectorXd& m1, const Eigen::MatrixXd& a, const Eigen::VectorXd& m2,
                          const Eigen::MatrixXd& b) {
    const Eigen::MatrixXd ra = psd_sqrt(a);
    const Eigen::MatrixXd cross = psd_sqrt(ra * b * ra);
    const double v = (m1 - m2).squaredNorm() + (a + b - 2.0 * cross).trace();
    return std::sqrt(std::max(v, 0.0));
}

// ------------------------------------------------------------ random instances

inline wcorr::DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t size, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> coords(size * dim);
    for (auto& c : coords) c = u(rng);
    std::vector<double> w(size);
    double total = 0.0;
    for (auto& x : w) total += x = 0.05 + u(rng);
    for (auto& x : w) x /= total;
    return wcorr::DiscreteMeasure(dim, std::move(coords), std::move(w));
}

/// Coupling on `pairs` random pairs whose coordinates are drawn from small
/// atom pools, so conditionals typically have several atoms.
inline wcorr::DiscreteCoupling random_coupling(std::mt19937_64& rng, std::size_t pool1, std::size_t pool2,
                                               std::size_t pairs, std::size_t d1 = 1, std::size_t d2 = 1) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> atoms1(pool1 * d1);
    std::vector<double> atoms2(pool2 * d2);
    for (auto& c : atoms1) c = u(rng);
    for (auto& c : atoms2) c = u(rng);
    std::uniform_int_distribution<std::size_t> pick1(0, pool1 - 1);
    std::uniform_int_distribution<std::size_t> pick2(0, pool2 - 1);
    std::vector<double> first;
    std::vector<double> second;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t i = pick1(rng);
        const std::size_t j = pick2(rng);
        first.insert(first.end(), atoms1.begin() + i * d1, atoms1.begin() + (i + 1) * d1);
        second.insert(second.end(), atoms2.begin() + j * d2, atoms2.begin() + (j + 1) * d2);
        w.push_back(0.05 + u(rng));
        total += w.back();
    }
    for (auto& x : w) x /= total;
    return wcorr::DiscreteCoupling(d1, d2, std::move(first), std::move(second), std::move(w));
}

}  // namespace oracle
