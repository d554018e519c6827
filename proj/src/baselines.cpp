#include "wcorr/baselines.hpp"

#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace wcorr {

namespace {

void check_paired(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
    if (x.size() != y.size()) throw InvalidArgument("paired samples must have equal length");
    if (x.size() < min_n) {
        throw InvalidArgument("need at least " + std::to_string(min_n) + " observations");
    }
}

void check_scalar(const SampleSet& samples) {
    if (samples.dim1() != 1 || samples.dim2() != 1) {
        throw InvalidArgument("this coefficient needs one-dimensional coordinates");
    }
}

void check_line_coupling(const DiscreteCoupling& pi) {
    if (pi.dim1() != 1 || pi.dim2() != 1) {
        throw InvalidArgument("this coefficient needs a coupling on R x R");
    }
}

// Double-centered Euclidean distance matrix of N points of dimension dim.
std::vector<double> centered_distances(const std::vector<double>& coords, std::size_t dim,
                                       std::size_t n) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> xi(coords.data() + i * dim, dim);
        a[i * n + i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean(xi, std::span<const double>(coords.data() + j * dim, dim));
            a[i * n + j] = d;
            a[j * n + i] = d;
        }
    }
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[i * n + j];
        row_mean[i] = s / static_cast<double>(n);
        grand += s;
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    // Symmetric, so column means equal row means.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] += grand - row_mean[i] - row_mean[j];
        }
    }
    return a;
}

double frobenius_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    check_paired(x, y, 2);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateData("zero variance; correlation undefined");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const SampleSet& samples) {
    check_scalar(samples);
    return pearson(samples.first_coords(), samples.second_coords());
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_paired(x, y, 2);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double spearman(const SampleSet& samples) {
    check_scalar(samples);
    return spearman(samples.first_coords(), samples.second_coords());
}

double chatterjee_xi(std::span<const double> x, std::span<const double> y, std::uint64_t seed) {
    check_paired(x, y, 2);
    const std::size_t n = x.size();

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> tie_key(n);
    for (auto& k : tie_key) k = rng();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (x[i] != x[j]) return x[i] < x[j];
        return tie_key[i] < tie_key[j];
    });

    // r = #{y_j <= y}, l = #{y_j >= y}
    std::vector<double> sorted_y(y.begin(), y.end());
    std::sort(sorted_y.begin(), sorted_y.end());
    std::vector<double> r(n);
    std::vector<double> l(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = y[i];
        r[i] = static_cast<double>(std::upper_bound(sorted_y.begin(), sorted_y.end(), v) - sorted_y.begin());
        l[i] = static_cast<double>(sorted_y.end() - std::lower_bound(sorted_y.begin(), sorted_y.end(), v));
    }
    double jumps = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) jumps += std::abs(r[order[k + 1]] - r[order[k]]);
    double spread = 0.0;
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) spread += l[i] * (nd - l[i]);
    if (spread == 0.0) return 0.0;
    return 1.0 - nd * jumps / (2.0 * spread);
}

double chatterjee_xi(const SampleSet& samples, std::uint64_t seed) {
    check_scalar(samples);
    return chatterjee_xi(samples.first_coords(), samples.second_coords(), seed);
}

double tc_population(const DiscreteCoupling& pi) {
    check_line_coupling(pi);
    const auto& nu = pi.second_marginal();
    const std::size_t n = nu.size();
    // survival[k] = nu[y_k, inf)
    std::vector<double> survival(n);
    double tail = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        tail += nu.weight(k);
        survival[k] = std::min(tail, 1.0);
    }
    double denominator = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        denominator += nu.weight(k) * survival[k] * (1.0 - survival[k]);
    }
    if (denominator <= 0.0) throw DegenerateData("second marginal is a single atom");

    const auto& mu = pi.first_marginal();
    double numerator = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        const auto& cond = pi.conditional(a);
        // Conditional atoms are a sorted subset of the atoms of nu.
        std::size_t c = cond.size();
        double cond_tail = 0.0;
        double inner = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            while (c > 0 && cond.atom(c - 1)[0] >= nu.atom(k)[0]) {
                --c;
                cond_tail += cond.weight(c);
            }
            const double diff = std::min(cond_tail, 1.0) - survival[k];
            inner += nu.weight(k) * diff * diff;
        }
        numerator += mu.weight(a) * inner;
    }
    return numerator / denominator;
}

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double sup_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double norm_coefficient(const DiscreteCoupling& pi, const Norm& norm) {
    std::vector<double> diff(pi.dim2());
    auto spread = [&](const DiscreteMeasure& m) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < m.size(); ++j) {
                for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = m.atom(i)[k] - m.atom(j)[k];
                s += m.weight(i) * m.weight(j) * norm(diff);
            }
        }
        return s;
    };
    const double denominator = spread(pi.second_marginal());
    if (denominator <= 0.0) throw DegenerateData("second marginal is a single atom");
    const auto& mu = pi.first_marginal();
    double numerator = 0.0;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        numerator += mu.weight(a) * spread(pi.conditional(a));
    }
    return 1.0 - numerator / denominator;
}

double dgs_coefficient(const DiscreteCoupling& pi) { return norm_coefficient(pi, l2_norm); }

double distance_correlation(const SampleSet& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw InvalidArgument("distance correlation needs at least two observations");
    const auto a = centered_distances(samples.first_coords(), samples.dim1(), n);
    const auto b = centered_distances(samples.second_coords(), samples.dim2(), n);
    const double vxy = frobenius_dot(a, b);
    const double vxx = frobenius_dot(a, a);
    const double vyy = frobenius_dot(b, b);
    if (vxx <= 0.0 || vyy <= 0.0) return 0.0;
    const double r2 = vxy / std::sqrt(vxx * vyy);
    return std::sqrt(std::clamp(r2, 0.0, 1.0));
}

double distance_correlation_permutation_pvalue(const SampleSet& samples, std::size_t permutations,
                                               std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) throw InvalidArgument("permutation test needs at least two observations");
    const auto a = centered_distances(samples.first_coords(), samples.dim1(), n);
    const auto b = centered_distances(samples.second_coords(), samples.dim2(), n);
    const double observed = frobenius_dot(a, b);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::size_t at_least = 0;
    for (std::size_t rep = 0; rep < permutations; ++rep) {
        std::shuffle(perm.begin(), perm.end(), rng);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* arow = a.data() + i * n;
            const double* brow = b.data() + perm[i] * n;
            for (std::size_t j = 0; j < n; ++j) s += arow[j] * brow[perm[j]];
        }
        if (s >= observed) ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(permutations + 1);
}

}  // namespace wcorr
