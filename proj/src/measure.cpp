#include "wcorr/measure.hpp"

#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace wcorr {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void check_weights(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidArgument("weights must be finite and nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        throw InvalidArgument("weights must sum to one (got " + std::to_string(total) + ")");
    }
}

void check_finite(std::span<const double> coords) {
    for (double c : coords) {
        if (!std::isfinite(c)) {
            throw InvalidArgument("atom coordinates must be finite");
        }
    }
}

std::span<const double> row(const std::vector<double>& flat, std::size_t dim, std::size_t i) {
    return {flat.data() + i * dim, dim};
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 1) {
        return std::abs(a[0] - b[0]);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

int compare_points(std::span<const double> a, std::span<const double> b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) return -1;
        if (a[k] > b[k]) return 1;
    }
    return 0;
}

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                                 std::vector<double> weights)
    : dim_(dim) {
    if (dim == 0) {
        throw InvalidArgument("measure dimension must be at least one");
    }
    if (coords.size() != dim * weights.size()) {
        throw InvalidArgument("coordinate count does not match weights");
    }
    check_weights(weights);
    check_finite(coords);

    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return compare_points(row(coords, dim, i), row(coords, dim, j)) < 0;
    });

    double total = 0.0;
    for (std::size_t idx : order) {
        const double w = weights[idx];
        if (w == 0.0) continue;
        auto point = row(coords, dim, idx);
        if (!weights_.empty() && compare_points(atom(weights_.size() - 1), point) == 0) {
            weights_.back() += w;
        } else {
            coords_.insert(coords_.end(), point.begin(), point.end());
            weights_.push_back(w);
        }
        total += w;
    }
    if (weights_.empty()) {
        throw InvalidArgument("measure has no atoms with positive weight");
    }
    for (double& w : weights_) w /= total;
}

DiscreteMeasure DiscreteMeasure::dirac(std::span<const double> point) {
    return DiscreteMeasure(point.size(), std::vector<double>(point.begin(), point.end()), {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim, std::vector<double> coords) {
    if (dim == 0 || coords.empty() || coords.size() % dim != 0) {
        throw InvalidArgument("uniform measure needs a nonempty set of points");
    }
    const std::size_t n = coords.size() / dim;
    return DiscreteMeasure(dim, std::move(coords), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::on_line(std::vector<double> atoms, std::vector<double> weights) {
    return DiscreteMeasure(1, std::move(atoms), std::move(weights));
}

DiscreteCoupling::DiscreteCoupling(std::size_t dim1, std::size_t dim2, std::vector<double> first,
                                   std::vector<double> second, std::vector<double> weights)
    : dim1_(dim1), dim2_(dim2) {
    if (dim1 == 0 || dim2 == 0) {
        throw InvalidArgument("coupling dimensions must be at least one");
    }
    const std::size_t n = weights.size();
    if (first.size() != dim1 * n || second.size() != dim2 * n) {
        throw InvalidArgument("pair coordinate count does not match weights");
    }
    check_weights(weights);
    check_finite(first);
    check_finite(second);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto cmp_pair = [&](std::size_t i, std::size_t j) {
        const int c = compare_points(row(first, dim1, i), row(first, dim1, j));
        if (c != 0) return c;
        return compare_points(row(second, dim2, i), row(second, dim2, j));
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return cmp_pair(i, j) < 0; });

    double total = 0.0;
    std::size_t last = n;
    for (std::size_t idx : order) {
        const double w = weights[idx];
        if (w == 0.0) continue;
        if (last != n && cmp_pair(last, idx) == 0) {
            weights_.back() += w;
        } else {
            auto x = row(first, dim1, idx);
            auto y = row(second, dim2, idx);
            first_.insert(first_.end(), x.begin(), x.end());
            second_.insert(second_.end(), y.begin(), y.end());
            weights_.push_back(w);
            last = idx;
        }
        total += w;
    }
    if (weights_.empty()) {
        throw InvalidArgument("coupling has no pairs with positive weight");
    }
    for (double& w : weights_) w /= total;

    // Pairs are sorted by first coordinate, so each conditional is a
    // contiguous run.
    std::vector<double> mu_atoms;
    std::vector<double> mu_weights;
    std::size_t start = 0;
    while (start < weights_.size()) {
        std::size_t end = start + 1;
        while (end < weights_.size() && compare_points(this->first(start), this->first(end)) == 0) {
            ++end;
        }
        double mass = 0.0;
        for (std::size_t i = start; i < end; ++i) mass += weights_[i];
        std::vector<double> ys(second_.begin() + static_cast<std::ptrdiff_t>(start * dim2),
                               second_.begin() + static_cast<std::ptrdiff_t>(end * dim2));
        std::vector<double> ws(weights_.begin() + static_cast<std::ptrdiff_t>(start),
                               weights_.begin() + static_cast<std::ptrdiff_t>(end));
        for (double& w : ws) w /= mass;
        conditionals_.emplace_back(dim2, std::move(ys), std::move(ws));
        auto x = this->first(start);
        mu_atoms.insert(mu_atoms.end(), x.begin(), x.end());
        mu_weights.push_back(mass);
        start = end;
    }
    first_marginal_ = DiscreteMeasure(dim1, std::move(mu_atoms), std::move(mu_weights));
    second_marginal_ = DiscreteMeasure(dim2, second_, weights_);
}

DiscreteCoupling DiscreteCoupling::product(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> first;
    std::vector<double> second;
    std::vector<double> weights;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            auto x = mu.atom(i);
            auto y = nu.atom(j);
            first.insert(first.end(), x.begin(), x.end());
            second.insert(second.end(), y.begin(), y.end());
            weights.push_back(mu.weight(i) * nu.weight(j));
        }
    }
    return DiscreteCoupling(mu.dim(), nu.dim(), std::move(first), std::move(second),
                            std::move(weights));
}

DiscreteCoupling DiscreteCoupling::empirical(std::size_t dim1, std::size_t dim2,
                                             std::vector<double> first,
                                             std::vector<double> second) {
    if (dim1 == 0 || first.empty() || first.size() % dim1 != 0) {
        throw InvalidArgument("empirical coupling needs at least one sample");
    }
    const std::size_t n = first.size() / dim1;
    return DiscreteCoupling(dim1, dim2, std::move(first), std::move(second),
                            std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteCoupling DiscreteCoupling::mixture(double lambda, const DiscreteCoupling& a,
                                           const DiscreteCoupling& b) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("mixture weight must lie in [0, 1]");
    }
    if (a.dim1() != b.dim1() || a.dim2() != b.dim2()) {
        throw InvalidArgument("mixture of couplings with different dimensions");
    }
    std::vector<double> first(a.first_);
    std::vector<double> second(a.second_);
    std::vector<double> weights;
    weights.reserve(a.size() + b.size());
    for (double w : a.weights_) weights.push_back(lambda * w);
    first.insert(first.end(), b.first_.begin(), b.first_.end());
    second.insert(second.end(), b.second_.begin(), b.second_.end());
    for (double w : b.weights_) weights.push_back((1.0 - lambda) * w);
    return DiscreteCoupling(a.dim1(), a.dim2(), std::move(first), std::move(second),
                            std::move(weights));
}

const DiscreteMeasure& DiscreteCoupling::conditional(std::span<const double> x1) const {
    if (x1.size() != dim1_) {
        throw InvalidArgument("conditioning point has the wrong dimension");
    }
    std::size_t lo = 0;
    std::size_t hi = first_marginal_.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (compare_points(first_marginal_.atom(mid), x1) < 0) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo == first_marginal_.size() || compare_points(first_marginal_.atom(lo), x1) != 0) {
        throw ZeroMassError("first marginal has no mass at the requested point");
    }
    return conditionals_[lo];
}

DiscreteCoupling DiscreteCoupling::swapped() const {
    return DiscreteCoupling(dim2_, dim1_, second_, first_, weights_);
}

}  // namespace wcorr
