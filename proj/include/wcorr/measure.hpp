#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wcorr {

/// Euclidean distance between two points of equal dimension.
double euclidean(std::span<const double> a, std::span<const double> b);

/// Lexicographic three-way comparison of two points of equal dimension.
int compare_points(std::span<const double> a, std::span<const double> b);

/**
 * Finitely supported probability measure on R^d.
 *
 * Atoms are stored flat (row-major, `dim()` coordinates per atom), sorted
 * lexicographically, pairwise distinct and carry strictly positive weights
 * summing to one. Construction merges duplicate atoms, drops zero weights
 * and renormalizes; it rejects weight vectors whose total is off by more
 * than 1e-9.
 */
class DiscreteMeasure {
public:
    DiscreteMeasure(std::size_t dim, std::vector<double> coords, std::vector<double> weights);

    static DiscreteMeasure dirac(std::span<const double> point);
    static DiscreteMeasure uniform(std::size_t dim, std::vector<double> coords);
    static DiscreteMeasure on_line(std::vector<double> atoms, std::vector<double> weights);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return weights_.size(); }
    bool is_dirac() const noexcept { return weights_.size() == 1; }

    std::span<const double> atom(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    friend class DiscreteCoupling;
    DiscreteMeasure() = default;

    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

/**
 * Finitely supported probability measure on R^d1 x R^d2 with cached
 * marginals and the disintegration with respect to the first coordinate.
 *
 * Pairs are canonical in the same sense as DiscreteMeasure atoms. The
 * conditional law of the second coordinate is stored for every atom of the
 * first marginal, in first-marginal order.
 */
class DiscreteCoupling {
public:
    DiscreteCoupling(std::size_t dim1, std::size_t dim2, std::vector<double> first,
                     std::vector<double> second, std::vector<double> weights);

    static DiscreteCoupling product(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
    /// Empirical measure of N sample pairs, each with weight 1/N.
    static DiscreteCoupling empirical(std::size_t dim1, std::size_t dim2, std::vector<double> first,
                                      std::vector<double> second);
    /// lambda * a + (1 - lambda) * b.
    static DiscreteCoupling mixture(double lambda, const DiscreteCoupling& a,
                                    const DiscreteCoupling& b);

    std::size_t dim1() const noexcept { return dim1_; }
    std::size_t dim2() const noexcept { return dim2_; }
    std::size_t size() const noexcept { return weights_.size(); }

    std::span<const double> first(std::size_t i) const {
        return {first_.data() + i * dim1_, dim1_};
    }
    std::span<const double> second(std::size_t i) const {
        return {second_.data() + i * dim2_, dim2_};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

    const DiscreteMeasure& first_marginal() const noexcept { return first_marginal_; }
    const DiscreteMeasure& second_marginal() const noexcept { return second_marginal_; }

    /// Conditional law given the i-th atom of the first marginal.
    const DiscreteMeasure& conditional(std::size_t first_atom) const {
        return conditionals_[first_atom];
    }
    /// Conditional law given a first-coordinate value; throws ZeroMassError
    /// when the value carries no mass.
    const DiscreteMeasure& conditional(std::span<const double> x1) const;

    /// Same coupling with the coordinates exchanged.
    DiscreteCoupling swapped() const;

private:
    std::size_t dim1_;
    std::size_t dim2_;
    std::vector<double> first_;
    std::vector<double> second_;
    std::vector<double> weights_;
    DiscreteMeasure first_marginal_;
    DiscreteMeasure second_marginal_;
    std::vector<DiscreteMeasure> conditionals_;
};

}  // namespace wcorr
