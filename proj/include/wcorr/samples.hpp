#pragma once

#include "wcorr/grid.hpp"
#include "wcorr/measure.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wcorr {

/// Per-coordinate min-max map x -> (x - min) / (max - min). A constant
/// coordinate (max == min) maps to 0.
struct AxisTransform {
    double min = 0.0;
    double max = 1.0;

    double apply(double x) const { return max > min ? (x - min) / (max - min) : 0.0; }
    friend bool operator==(const AxisTransform&, const AxisTransform&) = default;
};

struct Normalization {
    std::vector<AxisTransform> first;
    std::vector<AxisTransform> second;
};

/// N paired observations (X1^n, X2^n), X1 in R^d1 and X2 in R^d2, stored
/// row-major.
class SampleSet {
public:
    SampleSet(std::size_t dim1, std::size_t dim2, std::vector<double> first,
              std::vector<double> second);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim1() const noexcept { return dim1_; }
    std::size_t dim2() const noexcept { return dim2_; }

    std::span<const double> first(std::size_t i) const { return {first_.data() + i * dim1_, dim1_}; }
    std::span<const double> second(std::size_t i) const {
        return {second_.data() + i * dim2_, dim2_};
    }
    const std::vector<double>& first_coords() const noexcept { return first_; }
    const std::vector<double>& second_coords() const noexcept { return second_; }

    const std::optional<Normalization>& normalization() const noexcept { return normalization_; }

    SampleSet swapped() const;

private:
    friend SampleSet normalize(const SampleSet& raw);

    std::size_t n_;
    std::size_t dim1_;
    std::size_t dim2_;
    std::vector<double> first_;
    std::vector<double> second_;
    std::optional<Normalization> normalization_;
};

/// Min-max normalizes every coordinate onto [0,1] and records the maps.
/// Throws DegenerateData when a coordinate of the second marginal is
/// constant; a constant first-marginal coordinate maps to 0.
SampleSet normalize(const SampleSet& raw);

/**
 * Adapted empirical measure: every sample pair is moved to the centers of
 * its grid cells and weighted 1/N. Coordinates must already lie in [0,1];
 * values outside are rejected, not clamped.
 */
DiscreteCoupling adapted_empirical(const SampleSet& samples, const GridSpec& grid);
DiscreteCoupling adapted_empirical(const SampleSet& samples, const GridSpec& first_grid,
                                   const GridSpec& second_grid);

/// Empirical coupling of the raw sample points (no binning).
DiscreteCoupling empirical_coupling(const SampleSet& samples);

}  // namespace wcorr
