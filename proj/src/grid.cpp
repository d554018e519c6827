#include "wcorr/grid.hpp"

#include "wcorr/error.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace wcorr {

namespace {

// base^exp, saturating at the maximum of uint64.
std::uint64_t saturating_pow(std::size_t base, std::size_t exp) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && result > kMax / base) return kMax;
        result *= base;
    }
    return result;
}

// Smallest m >= 1 with m^num >= n^den, i.e. ceil(n^(den/num)).
std::size_t ceil_rational_root(std::size_t n, std::size_t num, std::size_t den) {
    const double guess = std::ceil(std::pow(static_cast<double>(n),
                                            static_cast<double>(den) / static_cast<double>(num)));
    std::size_t m = guess < 1.0 ? 1 : static_cast<std::size_t>(guess);
    const std::uint64_t target = saturating_pow(n, den);
    while (m > 1 && saturating_pow(m - 1, num) >= target) --m;
    while (saturating_pow(m, num) < target) ++m;
    return m;
}

}  // namespace

GridSpec::GridSpec(std::size_t dim, std::size_t cells_per_axis) : dim_(dim), m_(cells_per_axis) {
    if (dim == 0) throw InvalidArgument("grid dimension must be at least one");
    if (cells_per_axis == 0) throw InvalidArgument("grid needs at least one cell per axis");
}

std::size_t GridSpec::cell_count() const {
    const auto count = saturating_pow(m_, dim_);
    if (count == std::numeric_limits<std::uint64_t>::max()) {
        throw InvalidArgument("grid has too many cells");
    }
    return static_cast<std::size_t>(count);
}

std::size_t GridSpec::axis_index(double x) const {
    const double scaled = std::floor(x * static_cast<double>(m_));
    if (scaled <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(scaled);
    return k >= m_ ? m_ - 1 : k;
}

std::size_t GridSpec::cell_index(std::span<const double> point) const {
    std::size_t index = 0;
    for (std::size_t a = 0; a < dim_; ++a) {
        index = index * m_ + axis_index(point[a]);
    }
    return index;
}

void GridSpec::cell_center(std::size_t cell, std::span<double> out) const {
    for (std::size_t a = dim_; a-- > 0;) {
        const std::size_t k = cell % m_;
        cell /= m_;
        out[a] = (static_cast<double>(k) + 0.5) / static_cast<double>(m_);
    }
}

void GridSpec::project(std::span<const double> point, std::span<double> out) const {
    for (std::size_t a = 0; a < dim_; ++a) {
        out[a] = (static_cast<double>(axis_index(point[a])) + 0.5) / static_cast<double>(m_);
    }
}

double GridSpec::max_displacement() const {
    return std::sqrt(static_cast<double>(dim_)) / (2.0 * static_cast<double>(m_));
}

GridSpec default_grid(std::size_t n, std::size_t dim, GridPurpose purpose) {
    if (n == 0) throw InvalidArgument("default grid needs at least one sample");
    if (dim == 0) throw InvalidArgument("grid dimension must be at least one");
    // m = ceil(n^(den/num))
    std::size_t num = 0;
    switch (purpose) {
        case GridPurpose::rates:
            num = dim == 1 ? 3 : 2 * dim;
            break;
        case GridPurpose::test:
            num = 3 * dim;
            break;
    }
    return GridSpec(dim, ceil_rational_root(n, num, 1));
}

}  // namespace wcorr
