#pragma once

#include <cstddef>
#include <span>

namespace wcorr {

/**
 * Partition of [0,1]^d into m^d congruent cubes of edge 1/m.
 *
 * Cells are indexed row-major over per-axis indices, so increasing cell
 * index is lexicographic order of cell centers. A coordinate on a shared
 * face belongs to the cell with the larger index; the last cell on each
 * axis is closed on the right so that 1 is covered.
 */
class GridSpec {
public:
    GridSpec(std::size_t dim, std::size_t cells_per_axis);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t cells_per_axis() const noexcept { return m_; }
    double edge() const noexcept { return 1.0 / static_cast<double>(m_); }
    /// m^d; throws InvalidArgument if it does not fit in size_t.
    std::size_t cell_count() const;

    std::size_t axis_index(double x) const;
    std::size_t cell_index(std::span<const double> point) const;
    void cell_center(std::size_t cell, std::span<double> out) const;
    /// Maps a point of [0,1]^d to the center of its cell.
    void project(std::span<const double> point, std::span<double> out) const;
    /// sqrt(d) / (2m), the largest distance between a point and its cell center.
    double max_displacement() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::size_t dim_;
    std::size_t m_;
};

enum class GridPurpose { rates, test };

/**
 * Default partition for N samples in dimension d.
 *
 * `rates`: m = ceil(N^r) with r = 1/3 for d = 1 and r = 1/(2d) for d >= 2.
 * `test`:  m = ceil(N^(1/(3d))), so the cell count grows like N^(1/3):
 *          cells/sqrt(N) -> 0 and cells^2/log(N) -> infinity in every
 *          dimension. For d = 1 this coincides with the rates grid.
 *
 * The ceilings are computed in integer arithmetic, so N = 1000, d = 1 gives
 * exactly m = 10.
 */
GridSpec default_grid(std::size_t n, std::size_t dim, GridPurpose purpose);

}  // namespace wcorr
