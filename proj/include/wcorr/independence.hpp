#pragma once

#include "wcorr/grid.hpp"
#include "wcorr/ot.hpp"
#include "wcorr/samples.hpp"

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace wcorr {

/// sigma = 1 - 2/pi.
inline constexpr double kTestSigma = 1.0 - 2.0 / std::numbers::pi;

/**
 * Joint cell counts n(G, H) of N samples on a pair of grids, with row sums
 * n(G, .) and column sums n(., H). Only nonzero joint cells are stored.
 */
class ContingencyTable {
public:
    struct Cell {
        std::size_t row;
        std::size_t col;
        std::size_t count;
    };

    ContingencyTable(const SampleSet& samples, const GridSpec& first_grid,
                     const GridSpec& second_grid);
    /// Dense rows x cols counts, row-major.
    ContingencyTable(std::size_t rows, std::size_t cols, const std::vector<std::size_t>& counts);

    std::size_t rows() const noexcept { return row_sums_.size(); }
    std::size_t cols() const noexcept { return col_sums_.size(); }
    std::size_t total() const noexcept { return total_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const std::vector<std::size_t>& row_sums() const noexcept { return row_sums_; }
    const std::vector<std::size_t>& col_sums() const noexcept { return col_sums_; }
    std::size_t count(std::size_t row, std::size_t col) const;

private:
    void finish();

    std::vector<Cell> cells_;  // sorted by (row, col)
    std::vector<std::size_t> row_sums_;
    std::vector<std::size_t> col_sums_;
    std::size_t total_ = 0;
};

/// sum over all (G, H) of |n(G,H)/N - n(G,.)/N * n(.,H)/N|.
double t_tilde(const ContingencyTable& table);

/// Standard normal quantile (Wichura's AS241, about 1e-16 relative accuracy).
double normal_quantile(double p);

/// sqrt(d) / f_hat, f_hat = mean pairwise distance of the binned second marginal.
double default_c_nu(const DiscreteCoupling& binned);

/// c_nu * |cells| / sqrt(N).
double test_threshold_rate(const GridSpec& grid, std::size_t n, double c_nu);

/// min(1, exp(log 2 * (|cells| + 1)^2 - eps^2 N / (2d))).
double concentration_bound(double epsilon, std::size_t n, const GridSpec& grid);

struct TestResult {
    double statistic = 0.0;  // forward W_1 correlation of the adapted empirical measure
    double threshold = 0.0;
    double alpha = 0.0;
    bool reject = false;
    GridSpec grid{1, 1};
    double c_nu = 0.0;
    double sigma = kTestSigma;
    double centering_bound = 0.0;  // sqrt(2/pi) |cells| / sqrt(N)
    double t_tilde = 0.0;
    // |cells| / sqrt(N) > 1: the grid is too fine for N to say much.
    bool coarse_sample = false;
};

/**
 * Asymptotic-level independence test on data in [0,1]^d x [0,1]^d.
 *
 * Rejects when W->(adapted empirical) exceeds
 * c_nu * (sqrt(2/pi) |cells| / sqrt(N) + sigma * z_(1-alpha) / sqrt(N)).
 * The centering term is an upper bound, so the test is conservative.
 */
TestResult asymptotic_test(const SampleSet& samples, const GridSpec& grid, double alpha,
                           const SolverConfig& cfg = {}, std::optional<double> c_nu = std::nullopt);

}  // namespace wcorr
