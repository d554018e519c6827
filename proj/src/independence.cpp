#include "wcorr/independence.hpp"

#include "wcorr/correlation.hpp"
#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wcorr {

namespace {

void check_unit_interval(const std::vector<double>& coords) {
    for (double x : coords) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidArgument("contingency table needs coordinates in [0,1]; normalize first");
        }
    }
}

double rational(const double* num, const double* den, double r) {
    double n = num[7];
    double d = den[7];
    for (int k = 6; k >= 0; --k) {
        n = n * r + num[k];
        d = d * r + den[k];
    }
    return n / d;
}

}  // namespace

ContingencyTable::ContingencyTable(const SampleSet& samples, const GridSpec& first_grid,
                                   const GridSpec& second_grid) {
    if (first_grid.dim() != samples.dim1() || second_grid.dim() != samples.dim2()) {
        throw InvalidArgument("grid dimension does not match the samples");
    }
    check_unit_interval(samples.first_coords());
    check_unit_interval(samples.second_coords());
    row_sums_.assign(first_grid.cell_count(), 0);
    col_sums_.assign(second_grid.cell_count(), 0);

    std::vector<std::pair<std::size_t, std::size_t>> keys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        keys[i] = {first_grid.cell_index(samples.first(i)), second_grid.cell_index(samples.second(i))};
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        cells_.push_back({keys[i].first, keys[i].second, j - i});
        i = j;
    }
    finish();
}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   const std::vector<std::size_t>& counts) {
    if (rows == 0 || cols == 0) throw InvalidArgument("contingency table needs rows and columns");
    if (counts.size() != rows * cols) throw InvalidArgument("count vector does not match the shape");
    row_sums_.assign(rows, 0);
    col_sums_.assign(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (counts[r * cols + c] > 0) cells_.push_back({r, c, counts[r * cols + c]});
        }
    }
    finish();
}

void ContingencyTable::finish() {
    for (const auto& cell : cells_) {
        row_sums_[cell.row] += cell.count;
        col_sums_[cell.col] += cell.count;
        total_ += cell.count;
    }
    if (total_ == 0) throw InvalidArgument("contingency table is empty");
}

std::size_t ContingencyTable::count(std::size_t row, std::size_t col) const {
    const auto it = std::lower_bound(cells_.begin(), cells_.end(), std::pair(row, col),
                                     [](const Cell& c, const std::pair<std::size_t, std::size_t>& key) {
                                         return std::pair(c.row, c.col) < key;
                                     });
    return it != cells_.end() && it->row == row && it->col == col ? it->count : 0;
}

double t_tilde(const ContingencyTable& table) {
    // Empty joint cells contribute their product mass; the product masses
    // over all cells sum to one.
    const double n = static_cast<double>(table.total());
    double sum = 1.0;
    for (const auto& cell : table.cells()) {
        const double joint = static_cast<double>(cell.count) / n;
        const double product = (static_cast<double>(table.row_sums()[cell.row]) / n) *
                               (static_cast<double>(table.col_sums()[cell.col]) / n);
        sum += std::abs(joint - product) - product;
    }
    return std::max(sum, 0.0);
}

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probability must lie in [0,1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    static constexpr double a[] = {3.387132872796366608,   133.14166789178437745,
                                   1971.5909503065514427,  13731.693765509461125,
                                   45921.953931549871457,  67265.770927008700853,
                                   33430.575583588128105,  2509.0809287301226727};
    static constexpr double b[] = {1.0,                    42.313330701600911252,
                                   687.1870074920579083,   5394.1960214247511077,
                                   21213.794301586595867,  39307.89580009271061,
                                   28729.085735721942674,  5226.495278852545925};
    static constexpr double c[] = {1.42343711074968357734,  4.6303378461565452959,
                                   5.7694972214606914055,   3.64784832476320460504,
                                   1.27045825245236838258,  0.24178072517745061177,
                                   0.0227238449892691845833, 7.7454501427834140764e-4};
    static constexpr double d[] = {1.0,                     2.05319162663775882187,
                                   1.6763848301838038494,   0.68976733498510000455,
                                   0.14810397642748007459,  0.0151986665636164571966,
                                   5.475938084995344946e-4, 1.05075007164441684324e-9};
    static constexpr double e[] = {6.6579046435011037772,    5.4637849111641143699,
                                   1.7848265399172913358,    0.29656057182850489123,
                                   0.026532189526576123093,  0.0012426609473880784386,
                                   2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[] = {1.0,                      0.59983220655588793769,
                                   0.13692988092273580531,   0.0148753612908506148525,
                                   7.868691311456132591e-4,  1.8463183175100546818e-5,
                                   1.4215117583164458887e-7, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        return q * rational(a, b, 0.180625 - q * q);
    }
    double r = std::sqrt(-std::log(std::min(p, 1.0 - p)));
    const double value = r <= 5.0 ? rational(c, d, r - 1.6) : rational(e, f, r - 5.0);
    return q < 0.0 ? -value : value;
}

double default_c_nu(const DiscreteCoupling& binned) {
    const double f_hat = mean_pairwise_distance(binned.second_marginal(), 1.0);
    if (!(f_hat > 0.0)) throw DegenerateData("binned second marginal is a single atom");
    return std::sqrt(static_cast<double>(binned.dim2())) / f_hat;
}

double test_threshold_rate(const GridSpec& grid, std::size_t n, double c_nu) {
    if (n == 0) throw InvalidArgument("threshold needs at least one sample");
    return c_nu * static_cast<double>(grid.cell_count()) / std::sqrt(static_cast<double>(n));
}

double concentration_bound(double epsilon, std::size_t n, const GridSpec& grid) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be nonnegative");
    const double cells = static_cast<double>(grid.cell_count());
    const double exponent = std::numbers::ln2 * (cells + 1.0) * (cells + 1.0) -
                            epsilon * epsilon * static_cast<double>(n) /
                                (2.0 * static_cast<double>(grid.dim()));
    return std::min(1.0, std::exp(exponent));
}

TestResult asymptotic_test(const SampleSet& samples, const GridSpec& grid, double alpha,
                           const SolverConfig& cfg, std::optional<double> c_nu) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
    if (samples.dim1() != samples.dim2()) {
        throw InvalidArgument("independence test needs both coordinates in the same dimension");
    }
    if (c_nu && !(*c_nu > 0.0)) throw InvalidArgument("c_nu override must be positive");

    const auto binned = adapted_empirical(samples, grid);
    TestResult out;
    out.alpha = alpha;
    out.grid = grid;
    out.c_nu = c_nu ? *c_nu : default_c_nu(binned);
    out.statistic = wasserstein_correlation(binned, 1.0, cfg, Direction::forward).value;
    out.t_tilde = t_tilde(ContingencyTable(samples, grid, grid));

    const double root_n = std::sqrt(static_cast<double>(samples.size()));
    const double cells = static_cast<double>(grid.cell_count());
    out.centering_bound = std::sqrt(2.0 / std::numbers::pi) * cells / root_n;
    out.threshold =
        out.c_nu * (out.centering_bound + out.sigma * normal_quantile(1.0 - alpha) / root_n);
    out.reject = out.statistic > out.threshold;
    out.coarse_sample = cells / root_n > 1.0;
    return out;
}

}  // namespace wcorr
