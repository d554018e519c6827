#include "wcorr/samples.hpp"

#include "wcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace wcorr {

namespace {

std::vector<AxisTransform> fit_axes(const std::vector<double>& coords, std::size_t dim,
                                    std::size_t n) {
    std::vector<AxisTransform> axes(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        double lo = coords[a];
        double hi = coords[a];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, coords[i * dim + a]);
            hi = std::max(hi, coords[i * dim + a]);
        }
        axes[a] = {lo, hi};
    }
    return axes;
}

void apply_axes(std::vector<double>& coords, const std::vector<AxisTransform>& axes) {
    const std::size_t dim = axes.size();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto& t = axes[i % dim];
        // Pin the extremes so that min and max land exactly on 0 and 1.
        if (coords[i] == t.max && t.max > t.min) {
            coords[i] = 1.0;
        } else {
            coords[i] = t.apply(coords[i]);
        }
    }
}

void check_unit_cube(const std::vector<double>& coords, const char* which) {
    for (double c : coords) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw InvalidArgument(std::string(which) +
                                  " coordinate outside [0,1]; normalize the samples first");
        }
    }
}

}  // namespace

SampleSet::SampleSet(std::size_t dim1, std::size_t dim2, std::vector<double> first,
                     std::vector<double> second)
    : n_(0), dim1_(dim1), dim2_(dim2), first_(std::move(first)), second_(std::move(second)) {
    if (dim1 == 0 || dim2 == 0) throw InvalidArgument("sample dimensions must be at least one");
    if (first_.size() % dim1 != 0 || second_.size() % dim2 != 0 ||
        first_.size() / dim1 != second_.size() / dim2) {
        throw InvalidArgument("sample coordinates do not form complete pairs");
    }
    n_ = first_.size() / dim1;
    for (double v : first_) {
        if (!std::isfinite(v)) throw InvalidArgument("sample values must be finite");
    }
    for (double v : second_) {
        if (!std::isfinite(v)) throw InvalidArgument("sample values must be finite");
    }
}

SampleSet SampleSet::swapped() const {
    SampleSet out(dim2_, dim1_, second_, first_);
    if (normalization_) {
        out.normalization_ = Normalization{normalization_->second, normalization_->first};
    }
    return out;
}

SampleSet normalize(const SampleSet& raw) {
    if (raw.size() == 0) throw InvalidArgument("cannot normalize an empty sample set");
    Normalization record{fit_axes(raw.first_coords(), raw.dim1(), raw.size()),
                         fit_axes(raw.second_coords(), raw.dim2(), raw.size())};
    for (std::size_t a = 0; a < record.second.size(); ++a) {
        if (!(record.second[a].max > record.second[a].min)) {
            throw DegenerateData("second marginal coordinate " + std::to_string(a) +
                                 " is constant; the coefficient is undefined");
        }
    }
    std::vector<double> first = raw.first_coords();
    std::vector<double> second = raw.second_coords();
    apply_axes(first, record.first);
    apply_axes(second, record.second);
    SampleSet out(raw.dim1(), raw.dim2(), std::move(first), std::move(second));
    out.normalization_ = std::move(record);
    return out;
}

DiscreteCoupling adapted_empirical(const SampleSet& samples, const GridSpec& grid) {
    return adapted_empirical(samples, grid, grid);
}

DiscreteCoupling adapted_empirical(const SampleSet& samples, const GridSpec& first_grid,
                                   const GridSpec& second_grid) {
    if (samples.size() == 0) throw InvalidArgument("adapted empirical measure of no samples");
    if (first_grid.dim() != samples.dim1() || second_grid.dim() != samples.dim2()) {
        throw InvalidArgument("grid dimension does not match the samples");
    }
    check_unit_cube(samples.first_coords(), "first");
    check_unit_cube(samples.second_coords(), "second");

    const std::size_t n = samples.size();
    std::vector<std::pair<std::size_t, std::size_t>> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells[i] = {first_grid.cell_index(samples.first(i)),
                    second_grid.cell_index(samples.second(i))};
    }
    std::sort(cells.begin(), cells.end());

    std::vector<double> first;
    std::vector<double> second;
    std::vector<double> weights;
    std::vector<double> c1(samples.dim1());
    std::vector<double> c2(samples.dim2());
    const double unit = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && cells[j] == cells[i]) ++j;
        first_grid.cell_center(cells[i].first, c1);
        second_grid.cell_center(cells[i].second, c2);
        first.insert(first.end(), c1.begin(), c1.end());
        second.insert(second.end(), c2.begin(), c2.end());
        weights.push_back(static_cast<double>(j - i) * unit);
        i = j;
    }
    return DiscreteCoupling(samples.dim1(), samples.dim2(), std::move(first), std::move(second),
                            std::move(weights));
}

DiscreteCoupling empirical_coupling(const SampleSet& samples) {
    return DiscreteCoupling::empirical(samples.dim1(), samples.dim2(), samples.first_coords(),
                                       samples.second_coords());
}

}  // namespace wcorr
