#pragma once

#include "wcorr/measure.hpp"
#include "wcorr/samples.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wcorr {

// Classical sample coefficients. Scalar versions take paired observations
// of equal length; SampleSet versions require d1 = d2 = 1.

/// Ranks 1..N with ties replaced by their average rank.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);
double pearson(const SampleSet& samples);

double spearman(std::span<const double> x, std::span<const double> y);
double spearman(const SampleSet& samples);

/**
 * Rank correlation xi_N of Y on X.
 *
 * Pairs are sorted by x with ties in x broken uniformly at random from
 * `seed`; with r_i = #{j : y_j <= y_(i)} and l_i = #{j : y_j >= y_(i)},
 *
 *   xi_N = 1 - N * sum_i |r_(i+1) - r_(i)| / (2 * sum_i l_i (N - l_i)),
 *
 * which reduces to 1 - 3 * sum |r_(i+1) - r_(i)| / (N^2 - 1) without ties.
 * Returns 0 when y is constant.
 */
double chatterjee_xi(std::span<const double> x, std::span<const double> y, std::uint64_t seed);
double chatterjee_xi(const SampleSet& samples, std::uint64_t seed);

/// Population value of the rank correlation for a finite coupling on R x R:
/// sum_x mu(x) sum_y nu(y) (pi_x[y, inf) - nu[y, inf))^2 divided by
/// sum_y nu(y) Var(1{Y >= y}).
double tc_population(const DiscreteCoupling& pi);

using Norm = std::function<double(std::span<const double>)>;

double l1_norm(std::span<const double> v);
double l2_norm(std::span<const double> v);
double sup_norm(std::span<const double> v);

/// 1 - E_mu[mean |Y - Y'| under pi_x (x) pi_x] / mean |Y - Y'| under nu (x) nu,
/// for an arbitrary norm on the second coordinate.
double norm_coefficient(const DiscreteCoupling& pi, const Norm& norm);

/// norm_coefficient with the Euclidean norm.
double dgs_coefficient(const DiscreteCoupling& pi);

/// Distance correlation (biased V-statistic) with Euclidean distances in
/// each coordinate; 0 when either distance variance vanishes.
double distance_correlation(const SampleSet& samples);

/// Permutation p-value (1 + #{T_b >= T}) / (B + 1) for the distance
/// covariance statistic T under B random permutations of the second sample.
double distance_correlation_permutation_pvalue(const SampleSet& samples, std::size_t permutations,
                                               std::uint64_t seed);

}  // namespace wcorr
