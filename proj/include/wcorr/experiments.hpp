#pragma once

#include "wcorr/correlation.hpp"
#include "wcorr/grid.hpp"
#include "wcorr/ot.hpp"
#include "wcorr/samples.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace wcorr {

enum class Family {
    gaussian,      // standard bivariate normal with correlation rho
    uniform_link,  // X2 = f(rho X1 + sqrt(1 - rho^2) U), X1, U ~ U[0,1]
};

enum class Link {
    identity,
    abs_shift,  // |x - 0.5|
    cubic,      // (x - 0.5)^3
    sine,       // sin(3x)
};

std::string_view to_string(Family f);
std::string_view to_string(Link f);
Family family_from_string(std::string_view name);
/// Accepts the long names and the short forms id, abs, cubic, sin.
Link link_from_string(std::string_view name);
double apply_link(Link f, double x);

struct DgpSpec {
    Family family = Family::gaussian;
    Link link = Link::identity;
    double rho = 0.0;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
};

/// Draws N pairs; a pure function of the spec.
SampleSet generate(const DgpSpec& spec);

enum class Coefficient {
    pearson,
    spearman,
    chatterjee,
    distance_correlation,
    wasserstein_forward,
    wasserstein_backward,
    wasserstein_max,
};

std::string_view to_string(Coefficient c);
Coefficient coefficient_from_string(std::string_view name);

/// Shared settings for the Wasserstein estimator inside the drivers.
struct EstimatorConfig {
    double p = 1.0;
    SolverConfig solver;
    // Cells per axis; the rates grid for N when unset.
    std::optional<std::size_t> grid_m;
};

/// Wasserstein correlation of raw samples: normalize, bin, solve.
CorrelationValue estimate_wasserstein(const SampleSet& raw, const EstimatorConfig& cfg,
                                      Direction direction);

struct SweepConfig {
    Family family = Family::gaussian;
    Link link = Link::identity;
    std::vector<double> rho_grid;
    std::size_t n = 1000;
    std::size_t draws = 30;
    std::vector<Coefficient> coefficients;
    EstimatorConfig estimator;
    std::uint64_t seed = 0;
};

struct SweepCell {
    double rho = 0.0;
    Coefficient coefficient = Coefficient::pearson;
    double mean = 0.0;  // NaN when every draw failed
    double sd = 0.0;    // sample standard deviation; NaN with fewer than two draws
    std::size_t draws = 0;
    std::size_t failed = 0;
};

struct SweepResult {
    std::size_t n = 0;
    std::size_t draws = 0;
    std::vector<SweepCell> cells;  // rho-major, coefficients in request order
};

/**
 * For every rho and draw: generate, compute each coefficient, aggregate.
 * Data for draw k use the same seed at every rho. A coefficient that raises
 * a library error on one draw is counted in `failed` and left out of the
 * mean.
 */
SweepResult rho_sweep(const SweepConfig& cfg);

enum class TestKind {
    wasserstein,           // asymptotic test on the test grid
    distance_correlation,  // permutation test
};

std::string_view to_string(TestKind t);
TestKind test_kind_from_string(std::string_view name);

struct PowerConfig {
    Family family = Family::uniform_link;
    Link link = Link::identity;
    std::vector<double> rho_grid;
    std::size_t n = 1500;
    std::size_t draws = 200;
    double alpha = 0.05;
    std::vector<TestKind> tests;
    std::size_t permutations = 200;
    SolverConfig solver;
    // Cells per axis; the test grid for N when unset.
    std::optional<std::size_t> grid_m;
    std::uint64_t seed = 0;
};

struct PowerPoint {
    double rho = 0.0;
    TestKind test = TestKind::wasserstein;
    std::size_t rejections = 0;
    std::size_t draws = 0;

    double rate() const { return draws == 0 ? 0.0 : static_cast<double>(rejections) / draws; }
};

/// Rejection frequencies per (rho, test); empty when draws is 0.
std::vector<PowerPoint> power_curve(const PowerConfig& cfg);

struct HistConfig {
    std::size_t n = 500;
    std::size_t draws = 10000;
    SolverConfig solver;
    // Cells per axis; the test grid for N when unset.
    std::optional<std::size_t> grid_m;
    std::uint64_t seed = 0;
};

/**
 * Under independent uniforms, the unnormalized statistic
 * S = sum_x pi1(x) W_1(pi_x, pi2) of the adapted empirical measure, reported
 * as sqrt(N) / sigma * (S - mean of S over the draws).
 */
std::vector<double> null_histogram(const HistConfig& cfg);

}  // namespace wcorr
