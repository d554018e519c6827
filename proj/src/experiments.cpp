#include "wcorr/experiments.hpp"

#include "wcorr/baselines.hpp"
#include "wcorr/error.hpp"
#include "wcorr/independence.hpp"
#include "wcorr/parallel.hpp"
#include "wcorr/rng.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace wcorr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void unknown(std::string_view kind, std::string_view name) {
    throw InvalidArgument("unknown " + std::string(kind) + " '" + std::string(name) + "'");
}

void check_rho_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidArgument("rho grid is empty");
    for (double rho : grid) {
        if (!(rho >= -1.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [-1, 1]");
    }
}

GridSpec grid_for(std::size_t n, std::size_t dim, std::optional<std::size_t> m,
                  GridPurpose purpose) {
    return m ? GridSpec(dim, *m) : default_grid(n, dim, purpose);
}

double coefficient_value(Coefficient c, const SampleSet& raw, const EstimatorConfig& est,
                         std::uint64_t tie_seed) {
    switch (c) {
        case Coefficient::pearson: return pearson(raw);
        case Coefficient::spearman: return spearman(raw);
        case Coefficient::chatterjee: return chatterjee_xi(raw, tie_seed);
        case Coefficient::distance_correlation: return distance_correlation(raw);
        case Coefficient::wasserstein_forward:
            return estimate_wasserstein(raw, est, Direction::forward).value;
        case Coefficient::wasserstein_backward:
            return estimate_wasserstein(raw, est, Direction::backward).value;
        case Coefficient::wasserstein_max:
            return estimate_wasserstein(raw, est, Direction::symmetric_max).value;
    }
    unknown("coefficient", "?");
}

}  // namespace

std::string_view to_string(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::uniform_link: return "uniform_link";
    }
    return "gaussian";
}

std::string_view to_string(Link f) {
    switch (f) {
        case Link::identity: return "identity";
        case Link::abs_shift: return "abs_shift";
        case Link::cubic: return "cubic";
        case Link::sine: return "sine";
    }
    return "identity";
}

Family family_from_string(std::string_view name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "uniform_link" || name == "uniform") return Family::uniform_link;
    unknown("family", name);
}

Link link_from_string(std::string_view name) {
    if (name == "identity" || name == "id") return Link::identity;
    if (name == "abs_shift" || name == "abs") return Link::abs_shift;
    if (name == "cubic") return Link::cubic;
    if (name == "sine" || name == "sin") return Link::sine;
    unknown("link", name);
}

double apply_link(Link f, double x) {
    switch (f) {
        case Link::identity: return x;
        case Link::abs_shift: return std::abs(x - 0.5);
        case Link::cubic: return (x - 0.5) * (x - 0.5) * (x - 0.5);
        case Link::sine: return std::sin(3.0 * x);
    }
    return x;
}

SampleSet generate(const DgpSpec& spec) {
    if (!(spec.rho >= -1.0 && spec.rho <= 1.0)) throw InvalidArgument("rho must lie in [-1, 1]");
    if (spec.n == 0) throw InvalidArgument("need at least one sample");
    std::mt19937_64 rng(spec.seed);
    const double rho = spec.rho;
    const double rest = std::sqrt(1.0 - rho * rho);
    std::vector<double> x1(spec.n);
    std::vector<double> x2(spec.n);
    if (spec.family == Family::gaussian) {
        std::normal_distribution<double> normal;
        for (std::size_t i = 0; i < spec.n; ++i) {
            const double z1 = normal(rng);
            const double z2 = normal(rng);
            x1[i] = z1;
            x2[i] = rho * z1 + rest * z2;
        }
    } else {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (std::size_t i = 0; i < spec.n; ++i) {
            const double a = uniform(rng);
            const double u = uniform(rng);
            x1[i] = a;
            x2[i] = apply_link(spec.link, rho * a + rest * u);
        }
    }
    return SampleSet(1, 1, std::move(x1), std::move(x2));
}

std::string_view to_string(Coefficient c) {
    switch (c) {
        case Coefficient::pearson: return "pearson";
        case Coefficient::spearman: return "spearman";
        case Coefficient::chatterjee: return "chatterjee";
        case Coefficient::distance_correlation: return "distance";
        case Coefficient::wasserstein_forward: return "wasserstein_forward";
        case Coefficient::wasserstein_backward: return "wasserstein_backward";
        case Coefficient::wasserstein_max: return "wasserstein_max";
    }
    return "pearson";
}

Coefficient coefficient_from_string(std::string_view name) {
    if (name == "pearson") return Coefficient::pearson;
    if (name == "spearman") return Coefficient::spearman;
    if (name == "chatterjee") return Coefficient::chatterjee;
    if (name == "distance" || name == "dcor") return Coefficient::distance_correlation;
    if (name == "wasserstein_forward" || name == "wasserstein") return Coefficient::wasserstein_forward;
    if (name == "wasserstein_backward") return Coefficient::wasserstein_backward;
    if (name == "wasserstein_max") return Coefficient::wasserstein_max;
    unknown("coefficient", name);
}

CorrelationValue estimate_wasserstein(const SampleSet& raw, const EstimatorConfig& cfg,
                                      Direction direction) {
    const SampleSet data = normalize(raw);
    const GridSpec g1 = grid_for(data.size(), data.dim1(), cfg.grid_m, GridPurpose::rates);
    const GridSpec g2 = grid_for(data.size(), data.dim2(), cfg.grid_m, GridPurpose::rates);
    return wasserstein_correlation(adapted_empirical(data, g1, g2), cfg.p, cfg.solver, direction);
}

SweepResult rho_sweep(const SweepConfig& cfg) {
    check_rho_grid(cfg.rho_grid);
    if (cfg.coefficients.empty()) throw InvalidArgument("no coefficients requested");
    const std::size_t n_rho = cfg.rho_grid.size();
    const std::size_t n_coef = cfg.coefficients.size();

    // values[(rho * draws + draw) * n_coef + coef]; NaN marks a failed draw.
    std::vector<double> values(n_rho * cfg.draws * n_coef, kNaN);
    parallel_for(n_rho * cfg.draws, [&](std::size_t task) {
        const std::size_t r = task / cfg.draws;
        const std::size_t k = task % cfg.draws;
        const DgpSpec dgp{cfg.family, cfg.link, cfg.rho_grid[r], cfg.n,
                          derive_seed(cfg.seed, k, Stream::data)};
        const SampleSet raw = generate(dgp);
        for (std::size_t c = 0; c < n_coef; ++c) {
            try {
                values[task * n_coef + c] = coefficient_value(
                    cfg.coefficients[c], raw, cfg.estimator, derive_seed(cfg.seed, k, Stream::tie_break));
            } catch (const Error&) {
                // left as NaN and counted below
            }
        }
    });

    SweepResult out;
    out.n = cfg.n;
    out.draws = cfg.draws;
    for (std::size_t r = 0; r < n_rho; ++r) {
        for (std::size_t c = 0; c < n_coef; ++c) {
            SweepCell cell;
            cell.rho = cfg.rho_grid[r];
            cell.coefficient = cfg.coefficients[c];
            double sum = 0.0;
            std::vector<double> ok;
            for (std::size_t k = 0; k < cfg.draws; ++k) {
                const double v = values[(r * cfg.draws + k) * n_coef + c];
                if (std::isnan(v)) {
                    ++cell.failed;
                } else {
                    ok.push_back(v);
                    sum += v;
                }
            }
            cell.draws = ok.size();
            cell.mean = ok.empty() ? kNaN : sum / static_cast<double>(ok.size());
            if (ok.size() < 2) {
                cell.sd = kNaN;
            } else {
                double ss = 0.0;
                for (double v : ok) ss += (v - cell.mean) * (v - cell.mean);
                cell.sd = std::sqrt(ss / static_cast<double>(ok.size() - 1));
            }
            out.cells.push_back(cell);
        }
    }
    return out;
}

std::string_view to_string(TestKind t) {
    switch (t) {
        case TestKind::wasserstein: return "wasserstein";
        case TestKind::distance_correlation: return "distance";
    }
    return "wasserstein";
}

TestKind test_kind_from_string(std::string_view name) {
    if (name == "wasserstein") return TestKind::wasserstein;
    if (name == "distance" || name == "dcor") return TestKind::distance_correlation;
    unknown("test", name);
}

std::vector<PowerPoint> power_curve(const PowerConfig& cfg) {
    if (cfg.draws == 0) return {};
    check_rho_grid(cfg.rho_grid);
    if (cfg.tests.empty()) throw InvalidArgument("no tests requested");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
    const std::size_t n_rho = cfg.rho_grid.size();
    const std::size_t n_test = cfg.tests.size();

    std::vector<char> rejected(n_rho * cfg.draws * n_test, 0);
    parallel_for(n_rho * cfg.draws, [&](std::size_t task) {
        const std::size_t r = task / cfg.draws;
        const std::size_t k = task % cfg.draws;
        const DgpSpec dgp{cfg.family, cfg.link, cfg.rho_grid[r], cfg.n,
                          derive_seed(cfg.seed, k, Stream::data)};
        const SampleSet data = normalize(generate(dgp));
        for (std::size_t t = 0; t < n_test; ++t) {
            bool reject = false;
            if (cfg.tests[t] == TestKind::wasserstein) {
                const GridSpec grid = grid_for(data.size(), data.dim1(), cfg.grid_m, GridPurpose::test);
                reject = asymptotic_test(data, grid, cfg.alpha, cfg.solver).reject;
            } else {
                const double pvalue = distance_correlation_permutation_pvalue(
                    data, cfg.permutations, derive_seed(cfg.seed, k, Stream::permutation));
                reject = pvalue <= cfg.alpha;
            }
            rejected[task * n_test + t] = reject ? 1 : 0;
        }
    });

    std::vector<PowerPoint> out;
    for (std::size_t r = 0; r < n_rho; ++r) {
        for (std::size_t t = 0; t < n_test; ++t) {
            PowerPoint point{cfg.rho_grid[r], cfg.tests[t], 0, cfg.draws};
            for (std::size_t k = 0; k < cfg.draws; ++k) {
                point.rejections += rejected[(r * cfg.draws + k) * n_test + t];
            }
            out.push_back(point);
        }
    }
    return out;
}

std::vector<double> null_histogram(const HistConfig& cfg) {
    if (cfg.n == 0) throw InvalidArgument("need at least one sample");
    if (cfg.draws == 0) return {};
    const GridSpec grid = grid_for(cfg.n, 1, cfg.grid_m, GridPurpose::test);
    std::vector<double> stats(cfg.draws);
    parallel_for(cfg.draws, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(cfg.seed, k, Stream::data));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::vector<double> x1(cfg.n);
        std::vector<double> x2(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) {
            x1[i] = uniform(rng);
            x2[i] = uniform(rng);
        }
        const SampleSet data(1, 1, std::move(x1), std::move(x2));
        stats[k] = conditional_transport(adapted_empirical(data, grid), 1.0, cfg.solver);
    });
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= static_cast<double>(stats.size());
    const double scale = std::sqrt(static_cast<double>(cfg.n)) / kTestSigma;
    for (double& s : stats) s = scale * (s - mean);
    return stats;
}

}  // namespace wcorr
