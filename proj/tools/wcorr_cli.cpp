// wcorr: dependence coefficients, independence tests and simulation drivers
// for paired samples.
//
// Exit codes: 0 success, 2 usage or input schema error, 3 degenerate data,
// 4 optimal transport solver failure.

#include "csv_input.hpp"
#include "json_out.hpp"

#include "wcorr/baselines.hpp"
#include "wcorr/correlation.hpp"
#include "wcorr/error.hpp"
#include "wcorr/experiments.hpp"
#include "wcorr/independence.hpp"
#include "wcorr/samples.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#ifndef WCORR_VERSION
#define WCORR_VERSION "0.0.0"
#endif

namespace {

using namespace wcorr;
using cli::Json;

constexpr int kUsage = 2;
constexpr int kDegenerate = 3;
constexpr int kSolver = 4;

struct SolverFlags {
    std::string method = "exact";
    bool exact = false;
    bool sinkhorn = false;
    double eps = 0.01;

    void attach(CLI::App* app) {
        app->add_option("--method", method, "exact | sinkhorn | exact_1d | exact_flow")
            ->capture_default_str();
        auto* ex = app->add_flag("--exact", exact, "Same as --method exact");
        auto* sk = app->add_flag("--sinkhorn", sinkhorn, "Same as --method sinkhorn");
        ex->excludes(sk);
        app->add_option("--eps", eps, "Entropic regularization for sinkhorn")->capture_default_str();
    }

    SolverConfig config() const {
        SolverConfig cfg;
        cfg.method = sinkhorn ? Method::sinkhorn : exact ? Method::exact : method_from_string(method);
        if (cfg.method == Method::sinkhorn && !(eps > 0.0)) {
            throw InvalidArgument("--eps must be positive");
        }
        cfg.entropic_epsilon = eps;
        return cfg;
    }

    Json report(const SolverConfig& cfg, double p) const {
        Json j;
        j["method"] = std::string(to_string(cfg.method));
        j["epsilon"] = cfg.method == Method::sinkhorn ? Json(cfg.entropic_epsilon) : Json(nullptr);
        j["p"] = p;
        return j;
    }
};

struct InputFlags {
    std::string input;
    std::string x1;
    std::string x2;
    std::string split;
    bool swap = false;

    void attach(CLI::App* app) {
        app->add_option("--input", input, "CSV file with a header row ('-' for stdin)")->required();
        app->add_option("--x1", x1, "Comma-separated columns of the first coordinate");
        app->add_option("--x2", x2, "Comma-separated columns of the second coordinate");
        app->add_option("--split", split, "Alternative column selection: x1=a[,b];x2=c[,d]");
        app->add_flag("--swap", swap, "Exchange the roles of x1 and x2");
    }

    cli::ColumnSplit columns() const {
        if (!split.empty()) {
            if (!x1.empty() || !x2.empty()) throw cli::SchemaError("use either --split or --x1/--x2");
            return cli::parse_split(split);
        }
        if (x1.empty() || x2.empty()) throw cli::SchemaError("--x1 and --x2 are required");
        return {cli::split_list(x1), cli::split_list(x2)};
    }

    SampleSet load(cli::ColumnSplit& cols) const {
        cols = columns();
        auto samples = cli::select_samples(cli::read_csv_file(input), cols);
        if (swap) {
            std::swap(cols.first, cols.second);
            samples = samples.swapped();
        }
        return samples;
    }

    Json report(const SampleSet& data, const cli::ColumnSplit& cols) const {
        Json j;
        j["path"] = input;
        j["n"] = data.size();
        j["d1"] = data.dim1();
        j["d2"] = data.dim2();
        j["columns"] = {{"x1", cols.first}, {"x2", cols.second}};
        j["swapped"] = swap;
        Json norm;
        if (data.normalization()) {
            auto axes = [](const std::vector<AxisTransform>& ts) {
                Json a = Json::array();
                for (const auto& t : ts) a.push_back({{"min", t.min}, {"max", t.max}});
                return a;
            };
            norm["x1"] = axes(data.normalization()->first);
            norm["x2"] = axes(data.normalization()->second);
        }
        j["normalization"] = norm;
        return j;
    }
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw cli::SchemaError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_rho(const std::string& spec) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
            throw InvalidArgument("bad --rho value '" + spec + "'");
        }
        return v;
    };
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {number(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw InvalidArgument("--rho range must be start:stop:step");
    const double start = number(spec.substr(0, c1));
    const double stop = number(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = number(spec.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw InvalidArgument("--rho range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t k = 0; k < count; ++k) {
        // Round away the accumulation noise of start + k * step.
        grid.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return grid;
}

std::vector<std::string> default_coefficients(const SampleSet& data) {
    if (data.dim1() == 1 && data.dim2() == 1) {
        return {"pearson", "spearman", "distance", "chatterjee", "wasserstein_forward",
                "wasserstein_backward"};
    }
    return {"distance", "wasserstein_forward", "wasserstein_backward"};
}

std::string_view direction_of(Coefficient c) {
    switch (c) {
        case Coefficient::chatterjee:
        case Coefficient::wasserstein_forward: return "forward";
        case Coefficient::wasserstein_backward: return "backward";
        case Coefficient::wasserstein_max: return "symmetric_max";
        default: return "symmetric";
    }
}

// --------------------------------------------------------------- corr

struct CorrCommand {
    InputFlags in;
    SolverFlags solver;
    double p = 1.0;
    std::size_t grid_m = 0;
    bool grid_off = false;
    std::uint64_t seed = 0;
    std::vector<std::string> coefs;
    std::string output;

    void attach(CLI::App* app) {
        in.attach(app);
        solver.attach(app);
        app->add_option("--p", p, "Order of the Wasserstein coefficient")->capture_default_str();
        auto* g = app->add_option("--grid", grid_m, "Cells per axis (default: rates grid for N)")
                      ->check(CLI::PositiveNumber);
        auto* off = app->add_flag("--grid-off", grid_off, "Use the sample points as atoms, no binning");
        g->excludes(off);
        app->add_option("--seed", seed, "Seed for random tie-breaking")->capture_default_str();
        app->add_option("--coef", coefs, "Coefficients to report")->delimiter(',');
        app->add_option("--output", output, "Write the report here instead of stdout");
    }

    int run() {
        if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("--p must be at least 1");
        const SolverConfig cfg = solver.config();
        cli::ColumnSplit cols;
        const SampleSet data = normalize(in.load(cols));

        Json grid;
        std::optional<DiscreteCoupling> coupling;
        if (grid_off) {
            grid = {{"binned", false}, {"m", nullptr}, {"cell_count", nullptr}};
            coupling.emplace(empirical_coupling(data));
        } else {
            const GridSpec g1 = grid_m ? GridSpec(data.dim1(), grid_m)
                                       : default_grid(data.size(), data.dim1(), GridPurpose::rates);
            const GridSpec g2 = grid_m ? GridSpec(data.dim2(), grid_m)
                                       : default_grid(data.size(), data.dim2(), GridPurpose::rates);
            grid = {{"binned", true},
                    {"m", {g1.cells_per_axis(), g2.cells_per_axis()}},
                    {"cell_count", {g1.cell_count(), g2.cell_count()}}};
            coupling.emplace(adapted_empirical(data, g1, g2));
        }

        Json coefficients = Json::object();
        for (const auto& name : coefs.empty() ? default_coefficients(data) : coefs) {
            const Coefficient c = coefficient_from_string(name);
            Json entry;
            switch (c) {
                case Coefficient::pearson: entry["value"] = pearson(data); break;
                case Coefficient::spearman: entry["value"] = spearman(data); break;
                case Coefficient::chatterjee: entry["value"] = chatterjee_xi(data, seed); break;
                case Coefficient::distance_correlation: entry["value"] = distance_correlation(data); break;
                case Coefficient::wasserstein_forward:
                case Coefficient::wasserstein_backward:
                case Coefficient::wasserstein_max: {
                    const Direction dir = c == Coefficient::wasserstein_forward    ? Direction::forward
                                          : c == Coefficient::wasserstein_backward ? Direction::backward
                                                                                   : Direction::symmetric_max;
                    const auto value = wasserstein_correlation(*coupling, p, cfg, dir);
                    entry["value"] = value.value;
                    entry["clamped"] = value.clamped;
                    entry["max_marginal_violation"] = value.max_marginal_violation;
                    break;
                }
            }
            entry["direction"] = std::string(direction_of(c));
            coefficients[std::string(to_string(c))] = entry;
        }

        Json report;
        report["input"] = in.report(data, cols);
        report["grid"] = grid;
        report["solver"] = solver.report(cfg, p);
        report["coefficients"] = coefficients;
        report["seed"] = seed;
        report["version"] = WCORR_VERSION;
        Output out(output);
        out.stream() << cli::dump_json(report);
        return 0;
    }
};

// --------------------------------------------------------------- test

struct TestCommand {
    InputFlags in;
    SolverFlags solver;
    double alpha = 0.05;
    std::size_t grid_m = 0;
    double c_nu = 0.0;
    std::uint64_t seed = 0;
    std::string output;

    void attach(CLI::App* app) {
        in.attach(app);
        solver.attach(app);
        app->add_option("--alpha", alpha, "Significance level in (0,1)")->capture_default_str();
        app->add_option("--grid", grid_m, "Cells per axis (default: test grid for N)")
            ->check(CLI::PositiveNumber);
        app->add_option("--c-nu", c_nu, "Override of the threshold constant C(nu)");
        app->add_option("--seed", seed, "Recorded in the report")->capture_default_str();
        app->add_option("--output", output, "Write the report here instead of stdout");
    }

    int run() {
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("--alpha must lie in (0,1)");
        const SolverConfig cfg = solver.config();
        cli::ColumnSplit cols;
        const SampleSet data = normalize(in.load(cols));
        if (data.dim1() != data.dim2()) {
            throw InvalidArgument("the test needs x1 and x2 of the same dimension");
        }
        const GridSpec grid = grid_m ? GridSpec(data.dim1(), grid_m)
                                     : default_grid(data.size(), data.dim1(), GridPurpose::test);
        const auto result = asymptotic_test(data, grid, alpha, cfg,
                                            c_nu > 0.0 ? std::optional(c_nu) : std::nullopt);
        if (result.coarse_sample) {
            std::cerr << "warning: cells/sqrt(N) exceeds 1; the threshold is very loose\n";
        }

        Json test;
        test["statistic"] = result.statistic;
        test["threshold"] = result.threshold;
        test["alpha"] = result.alpha;
        test["reject"] = result.reject;
        test["c_nu"] = result.c_nu;
        test["sigma"] = result.sigma;
        test["centering_bound"] = result.centering_bound;
        test["z"] = normal_quantile(1.0 - alpha);
        test["t_tilde"] = result.t_tilde;

        Json report;
        report["input"] = in.report(data, cols);
        report["grid"] = {{"binned", true},
                          {"m", {grid.cells_per_axis(), grid.cells_per_axis()}},
                          {"cell_count", {grid.cell_count(), grid.cell_count()}}};
        report["solver"] = solver.report(cfg, 1.0);
        report["coefficients"] = {
            {"wasserstein_forward", {{"value", result.statistic}, {"direction", "forward"}}}};
        report["test"] = test;
        report["seed"] = seed;
        report["version"] = WCORR_VERSION;
        Output out(output);
        out.stream() << cli::dump_json(report);
        return 0;
    }
};

// --------------------------------------------------------------- curve / power / hist

struct SimulationFlags {
    std::string family = "gaussian";
    std::string link = "id";
    std::string rho = "0:1:0.1";
    std::size_t n = 1000;
    std::size_t draws = 30;
    std::uint64_t seed = 0;
    std::string output;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "gaussian | uniform_link")->capture_default_str();
        app->add_option("--f", link, "Link for uniform_link: id | abs | cubic | sin")->capture_default_str();
        app->add_option("--rho", rho, "Single value or start:stop:step (inclusive)")->capture_default_str();
        app->add_option("--n", n, "Samples per draw")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--draws", draws, "Draws per rho")->capture_default_str();
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
        app->add_option("--output", output, "Write CSV here instead of stdout");
    }
};

struct CurveCommand {
    SimulationFlags sim;
    SolverFlags solver;
    double p = 1.0;
    std::size_t grid_m = 0;
    std::vector<std::string> coefs;

    void attach(CLI::App* app) {
        sim.attach(app);
        solver.attach(app);
        app->add_option("--p", p, "Order of the Wasserstein coefficient")->capture_default_str();
        app->add_option("--grid", grid_m, "Cells per axis (default: rates grid for N)")
            ->check(CLI::PositiveNumber);
        app->add_option("--coef", coefs, "Coefficients (default: all one-dimensional ones)")
            ->delimiter(',');
    }

    int run() {
        if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("--p must be at least 1");
        SweepConfig cfg;
        cfg.family = family_from_string(sim.family);
        cfg.link = link_from_string(sim.link);
        cfg.rho_grid = parse_rho(sim.rho);
        cfg.n = sim.n;
        cfg.draws = sim.draws;
        cfg.seed = sim.seed;
        cfg.estimator.p = p;
        cfg.estimator.solver = solver.config();
        if (grid_m) cfg.estimator.grid_m = grid_m;
        const std::vector<std::string> names =
            coefs.empty() ? std::vector<std::string>{"pearson", "spearman", "chatterjee", "distance",
                                                     "wasserstein_forward"}
                          : coefs;
        for (const auto& name : names) cfg.coefficients.push_back(coefficient_from_string(name));

        const auto result = rho_sweep(cfg);
        Output out(sim.output);
        auto& os = out.stream();
        os << "rho,coefficient,mean,sd,draws,failed\n";
        for (const auto& cell : result.cells) {
            os << cli::format_double(cell.rho) << ',' << to_string(cell.coefficient) << ','
               << cli::format_double(cell.mean) << ',' << cli::format_double(cell.sd) << ','
               << cell.draws << ',' << cell.failed << '\n';
        }
        return 0;
    }
};

struct PowerCommand {
    SimulationFlags sim;
    SolverFlags solver;
    double alpha = 0.05;
    std::size_t grid_m = 0;
    std::size_t permutations = 200;
    std::vector<std::string> tests{"wasserstein", "distance"};

    void attach(CLI::App* app) {
        sim.family = "uniform_link";
        sim.n = 1500;
        sim.draws = 200;
        sim.attach(app);
        solver.attach(app);
        app->add_option("--alpha", alpha, "Significance level in (0,1)")->capture_default_str();
        app->add_option("--grid", grid_m, "Cells per axis (default: test grid for N)")
            ->check(CLI::PositiveNumber);
        app->add_option("--permutations", permutations, "Permutations for the distance test")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--tests", tests, "wasserstein, distance")->delimiter(',')->capture_default_str();
    }

    int run() {
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("--alpha must lie in (0,1)");
        PowerConfig cfg;
        cfg.family = family_from_string(sim.family);
        cfg.link = link_from_string(sim.link);
        cfg.rho_grid = parse_rho(sim.rho);
        cfg.n = sim.n;
        cfg.draws = sim.draws;
        cfg.alpha = alpha;
        cfg.permutations = permutations;
        cfg.solver = solver.config();
        cfg.seed = sim.seed;
        if (grid_m) cfg.grid_m = grid_m;
        for (const auto& t : tests) cfg.tests.push_back(test_kind_from_string(t));

        const auto points = power_curve(cfg);
        Output out(sim.output);
        auto& os = out.stream();
        os << "rho,test,rejection_rate,draws\n";
        for (const auto& pt : points) {
            os << cli::format_double(pt.rho) << ',' << to_string(pt.test) << ','
               << cli::format_double(pt.rate()) << ',' << pt.draws << '\n';
        }
        return 0;
    }
};

struct HistCommand {
    SolverFlags solver;
    std::size_t n = 500;
    std::size_t draws = 10000;
    std::size_t grid_m = 0;
    std::uint64_t seed = 0;
    std::string output;

    void attach(CLI::App* app) {
        solver.attach(app);
        app->add_option("--n", n, "Samples per draw")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--draws", draws, "Number of draws")->capture_default_str();
        app->add_option("--grid", grid_m, "Cells per axis (default: test grid for N)")
            ->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
        app->add_option("--output", output, "Write CSV here instead of stdout");
    }

    int run() {
        HistConfig cfg;
        cfg.n = n;
        cfg.draws = draws;
        cfg.solver = solver.config();
        cfg.seed = seed;
        if (grid_m) cfg.grid_m = grid_m;
        const auto values = null_histogram(cfg);
        Output out(output);
        auto& os = out.stream();
        os << "draw,value\n";
        for (std::size_t k = 0; k < values.size(); ++k) {
            os << k << ',' << cli::format_double(values[k]) << '\n';
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wasserstein correlation, independence tests and simulation drivers"};
    app.set_version_flag("--version", WCORR_VERSION);
    app.require_subcommand(1);

    CorrCommand corr;
    TestCommand test;
    CurveCommand curve;
    PowerCommand power;
    HistCommand hist;
    auto* corr_app = app.add_subcommand("corr", "Dependence coefficients of two CSV columns groups (JSON)");
    auto* test_app = app.add_subcommand("test", "Asymptotic independence test (JSON)");
    auto* curve_app = app.add_subcommand("curve", "Coefficient means over a rho grid (CSV)");
    auto* power_app = app.add_subcommand("power", "Rejection frequencies over a rho grid (CSV)");
    auto* hist_app = app.add_subcommand("hist", "Standardized statistic under independence (CSV)");
    corr.attach(corr_app);
    test.attach(test_app);
    curve.attach(curve_app);
    power.attach(power_app);
    hist.attach(hist_app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (corr_app->parsed()) return corr.run();
        if (test_app->parsed()) return test.run();
        if (curve_app->parsed()) return curve.run();
        if (power_app->parsed()) return power.run();
        if (hist_app->parsed()) return hist.run();
    } catch (const DegenerateData& e) {
        std::cerr << "degenerate data: " << e.what() << '\n';
        return kDegenerate;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (marginal violation "
                  << e.marginal_violation() << ")\n";
        return kSolver;
    } catch (const Error& e) {
        // InvalidArgument, SchemaError, ZeroMassError
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
