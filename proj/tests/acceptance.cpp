// Acceptance run: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include "support/oracles.hpp"

#include "csv_input.hpp"
#include "wcorr/baselines.hpp"
#include "wcorr/correlation.hpp"
#include "wcorr/error.hpp"
#include "wcorr/experiments.hpp"
#include "wcorr/independence.hpp"
#include "wcorr/ot.hpp"
#include "wcorr/rng.hpp"
#include "wcorr/samples.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace wcorr;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    enum Status { pass, fail, skip } status = fail;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {Outcome::fail, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.status == Outcome::pass && secs > limit_seconds) {
        out.status = Outcome::fail;
        out.detail += fmt::format("; over time limit {} s", limit_seconds);
    }
    const char* tag = out.status == Outcome::pass ? "PASS" : out.status == Outcome::skip ? "SKIP" : "FAIL";
    if (out.status == Outcome::fail) ++failures;
    fmt::print("[{}] C{} {}: {} ({:.3f} s)\n", tag, id, title, out.detail, secs);
    std::fflush(stdout);
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::vector<double> dense(const CostMatrix& c) {
    std::vector<double> out;
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) out.push_back(c(i, j));
    return out;
}

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

// Random coupling whose first coordinate determines the second.
DiscreteCoupling dirac_conditional(std::mt19937_64& rng, std::size_t size, std::size_t d1, std::size_t d2) {
    std::uniform_real_distribution<double> u;
    std::vector<double> targets(std::max<std::size_t>(2, size / 2) * d2);
    for (auto& t : targets) t = u(rng);
    const std::size_t pool = targets.size() / d2;
    std::vector<double> x(size * d1);
    std::vector<double> y;
    std::vector<double> w(size);
    for (auto& v : x) v = u(rng);
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t k = i < pool ? i : std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng);
        y.insert(y.end(), targets.begin() + k * d2, targets.begin() + (k + 1) * d2);
        w[i] = 0.05 + u(rng);
    }
    double t = 0.0;
    for (double v : w) t += v;
    for (auto& v : w) v /= t;
    return DiscreteCoupling(d1, d2, x, y, w);
}

// Copy of pi with every atom moved by at most `scale` per coordinate.
DiscreteCoupling jitter(std::mt19937_64& rng, const DiscreteCoupling& pi, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (double v : pi.first(i)) x.push_back(v + u(rng));
        for (double v : pi.second(i)) y.push_back(v + u(rng));
        w.push_back(pi.weight(i));
    }
    return DiscreteCoupling(pi.dim1(), pi.dim2(), x, y, w);
}

Outcome criterion1() {
    const DiscreteCoupling pi(1, 1, {1, 1, 2}, {0, 1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto start = Clock::now();
    const double f = wasserstein_correlation(pi, 1.0, {}, Direction::forward).value;
    const double b = wasserstein_correlation(pi, 1.0, {}, Direction::backward).value;
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return verdict(std::abs(f - 0.75) <= 1e-12 && std::abs(b - 1.0) <= 1e-12 && ms < 1.0,
                   fmt::format("forward={:.15g} backward={:.15g} compute={:.3f} ms", f, b, ms));
}

Outcome criterion2() {
    bool ok = true;
    std::string detail;
    EstimatorConfig cfg;
    cfg.p = 2.0;
    for (double rho : {0.0, 0.3, 0.5, 0.6, 0.8, 0.95}) {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto s = generate({Family::gaussian, Link::identity, rho, 100000, derive_seed(2, seed, Stream::data)});
            mean += estimate_wasserstein(s, cfg, Direction::forward).value / 10.0;
        }
        const double target = 1.0 - std::sqrt(1.0 - rho * rho);
        const double err = mean * mean - target;
        ok = ok && std::abs(err) <= 0.05;
        detail += fmt::format("rho={} W2={:.4f} W2^2={:.4f} target={:.4f} err={:+.4f}; ", rho, mean, mean * mean,
                              target, err);
    }
    return verdict(ok, detail + "grid m=47, squared estimate vs 1-sqrt(1-rho^2), tol 0.05");
}

Outcome criterion3() {
    std::mt19937_64 rng(3);
    std::size_t random_ok = 0;
    std::size_t product_ok = 0;
    std::size_t dirac_ok = 0;
    double worst_product = 0.0;
    double worst_dirac = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t d1 = 1 + rep % 2;
        const std::size_t d2 = 1 + (rep / 2) % 2;
        DiscreteCoupling pi = oracle::random_coupling(rng, 2 + rep % 5, 2 + rep % 6, 4 + rep % 12, d1, d2);
        while (pi.second_marginal().is_dirac() || pi.first_marginal().is_dirac())
            pi = oracle::random_coupling(rng, 3, 3, 8, d1, d2);
        const double p = rep % 3 == 0 ? 2.0 : 1.0;
        const double f = wasserstein_correlation(pi, p, {}, Direction::forward).value;
        const double b = wasserstein_correlation(pi, p, {}, Direction::backward).value;
        if (f >= 0.0 && f <= 1.0 && b >= 0.0 && b <= 1.0) ++random_ok;

        const auto mu = oracle::random_measure(rng, 1 + rep % 6, d1);
        const auto nu = oracle::random_measure(rng, 2 + rep % 6, d2);
        const double v0 = wasserstein_correlation(DiscreteCoupling::product(mu, nu), p).value;
        worst_product = std::max(worst_product, v0);
        if (v0 < 1e-9) ++product_ok;

        const double v1 = wasserstein_correlation(dirac_conditional(rng, 2 + rep % 9, d1, d2), p).value;
        worst_dirac = std::max(worst_dirac, std::abs(v1 - 1.0));
        if (std::abs(v1 - 1.0) <= 1e-9) ++dirac_ok;
    }
    return verdict(random_ok == 500 && product_ok == 500 && dirac_ok == 500,
                   fmt::format("in [0,1]: {}/500, products < 1e-9: {}/500 (max {:.2e}), "
                               "Dirac conditionals = 1: {}/500 (max dev {:.2e})",
                               random_ok, product_ok, worst_product, dirac_ok, worst_dirac));
}

Outcome criterion4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u;
    std::size_t agree = 0;
    double worst = 0.0;
    // 140 general-weight instances up to 5 x 5 against every polytope vertex
    for (int rep = 0; rep < 140; ++rep) {
        const std::size_t m = 1 + rep % 5;
        const std::size_t n = 1 + (rep / 5) % 5;
        const auto mu = oracle::random_measure(rng, m, 2);
        const auto nu = oracle::random_measure(rng, n, 2);
        const auto cost = CostMatrix::euclidean(mu, nu, rep % 2 == 0 ? 1.0 : 2.0);
        const double flow = solve_transport(mu.weights(), nu.weights(), cost).cost;
        const double ref = oracle::transport_by_vertices(to_vec(mu.weights()), to_vec(nu.weights()), dense(cost));
        worst = std::max(worst, std::abs(flow - ref));
        if (std::abs(flow - ref) <= 1e-9) ++agree;
    }
    // 60 uniform n x n instances, n = 6..8: the vertices are the permutation matrices
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 6 + rep % 3;
        std::vector<double> c1(n * 2);
        std::vector<double> c2(n * 2);
        for (auto& c : c1) c = u(rng);
        for (auto& c : c2) c = u(rng);
        const auto mu = DiscreteMeasure::uniform(2, c1);
        const auto nu = DiscreteMeasure::uniform(2, c2);
        const auto cost = CostMatrix::euclidean(mu, nu, 1.0);
        const double flow = solve_transport(mu.weights(), nu.weights(), cost).cost;
        const double ref = oracle::assignment_by_permutations(n, dense(cost));
        worst = std::max(worst, std::abs(flow - ref));
        if (std::abs(flow - ref) <= 1e-9) ++agree;
    }
    std::size_t line_agree = 0;
    double worst_line = 0.0;
    SolverConfig one_d;
    one_d.method = Method::exact_1d;
    SolverConfig flow_cfg;
    flow_cfg.method = Method::exact_flow;
    for (int rep = 0; rep < 200; ++rep) {
        const auto mu = oracle::random_measure(rng, 1 + rep % 8, 1);
        const auto nu = oracle::random_measure(rng, 1 + (rep / 8) % 8, 1);
        const double p = 1.0 + 0.5 * (rep % 3);
        const double a = transport_cost(mu, nu, p, one_d).value;
        const double b = transport_cost(mu, nu, p, flow_cfg).value;
        worst_line = std::max(worst_line, std::abs(a - b));
        if (std::abs(a - b) <= 1e-9) ++line_agree;
    }
    return verdict(agree == 200 && line_agree == 200,
                   fmt::format("exact_flow vs vertex enumeration {}/200 (max diff {:.2e}); "
                               "exact_1d vs exact_flow {}/200 (max diff {:.2e})",
                               agree, worst, line_agree, worst_line));
}

Outcome criterion5() {
    std::mt19937_64 rng(5);
    constexpr int kInstances = 100;
    constexpr double kSlack = 1e-9;
    int aw_w = 0, cont = 0, four = 0, dgs = 0, norm = 0, ttilde = 0, convex = 0;
    for (int rep = 0; rep < kInstances; ++rep) {
        const std::size_t d1 = 1 + rep % 2;
        const std::size_t d2 = 1 + (rep / 2) % 2;
        auto pi = oracle::random_coupling(rng, 3, 4, 7, d1, d2);
        while (pi.second_marginal().is_dirac()) pi = oracle::random_coupling(rng, 3, 4, 7, d1, d2);
        auto other = rep % 2 == 0 ? jitter(rng, pi, 0.1) : oracle::random_coupling(rng, 3, 4, 7, d1, d2);
        while (other.second_marginal().is_dirac()) other = oracle::random_coupling(rng, 3, 4, 7, d1, d2);

        const double aw = adapted_wasserstein(pi, other, 1.0);
        if (aw + kSlack >= coupling_wasserstein(pi, other, 1.0)) ++aw_w;

        const double gap = std::abs(conditional_transport(pi, 1.0) - conditional_transport(other, 1.0));
        const double wnu = wasserstein(pi.second_marginal(), other.second_marginal(), 1.0);
        if (gap <= aw + wnu + kSlack && aw + wnu <= 2 * aw + kSlack) ++cont;

        const double f_other = mean_pairwise_distance(other.second_marginal(), 1.0);
        const double corr_gap =
            std::abs(wasserstein_correlation(pi).value - wasserstein_correlation(other).value);
        if (corr_gap <= 4 * aw / f_other + kSlack) ++four;

        const double w = wasserstein_correlation(pi).value;
        const auto line = oracle::random_coupling(rng, 4, 5, 10);
        if (line.second_marginal().is_dirac() ||
            dgs_coefficient(line) <= 2 * wasserstein_correlation(line).value + kSlack)
            ++dgs;
        if (norm_coefficient(pi, l2_norm) <= 2 * w + kSlack) ++norm;

        // grid bound on binned uniforms with a share of copied coordinates
        {
            const std::size_t d = d1;
            const std::size_t n = 60 + rep;
            std::uniform_real_distribution<double> u;
            std::vector<double> x(n * d);
            std::vector<double> y(n * d);
            const double share = 0.1 * (rep % 10);
            for (std::size_t i = 0; i < n * d; ++i) {
                x[i] = u(rng);
                y[i] = u(rng) < share ? x[i] : u(rng);
            }
            const SampleSet s(d, d, x, y);
            const GridSpec g(d, 2 + rep % 4);
            const auto binned = adapted_empirical(s, g);
            const double f_hat = mean_pairwise_distance(binned.second_marginal(), 1.0);
            if (f_hat == 0.0 ||
                wasserstein_correlation(binned).value <=
                    std::sqrt(static_cast<double>(d)) * t_tilde(ContingencyTable(s, g, g)) / f_hat + kSlack)
                ++ttilde;
        }

        // convexity on couplings with shared marginals
        {
            const auto mu = oracle::random_measure(rng, 3 + rep % 3, d1);
            const auto nu = oracle::random_measure(rng, 3 + rep % 4, d2);
            auto random_plan = [&] {
                std::uniform_real_distribution<double> u;
                std::vector<double> cost(mu.size() * nu.size());
                for (auto& c : cost) c = u(rng);
                const auto plan =
                    solve_transport(mu.weights(), nu.weights(), CostMatrix(mu.size(), nu.size(), cost));
                std::vector<double> x, y, wts;
                for (const auto& e : plan.entries) {
                    if (e.mass <= 0.0) continue;
                    x.insert(x.end(), mu.atom(e.row).begin(), mu.atom(e.row).end());
                    y.insert(y.end(), nu.atom(e.col).begin(), nu.atom(e.col).end());
                    wts.push_back(e.mass);
                }
                return DiscreteCoupling(d1, d2, x, y, wts);
            };
            const auto a = random_plan();
            const auto b = DiscreteCoupling::mixture(0.3, random_plan(), DiscreteCoupling::product(mu, nu));
            const double lambda = 0.1 + 0.8 * ((rep * 7) % 10) / 9.0;
            const auto mix = DiscreteCoupling::mixture(lambda, a, b);
            if (wasserstein_correlation(mix).value <=
                lambda * wasserstein_correlation(a).value + (1 - lambda) * wasserstein_correlation(b).value + kSlack)
                ++convex;
        }
    }
    const bool ok = aw_w == kInstances && cont == kInstances && four == kInstances && dgs == kInstances &&
                    norm == kInstances && ttilde == kInstances && convex == kInstances;
    return verdict(ok, fmt::format("AW>=W {0}/{7}, continuity 2AW {1}/{7}, 4/f bound {2}/{7}, DGS<=2W {3}/{7}, "
                                   "norm<=2W {4}/{7}, W<=sqrt(d)T/f {5}/{7}, convexity {6}/{7}",
                                   aw_w, cont, four, dgs, norm, ttilde, convex, kInstances));
}

Outcome criterion6() {
    PowerConfig cfg;
    cfg.family = Family::uniform_link;
    cfg.link = Link::identity;
    cfg.rho_grid = {0.0, 1.0};
    cfg.n = 1500;
    cfg.draws = 200;
    cfg.alpha = 0.05;
    cfg.tests = {TestKind::wasserstein};
    cfg.seed = 6;
    const auto pts = power_curve(cfg);
    const double size = pts.at(0).rate();
    const std::size_t hits = pts.at(1).rejections;
    return verdict(size <= 0.10 && hits == 200,
                   fmt::format("size {:.3f} (limit 0.10), power under X2=X1 {}/200", size, hits));
}

Outcome criterion7() {
    const auto s = generate({Family::uniform_link, Link::identity, 1.0, 10000, 7});
    const auto v = estimate_wasserstein(s, {}, Direction::forward);
    return verdict(v.value >= 0.85, fmt::format("W->={:.6f} (limit 0.85), rates grid m=22", v.value));
}

Outcome criterion8() {
    const std::size_t n = 100000;
    const GridSpec g(1, 2);
    const double eps = std::sqrt(2.0 * (9.0 * std::log(2.0) + std::log(10.0)) / static_cast<double>(n));
    const double bound = concentration_bound(eps, n, g);
    std::size_t exceed = 0;
    double largest = 0.0;
    std::uniform_real_distribution<double> u;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        auto rng = make_engine(8, seed, Stream::data);
        std::vector<std::size_t> counts(4, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = u(rng) < 0.5 ? 0 : 1;
            const std::size_t c = u(rng) < 0.5 ? 0 : 1;
            ++counts[r * 2 + c];
        }
        const double t = t_tilde(ContingencyTable(2, 2, counts));
        largest = std::max(largest, t);
        if (t >= eps) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / 2000.0;
    return verdict(bound > 0.01 && bound < 0.5 && freq <= bound,
                   fmt::format("eps={:.5f} bound={:.4f} empirical={:.4f} (max T~={:.5f})", eps, bound, freq, largest));
}

Outcome criterion9() {
    HistConfig cfg;
    cfg.n = 500;
    cfg.draws = 10000;
    cfg.seed = 9;
    const auto h = null_histogram(cfg);
    const bool finite = std::all_of(h.begin(), h.end(), [](double v) { return std::isfinite(v); });
    double mean = 0.0;
    for (double v : h) mean += v / static_cast<double>(h.size());
    double var = 0.0;
    for (double v : h) var += (v - mean) * (v - mean);
    var /= static_cast<double>(h.size() - 1);
    return verdict(h.size() == 10000 && finite && var <= 1.5,
                   fmt::format("{} values, all finite: {}, variance {:.4f} (limit 1.5)", h.size(), finite, var));
}

Outcome criterion10() {
    const char* path = std::getenv("WCORR_GALTON_CSV");
    if (path == nullptr || *path == '\0') return {Outcome::skip, "set WCORR_GALTON_CSV to a parent,child CSV"};
    const auto table = cli::read_csv_file(path);
    cli::ColumnSplit cols;
    const char* x1 = std::getenv("WCORR_GALTON_X1");
    const char* x2 = std::getenv("WCORR_GALTON_X2");
    if (table.header.size() < 2) throw cli::SchemaError("need two columns");
    cols.first = {x1 ? x1 : table.header[0]};
    cols.second = {x2 ? x2 : table.header[1]};
    const auto s = cli::select_samples(table, cols);
    const double f = estimate_wasserstein(s, {}, Direction::forward).value;
    const double b = estimate_wasserstein(s, {}, Direction::backward).value;
    return verdict(std::abs(f - 0.31) <= 0.05 && std::abs(b - 0.94) <= 0.05,
                   fmt::format("forward={:.4f} (0.31 +- 0.05) backward={:.4f} (0.94 +- 0.05), N={}", f, b, s.size()));
}

}  // namespace

int main() {
    report(1, "worked example", 1.0, criterion1);
    report(2, "Gaussian closed form", 120.0, criterion2);
    report(3, "range, product and Dirac couplings", 30.0, criterion3);
    report(4, "OT oracle equivalence", 60.0, criterion4);
    report(5, "inequality suite", 120.0, criterion5);
    report(6, "test size and power", 300.0, criterion6);
    report(7, "functional dependence", 30.0, criterion7);
    report(8, "concentration bound", 180.0, criterion8);
    report(9, "null histogram", 600.0, criterion9);
    report(10, "Galton peas", 60.0, criterion10);
    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
