#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "elrdf.hpp"
#include "support.hpp"

using namespace bandtest;
using namespace testsupport;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double objective(const std::vector<double>& s) {
    double acc = std::log(s.front());
    for (std::size_t i = 1; i < s.size(); ++i) acc += std::log(s[i] - s[i - 1]);
    return acc + std::log(1.0 - s.back());
}
}  // namespace

TEST_CASE("tighten bounds: vacuous band") {
    const SortedSample s({0.0, 1.0, 2.0});
    const TightenedBounds tb = tighten_bounds(s, vacuous_band());
    CHECK(tb.feasibility == Feasibility::InteriorFeasible);
    CHECK(tb.lower == std::vector<double>{0.0, 0.0});
    CHECK(tb.upper == std::vector<double>{1.0, 1.0});
}

TEST_CASE("tighten bounds: running max of the lower edge") {
    // lower edge value 0.5 at X_1 then 0.2 at X_2 would decrease; as a valid
    // StepCdf the edge keeps 0.5, and the running max preserves it.
    const SortedSample s({0.0, 1.0, 2.0});
    const CdfBand band(StepCdf({0.0}, {0.5}), constant_one_cdf());
    const TightenedBounds tb = tighten_bounds(s, band);
    CHECK(tb.lower == std::vector<double>{0.5, 0.5});
}

TEST_CASE("tighten bounds: crossed bounds are infeasible") {
    // lower reaches 0.9 at X_2 while the upper edge is capped at 0.8 there
    const TightenedBounds cross = tighten_bounds(
        SortedSample({0.0, 1.0, 2.0}),
        CdfBand(StepCdf({0.0, 0.9}, {0.0, 0.9}), StepCdf({0.0, 1.5}, {0.8, 1.0})));
    CHECK(cross.upper == std::vector<double>{0.8, 0.8});
    CHECK(cross.feasibility == Feasibility::Infeasible);

    // pinned bounds are tight but still interior-solvable
    const TightenedBounds pinned = tighten_bounds(
        SortedSample({0.0, 1.0}), CdfBand(StepCdf({-1.0}, {0.9}), StepCdf({-1.0}, {0.9})));
    CHECK(pinned.lower[0] == 0.9);
    CHECK(pinned.upper[0] == 0.9);
    CHECK(pinned.feasibility == Feasibility::InteriorFeasible);
}

TEST_CASE("solve: vacuous band gives uniform weights and exact zero") {
    const SortedSample s({1.0, 4.0, 4.5, 9.0, 12.0});
    const ElrdfResult res = solve_elrdf(s, vacuous_band());
    CHECK(res.statistic == 0.0);
    CHECK(res.iterations == 0);
    for (double w : res.weights.w) CHECK(w == 0.2);
}

TEST_CASE("solve: n=2 box example has the closed form") {
    const SortedSample s({0.0, 1.0});
    const CdfBand band(StepCdf({0.0}, {0.8}), StepCdf({0.0, 1.0}, {0.9, 1.0}));
    const ElrdfResult res = solve_elrdf(s, band);
    CHECK(res.statistic == doctest::Approx(0.223144).epsilon(1e-6));
    CHECK(res.weights.w[0] == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(res.weights.w[1] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(res.kkt_residual <= 1e-8);
}

TEST_CASE("solve: degenerate band reproduces the null spacings") {
    const SortedSample s({0.2, 0.5, 0.9});
    const std::vector<double> g{0.2, 0.5, 1.0};
    const CdfBand band(StepCdf(s.values(), g), StepCdf(s.values(), g));
    const ElrdfResult res = solve_elrdf(s, band);
    CHECK(res.weights.w[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(res.weights.w[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(res.weights.w[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.statistic ==
          doctest::Approx(-(std::log(3 * 0.2) + std::log(3 * 0.3) + std::log(3 * 0.5)) / 3.0)
              .epsilon(1e-12));
}

TEST_CASE("solve: single observation is trivially unconstrained") {
    const ElrdfResult res = solve_elrdf(SortedSample({3.0}), vacuous_band());
    CHECK(res.statistic == 0.0);
    CHECK(res.weights.w == std::vector<double>{1.0});
}

TEST_CASE("solve: boundary-only feasibility yields +inf") {
    // upper edge still 0 at X_1 forces w_1 = 0
    const SortedSample s({0.0, 1.0, 2.0});
    const CdfBand band(StepCdf(), StepCdf({0.5}, {1.0}));
    const TightenedBounds tb = tighten_bounds(s, band);
    CHECK(tb.feasibility == Feasibility::BoundaryOnly);
    CHECK(solve_elrdf(s, band).statistic == kInf);
}

TEST_CASE("solve: infeasible band throws") {
    const SortedSample s({0.0, 1.0, 2.0});
    const CdfBand band(StepCdf({0.0, 0.9}, {0.0, 0.9}), StepCdf({0.0, 1.5}, {0.8, 1.0}));
    CHECK_THROWS_AS(solve_elrdf(s, band), InfeasibleBand);
}

TEST_CASE("statistic of explicit weight vectors") {
    CHECK(elrdf_statistic({{0.25, 0.25, 0.25, 0.25}, 1.0}) == 0.0);
    CHECK(elrdf_statistic({{0.8, 0.2}, 1.0}) == doctest::Approx(0.223144).epsilon(1e-6));
    CHECK(elrdf_statistic({{0.0, 1.0}, 1.0}) == kInf);
}

TEST_CASE("decision rule boundary goes to H0") {
    CHECK(elrdf_decide(0.0, 0.0) == Decision::H0);
    CHECK(elrdf_decide(0.3, 0.1) == Decision::H1);
    CHECK(elrdf_decide(kInf, 1e18) == Decision::H1);
}

TEST_CASE("grid oracle basics") {
    const SortedSample s({0.0, 1.0});
    CHECK(grid_oracle_solve(s, vacuous_band(), 1e-3) == doctest::Approx(0.0).epsilon(1e-6));
    const CdfBand band(StepCdf({0.0}, {0.8}), StepCdf({0.0, 1.0}, {0.9, 1.0}));
    CHECK(grid_oracle_solve(s, band, 1e-3) == doctest::Approx(0.223144).epsilon(5e-3));
    const CdfBand crossed(StepCdf({0.0, 0.9}, {0.0, 0.9}), StepCdf({0.0, 1.5}, {0.8, 1.0}));
    CHECK_THROWS_AS(grid_oracle_solve(SortedSample({0.0, 1.0, 2.0}), crossed, 1e-3),
                    InfeasibleBand);
    CHECK_THROWS_AS(grid_oracle_solve(SortedSample({0.0, 1.0, 2.0, 3.0, 4.0}), vacuous_band(), 1e-3),
                    RangeError);
    CHECK_THROWS_AS(grid_oracle_solve(s, vacuous_band(), 0.5), RangeError);
}

TEST_CASE("solver agrees with the grid oracle on random instances") {
    Rng rng(7, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 3.0);
        const SolverInstance inst = random_feasible_instance(rng, std::min<std::size_t>(n, 4));
        const ElrdfResult res = solve_elrdf(inst.sample, inst.band);
        const double oracle = grid_oracle_solve(inst.sample, inst.band, 1e-3);
        CHECK(std::abs(res.statistic - oracle) <= 5e-3);
        CHECK(res.kkt_residual <= 1e-8);
    }
}

TEST_CASE("widening the band never increases the statistic") {
    Rng rng(11, 2);
    for (int trial = 0; trial < 30; ++trial) {
        const SolverInstance inst = random_feasible_instance(rng, 4);
        const double base = solve_elrdf(inst.sample, inst.band).statistic;

        std::vector<double> lo, hi;
        for (double v : inst.band.lower().levels()) lo.push_back(std::max(0.0, v - 0.05));
        for (double v : inst.band.upper().levels()) hi.push_back(std::min(1.0, v + 0.05));
        const CdfBand wider(StepCdf(inst.band.lower().knots(), lo),
                            StepCdf(inst.band.upper().knots(), hi));
        const double widened = solve_elrdf(inst.sample, wider).statistic;
        CHECK(widened <= base + 1e-9);
    }
}

TEST_CASE("statistic is zero exactly when the uniform cumulative fits") {
    Rng rng(13, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const SolverInstance inst = random_feasible_instance(rng, 3);
        const TightenedBounds tb = tighten_bounds(inst.sample, inst.band);
        bool fits = true;
        for (std::size_t i = 0; i < tb.lower.size(); ++i) {
            const double si = static_cast<double>(i + 1) / 3.0;
            fits = fits && tb.lower[i] <= si && si <= tb.upper[i];
        }
        const double stat = solve_elrdf(inst.sample, inst.band).statistic;
        CHECK((stat == 0.0) == fits);
    }
}

TEST_CASE("KKT stationarity verified with central finite differences") {
    Rng rng(17, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const SolverInstance inst = random_feasible_instance(rng, 4);
        const ElrdfResult res = solve_elrdf(inst.sample, inst.band);
        if (!std::isfinite(res.statistic)) continue;
        const TightenedBounds tb = tighten_bounds(inst.sample, inst.band);

        std::vector<double> s(res.weights.w.size() - 1);
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            acc += res.weights.w[i];
            s[i] = acc;
        }
        const double h = 1e-6;
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<double> up = s, dn = s;
            up[i] += h;
            dn[i] -= h;
            if (up[i] >= (i + 1 < s.size() ? s[i + 1] : 1.0) || dn[i] <= (i ? s[i - 1] : 0.0)) {
                continue;  // finite difference would cross a neighbour
            }
            const double fd = (objective(up) - objective(dn)) / (2.0 * h);
            const double analytic = 1.0 / res.weights.w[i] - 1.0 / res.weights.w[i + 1];
            CHECK(std::abs(fd - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));

            // projected KKT residual computed from the numerical gradient
            const bool lo_active = s[i] - tb.lower[i] <= 1e-7;
            const bool hi_active = tb.upper[i] - s[i] <= 1e-7;
            double viol = 0.0;
            if (lo_active) {
                viol = std::max(0.0, fd);
            } else if (hi_active) {
                viol = std::max(0.0, -fd);
            } else {
                viol = std::abs(fd);
            }
            CHECK(viol <= 1e-4);  // limited by finite-difference accuracy
        }
    }
}

TEST_CASE("solver handles very small tolerances") {
    const SortedSample s({0.0, 1.0});
    const CdfBand band(StepCdf({0.0}, {0.8}), StepCdf({0.0, 1.0}, {0.9, 1.0}));
    const ElrdfResult res = solve_elrdf(s, band, 1e-30);
    CHECK(res.statistic == doctest::Approx(0.223144).epsilon(1e-6));
}

TEST_CASE("median statistic shrinks with sample size under a true null") {
    // CDF strictly inside the band: standard normal with a +-0.05 margin
    std::vector<double> knots, lo, hi;
    for (int i = -60; i <= 60; ++i) {
        const double x = 0.1 * i;
        const double p = 0.5 * std::erfc(-x / std::sqrt(2.0));
        knots.push_back(x);
        lo.push_back(std::max(0.0, p - 0.05));
        hi.push_back(std::min(1.0, p + 0.05));
    }
    const CdfBand band(StepCdf(knots, lo), StepCdf(knots, hi));

    auto median_stat = [&](std::size_t n, std::uint64_t stream0) {
        std::vector<double> stats;
        for (int t = 0; t < 120; ++t) {
            Rng rng(5, stream0 + static_cast<std::uint64_t>(t));
            std::vector<double> draws(n);
            for (auto& d : draws) d = rng.gaussian();
            stats.push_back(
                solve_elrdf(canonicalize_sample(draws, TiePolicy::Jitter), band).statistic);
        }
        return median_of(stats);
    };
    const double m50 = median_stat(50, 1000);
    const double m400 = median_stat(400, 2000);
    CHECK(m400 <= m50);
}
