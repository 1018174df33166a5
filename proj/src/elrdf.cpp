#include "elrdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bandtest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPinWidth = 1e-14;     // box narrower than this is treated as an equality
constexpr double kBarrierTau0 = 1.0;
constexpr double kBarrierShrink = 0.1;
constexpr double kStageNewtonTol = 1e-8;  // final stage; earlier stages track the path loosely
constexpr double kLooseNewtonTol = 1e-5;
constexpr int kMaxIterations = 500;

double weights_statistic(const std::vector<double>& w) {
    const double n = static_cast<double>(w.size());
    double acc = 0.0;
    for (double wi : w) {
        if (!(wi > 0.0)) return kInf;
        acc += std::log(n * wi);
    }
    return std::max(0.0, -acc / n);
}

std::vector<double> weights_from_cumulative(const std::vector<double>& s) {
    std::vector<double> w(s.size() + 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        w[i] = s[i] - prev;
        prev = s[i];
    }
    w.back() = 1.0 - prev;
    return w;
}

// Barrier-stage state for the cumulative-variable problem.
struct Workspace {
    const std::vector<double>& lo;
    const std::vector<double>& hi;
    std::vector<char> pinned;       // equality-pinned coordinates
    std::vector<char> fixed_lower;  // polish-phase active set
    std::vector<char> fixed_upper;
    std::vector<double> s;

    std::size_t m() const { return s.size(); }
    double n() const { return static_cast<double>(s.size() + 1); }

    bool is_fixed(std::size_t i) const { return pinned[i] || fixed_lower[i] || fixed_upper[i]; }

    double delta(std::size_t i) const {  // w_{i+1} in cumulative form, i in [0, m]
        const double left = i == 0 ? 0.0 : s[i - 1];
        const double right = i == m() ? 1.0 : s[i];
        return right - left;
    }

    // Gradient of sum(log delta) wrt s_i.
    double objective_grad(std::size_t i) const { return 1.0 / delta(i) - 1.0 / delta(i + 1); }

    double barrier_value(double tau) const {
        double v = 0.0;
        for (std::size_t i = 0; i <= m(); ++i) {
            const double d = delta(i);
            if (!(d > 0.0)) return -kInf;
            v += std::log(d);
        }
        for (std::size_t i = 0; i < m(); ++i) {
            if (is_fixed(i)) continue;
            const double a = s[i] - lo[i];
            const double b = hi[i] - s[i];
            if (!(a > 0.0) || !(b > 0.0)) return -kInf;
            v += tau * (std::log(a) + std::log(b));
        }
        return v;
    }
};

// Solves the tridiagonal system (-H) d = g restricted to non-fixed coordinates;
// fixed coordinates get d = 0. Coupling only exists between adjacent free
// coordinates, so the reduced system stays tridiagonal.
struct NewtonStep {
    std::vector<double> direction;
    double decrement_sq = 0.0;
};

NewtonStep solve_newton(const Workspace& ws, double tau, bool with_barrier) {
    const std::size_t m = ws.m();
    std::vector<std::size_t> free_idx;
    free_idx.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!ws.is_fixed(i)) free_idx.push_back(i);
    }

    NewtonStep step;
    step.direction.assign(m, 0.0);
    const std::size_t k = free_idx.size();
    if (k == 0) return step;

    std::vector<double> diag(k), off(k > 0 ? k - 1 : 0, 0.0), grad(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t i = free_idx[j];
        const double dl = ws.delta(i);
        const double dr = ws.delta(i + 1);
        double g = 1.0 / dl - 1.0 / dr;
        double h = 1.0 / (dl * dl) + 1.0 / (dr * dr);  // -(d2f/ds_i^2)
        if (with_barrier) {
            const double a = ws.s[i] - ws.lo[i];
            const double b = ws.hi[i] - ws.s[i];
            g += tau * (1.0 / a - 1.0 / b);
            h += tau * (1.0 / (a * a) + 1.0 / (b * b));
        }
        grad[j] = g;
        diag[j] = h;
        if (j + 1 < k && free_idx[j + 1] == i + 1) {
            off[j] = -1.0 / (dr * dr);  // -(d2f/ds_i ds_{i+1})
        }
    }

    // Thomas algorithm on the positive-definite tridiagonal (-H).
    std::vector<double> c(k, 0.0), d(k, 0.0);
    c[0] = off.empty() ? 0.0 : off[0] / diag[0];
    d[0] = grad[0] / diag[0];
    for (std::size_t j = 1; j < k; ++j) {
        const double sub = off[j - 1];
        const double denom = diag[j] - sub * c[j - 1];
        if (j + 1 < k) c[j] = off[j] / denom;
        d[j] = (grad[j] - sub * d[j - 1]) / denom;
    }
    for (std::size_t j = k; j-- > 0;) {
        const double dj = d[j] - (j + 1 < k ? c[j] * d[j + 1] : 0.0);
        d[j] = dj;
        step.direction[free_idx[j]] = dj;
        step.decrement_sq += grad[j] * dj;
    }
    if (step.decrement_sq < 0.0) step.decrement_sq = 0.0;
    return step;
}

// Largest step keeping every barrier argument at >= 1% of its current value.
double fraction_to_boundary(const Workspace& ws, const std::vector<double>& d, bool with_barrier) {
    const std::size_t m = ws.m();
    double alpha = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
        const double slope = (i == m ? 0.0 : d[i]) - (i == 0 ? 0.0 : d[i - 1]);
        if (slope < 0.0) alpha = std::min(alpha, 0.99 * ws.delta(i) / -slope);
    }
    if (with_barrier) {
        for (std::size_t i = 0; i < m; ++i) {
            if (ws.is_fixed(i)) continue;
            if (d[i] < 0.0) alpha = std::min(alpha, 0.99 * (ws.s[i] - ws.lo[i]) / -d[i]);
            if (d[i] > 0.0) alpha = std::min(alpha, 0.99 * (ws.hi[i] - ws.s[i]) / d[i]);
        }
    }
    return alpha;
}

// Damped Newton iterations until the decrement drops below tol, the step size
// underflows, or the objective improvement sinks into floating-point noise.
// Returns false once the global iteration budget is exhausted.
bool newton_loop(Workspace& ws, double tau, bool with_barrier, double tol, int& iterations) {
    int stalls = 0;
    for (int it = 0; it < 60; ++it) {
        const NewtonStep step = solve_newton(ws, tau, with_barrier);
        if (std::sqrt(step.decrement_sq) < tol) return true;
        if (iterations >= kMaxIterations) return false;
        ++iterations;

        double alpha = fraction_to_boundary(ws, step.direction, with_barrier);
        const double phi0 = ws.barrier_value(with_barrier ? tau : 0.0);
        std::vector<double> base = ws.s;
        double improvement = -1.0;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < ws.m(); ++i) ws.s[i] = base[i] + alpha * step.direction[i];
            const double phi = ws.barrier_value(with_barrier ? tau : 0.0);
            if (phi >= phi0 + 1e-4 * alpha * step.decrement_sq) {
                improvement = phi - phi0;
                break;
            }
            alpha *= 0.5;
        }
        if (improvement < 0.0) {
            ws.s = base;
            return true;  // step size underflow: accept current iterate
        }
        if (improvement <= 1e-13 * (1.0 + std::abs(phi0))) {
            if (++stalls >= 2) return true;
        } else {
            stalls = 0;
        }
    }
    return true;
}

ElrdfResult result_from_workspace(const Workspace& ws, int iterations, double kkt) {
    ElrdfResult res;
    res.weights.w = weights_from_cumulative(ws.s);
    res.weights.sum_target = 1.0;
    res.statistic = weights_statistic(res.weights.w);
    res.kkt_residual = kkt;
    res.iterations = iterations;
    return res;
}

// Fix the near-active constraints, re-solve the equality-constrained problem
// exactly, and verify multiplier signs; repeats until the active set settles.
double polish(Workspace& ws, double tau_final, int& iterations) {
    const std::size_t m = ws.m();
    const double theta = std::max(1e-9, 10.0 * std::sqrt(tau_final));
    for (int round = 0; round < 10; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (ws.pinned[i]) continue;
            const bool lo_act = ws.s[i] - ws.lo[i] <= theta * std::max(1.0, std::abs(ws.lo[i]));
            const bool hi_act = ws.hi[i] - ws.s[i] <= theta * std::max(1.0, std::abs(ws.hi[i]));
            if (lo_act != static_cast<bool>(ws.fixed_lower[i]) ||
                hi_act != static_cast<bool>(ws.fixed_upper[i])) {
                changed = true;
            }
            ws.fixed_lower[i] = lo_act;
            ws.fixed_upper[i] = hi_act;
            if (lo_act) ws.s[i] = ws.lo[i];
            if (hi_act) ws.s[i] = ws.hi[i];
        }
        newton_loop(ws, 0.0, false, 1e-13, iterations);

        // Release constraints whose multiplier sign is wrong. The freed
        // coordinate restarts strictly between its neighbours so the spacing
        // logs stay finite; a geometrically blocked release stays active.
        bool sign_ok = true;
        for (std::size_t i = 0; i < m; ++i) {
            if (ws.pinned[i]) continue;
            const double g = ws.objective_grad(i);
            const bool free_lower = ws.fixed_lower[i] && g > 1e-12;
            const bool free_upper = ws.fixed_upper[i] && g < -1e-12;
            if (!free_lower && !free_upper) continue;
            const double left = std::max(ws.lo[i], i == 0 ? 0.0 : ws.s[i - 1]);
            const double right = std::min(ws.hi[i], i + 1 == m ? 1.0 : ws.s[i + 1]);
            if (!(left < right)) continue;
            ws.fixed_lower[i] = 0;
            ws.fixed_upper[i] = 0;
            ws.s[i] = 0.5 * (left + right);
            sign_ok = false;
        }
        // Re-clamp free coordinates that drifted outside their box.
        for (std::size_t i = 0; i < m; ++i) {
            if (ws.is_fixed(i)) continue;
            if (ws.s[i] < ws.lo[i]) {
                ws.s[i] = ws.lo[i];
                ws.fixed_lower[i] = 1;
                changed = true;
            } else if (ws.s[i] > ws.hi[i]) {
                ws.s[i] = ws.hi[i];
                ws.fixed_upper[i] = 1;
                changed = true;
            }
        }
        if (sign_ok && !changed && round > 0) break;
    }

    // Projected KKT residual of the original problem.
    double kkt = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (ws.pinned[i]) continue;
        const double g = ws.objective_grad(i);
        const bool lo_act = ws.fixed_lower[i];
        const bool hi_act = ws.fixed_upper[i];
        if (lo_act) {
            kkt = std::max(kkt, g);  // need g <= 0
        } else if (hi_act) {
            kkt = std::max(kkt, -g);  // need g >= 0
        } else {
            kkt = std::max(kkt, std::abs(g));
        }
        kkt = std::max(kkt, ws.lo[i] - ws.s[i]);
        kkt = std::max(kkt, ws.s[i] - ws.hi[i]);
    }
    return std::max(kkt, 0.0);
}

}  // namespace

TightenedBounds tighten_bounds(const SortedSample& sample, const CdfBand& band) {
    const std::size_t n = sample.size();
    TightenedBounds tb;
    if (n < 2) {
        tb.feasibility = Feasibility::InteriorFeasible;
        return tb;
    }
    const std::size_t m = n - 1;
    tb.lower.resize(m);
    tb.upper.resize(m);

    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        running = std::max(running, eval_right(band.lower(), sample[i]));
        tb.lower[i] = running;
    }
    double cap = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        cap = std::min(cap, eval_right(band.upper(), sample[i]));
        tb.upper[i] = cap;
    }

    for (std::size_t i = 0; i < m; ++i) {
        if (tb.lower[i] > tb.upper[i]) {
            tb.feasibility = Feasibility::Infeasible;
            return tb;
        }
    }
    // Interior: some strictly increasing s with positive first and final weights.
    bool interior = tb.upper[0] > 0.0 && tb.lower[m - 1] < 1.0;
    for (std::size_t i = 0; interior && i + 1 < m; ++i) {
        if (!(tb.lower[i] < tb.upper[i + 1])) interior = false;
    }
    tb.feasibility = interior ? Feasibility::InteriorFeasible : Feasibility::BoundaryOnly;
    return tb;
}

ElrdfResult solve_elrdf(const SortedSample& sample, const CdfBand& band, double tol) {
    if (!(tol > 0.0)) throw RangeError("tol must be positive");
    const std::size_t n = sample.size();
    ElrdfResult res;
    if (n == 1) {
        res.weights.w = {1.0};
        return res;
    }

    const TightenedBounds tb = tighten_bounds(sample, band);
    const std::size_t m = n - 1;
    if (tb.feasibility == Feasibility::Infeasible) {
        throw InfeasibleBand("no CDF in the band is compatible with the sample");
    }
    if (tb.feasibility == Feasibility::BoundaryOnly) {
        // Likelihood is zero at every feasible point; report the minimal one.
        res.weights.w = weights_from_cumulative(tb.lower);
        res.statistic = kInf;
        return res;
    }

    // Uniform weights feasible: the unconstrained maximum, statistic exactly 0.
    bool uniform_ok = true;
    for (std::size_t i = 0; i < m && uniform_ok; ++i) {
        const double si = static_cast<double>(i + 1) / static_cast<double>(n);
        uniform_ok = tb.lower[i] <= si && si <= tb.upper[i];
    }
    if (uniform_ok) {
        res.weights.w.assign(n, 1.0 / static_cast<double>(n));
        return res;
    }

    Workspace ws{tb.lower, tb.upper, std::vector<char>(m, 0), std::vector<char>(m, 0),
                 std::vector<char>(m, 0), std::vector<double>(m, 0.0)};
    std::size_t pinned_count = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (tb.upper[i] - tb.lower[i] <= kPinWidth) {
            ws.pinned[i] = 1;
            ws.s[i] = 0.5 * (tb.lower[i] + tb.upper[i]);
            ++pinned_count;
        }
    }

    // Initial point: chase the uniform cumulative i/n inside each box while
    // keeping a quarter-gap margin from the bounds and from the predecessor.
    double prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (ws.pinned[i]) {
            prev = ws.s[i];
            continue;
        }
        const double lo = std::max(tb.lower[i], prev);
        const double hi = tb.upper[i];
        const double margin = 0.25 * (hi - lo);
        const double target = static_cast<double>(i + 1) / static_cast<double>(n);
        ws.s[i] = std::clamp(target, lo + margin, hi - margin);
        prev = ws.s[i];
    }

    int iterations = 0;
    double tau = kBarrierTau0;
    if (pinned_count < m) {
        for (;;) {
            // duality-gap bound for the box barrier: 2(n-1) * tau
            const bool final_stage = 2.0 * static_cast<double>(m) * tau < tol;
            const double stage_tol = final_stage ? kStageNewtonTol : kLooseNewtonTol;
            if (!newton_loop(ws, tau, true, stage_tol, iterations)) {
                throw MaxIterationsExceeded("barrier solve exceeded " +
                                                std::to_string(kMaxIterations) + " iterations",
                                            result_from_workspace(ws, iterations, kInf));
            }
            if (final_stage) break;
            tau *= kBarrierShrink;
        }
    }
    const double kkt = polish(ws, tau, iterations);
    return result_from_workspace(ws, iterations, kkt);
}

double elrdf_statistic(const WeightVector& w) { return weights_statistic(w.w); }

Decision elrdf_decide(double statistic, double eta) {
    return statistic > eta ? Decision::H1 : Decision::H0;
}

double grid_oracle_solve(const SortedSample& sample, const CdfBand& band, double step) {
    const std::size_t n = sample.size();
    if (n > 4) throw RangeError("grid oracle supports n <= 4");
    if (!(step > 0.0 && step <= 0.1)) throw RangeError("step must lie in (0, 0.1]");
    if (n == 1) return 0.0;

    const std::size_t m = n - 1;
    std::vector<double> lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = eval_right(band.lower(), sample[i]);
        hi[i] = eval_right(band.upper(), sample[i]);
    }

    // Independent feasibility check: greedy nondecreasing assignment.
    double reach = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        reach = std::max(reach, lo[i]);
        if (reach > hi[i]) throw InfeasibleBand("no CDF in the band is compatible with the sample");
    }

    const long grid_max = static_cast<long>(std::floor(1.0 / step + 1e-9));
    double best_product = 0.0;
    std::vector<long> idx(m);

    auto recurse = [&](auto&& self, std::size_t depth, long min_index, double s_prev,
                       double partial) -> void {
        const long from = std::max(min_index, static_cast<long>(std::ceil(lo[depth] / step - 1e-9)));
        const long to = std::min(grid_max, static_cast<long>(std::floor(hi[depth] / step + 1e-9)));
        for (long k = from; k <= to; ++k) {
            const double s = static_cast<double>(k) * step;
            const double p = partial * (s - s_prev);
            if (p <= 0.0) continue;
            if (depth + 1 == m) {
                const double full = p * (1.0 - s);
                if (full > best_product) best_product = full;
            } else {
                self(self, depth + 1, k, s, p);
            }
        }
    };
    recurse(recurse, 0, 0, 0.0, 1.0);

    if (best_product <= 0.0) return kInf;
    const double dn = static_cast<double>(n);
    return std::max(0.0, -std::log(dn) - std::log(best_product) / dn);
}

}  // namespace bandtest
