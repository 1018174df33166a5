#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace testsupport {

using namespace bandtest;

StepCdf constant_one_cdf() {
    return StepCdf({std::numeric_limits<double>::lowest()}, {1.0});
}

CdfBand vacuous_band() { return CdfBand(StepCdf(), constant_one_cdf()); }

double ks_distance_to_cdf(std::vector<double> draws, const std::function<double(double)>& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - f));
        sup = std::max(sup, std::abs(static_cast<double>(i) / n - f));
    }
    return sup;
}

namespace {

double directed_ks(const std::vector<double>& a, const std::vector<double>& b, bool both_sides) {
    // a, b sorted; sup of F_a - F_b (or |.| when both_sides).
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() || j < b.size()) {
        const double x = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double diff = static_cast<double>(i) / na - static_cast<double>(j) / nb;
        sup = std::max(sup, both_sides ? std::abs(diff) : diff);
    }
    return sup;
}

}  // namespace

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return directed_ks(a, b, true);
}

double one_sided_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return directed_ks(a, b, false);
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> isotonic_fit(const std::vector<double>& target) {
    const std::size_t n = target.size();
    std::vector<double> value;   // block means
    std::vector<double> weight;  // block sizes
    std::vector<std::size_t> last;
    for (std::size_t i = 0; i < n; ++i) {
        value.push_back(target[i]);
        weight.push_back(1.0);
        last.push_back(i);
        while (value.size() > 1 && value[value.size() - 2] >= value.back()) {
            const double w = weight[weight.size() - 2] + weight.back();
            const double v =
                (value[value.size() - 2] * weight[weight.size() - 2] + value.back() * weight.back()) /
                w;
            value.pop_back();
            weight.pop_back();
            const std::size_t e = last.back();
            last.pop_back();
            value.back() = v;
            weight.back() = w;
            last.back() = e;
        }
    }
    std::vector<double> out(n);
    std::size_t begin = 0;
    for (std::size_t b = 0; b < value.size(); ++b) {
        for (std::size_t i = begin; i <= last[b]; ++i) out[i] = value[b];
        begin = last[b] + 1;
    }
    return out;
}

std::vector<double> project_monotone_box(const std::vector<double>& target,
                                         const std::vector<double>& lo,
                                         const std::vector<double>& hi) {
    const std::size_t n = target.size();
    std::vector<double> x = target, p(n, 0.0), q(n, 0.0), y(n);
    for (int it = 0; it < 200000; ++it) {
        double change = 0.0;
        std::vector<double> tmp(n);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + p[i];
        y = isotonic_fit(tmp);
        for (std::size_t i = 0; i < n; ++i) p[i] = tmp[i] - y[i];
        for (std::size_t i = 0; i < n; ++i) {
            const double next = std::clamp(y[i] + q[i], lo[i], hi[i]);
            change = std::max(change, std::abs(next - x[i]));
            q[i] = y[i] + q[i] - next;
            x[i] = next;
        }
        if (change < 1e-14) break;
    }
    return x;
}

double rks_dp_oracle(const SortedSample& sample, const CdfBand& band) {
    const StepCdf fe = ecdf(sample);
    const std::vector<double> knots = merged_knots(fe, band.lower(), band.upper());
    constexpr int kLevels = 1001;  // lattice 0, 1/1000, ..., 1

    std::vector<double> best(kLevels, std::numeric_limits<double>::infinity());
    for (int v = 0; v < kLevels; ++v) best[v] = 0.0;  // virtual start state, no cost yet
    for (double x : knots) {
        const double t = eval_right(fe, x);
        const double lo = eval_right(band.lower(), x);
        const double hi = eval_right(band.upper(), x);
        // prefix minimum implements the monotone transition v' <= v
        double running = std::numeric_limits<double>::infinity();
        std::vector<double> next(kLevels, std::numeric_limits<double>::infinity());
        for (int v = 0; v < kLevels; ++v) {
            running = std::min(running, best[v]);
            const double level = static_cast<double>(v) / 1000.0;
            if (level < lo || level > hi) continue;
            next[v] = std::max(running, std::abs(t - level));
        }
        best = std::move(next);
    }
    double out = std::numeric_limits<double>::infinity();
    for (double v : best) out = std::min(out, v);
    return out;
}

double elrm_grid_oracle(const SortedSample& sample, double lower, double upper, double step) {
    const std::size_t n = sample.size();
    if (n > 3) throw RangeError("elrm grid oracle supports n <= 3");
    const long grid = static_cast<long>(std::lround(1.0 / step));
    double best = 0.0;
    bool found = false;
    auto consider = [&](double w1, double w2, double w3) {
        const double moment = w1 * sample[0] + (n > 1 ? w2 * sample[1] : 0.0) +
                              (n > 2 ? w3 * sample[2] : 0.0);
        if (moment < lower - 1e-12 || moment > upper + 1e-12) return;
        double product = w1;
        if (n > 1) product *= w2;
        if (n > 2) product *= w3;
        if (product <= 0.0) return;
        if (!found || product > best) {
            best = product;
            found = true;
        }
    };
    if (n == 1) {
        consider(1.0, 0.0, 0.0);
    } else if (n == 2) {
        for (long a = 0; a <= grid; ++a) {
            const double w1 = static_cast<double>(a) * step;
            consider(w1, 1.0 - w1, 0.0);
        }
    } else {
        for (long a = 0; a <= grid; ++a) {
            const double w1 = static_cast<double>(a) * step;
            for (long b = 0; a + b <= grid; ++b) {
                const double w2 = static_cast<double>(b) * step;
                consider(w1, w2, 1.0 - w1 - w2);
            }
        }
    }
    if (!found) return std::numeric_limits<double>::infinity();
    const double dn = static_cast<double>(n);
    return std::max(0.0, -std::log(dn) - std::log(best) / dn);
}

SolverInstance random_feasible_instance(Rng& rng, std::size_t n) {
    std::vector<double> xs(n);
    double x = 0.0;
    for (auto& v : xs) {
        x += 0.2 + rng.uniform01();
        v = x;
    }
    SortedSample sample(xs);

    const std::size_t m = n - 1;
    std::vector<double> lo(m), hi(m);
    auto to_lattice = [](double v) { return std::round(v * 1000.0) / 1000.0; };
    for (std::size_t i = 0; i < m; ++i) {
        // anchors separated by at least 0.32/m, half-widths capped so that
        // consecutive boxes never force a tie
        const double c =
            0.1 + 0.8 * (static_cast<double>(i) + rng.uniform(0.2, 0.8)) / static_cast<double>(m);
        const double h = rng.uniform(0.02, 0.035);
        lo[i] = to_lattice(c - h);
        hi[i] = to_lattice(c + h);
    }
    for (std::size_t i = 1; i < m; ++i) lo[i] = std::max(lo[i], lo[i - 1]);
    for (std::size_t i = m - 1; i-- > 0;) hi[i] = std::min(hi[i], hi[i + 1]);

    std::vector<double> lower_levels(n), upper_levels(n);
    for (std::size_t i = 0; i < m; ++i) {
        lower_levels[i] = lo[i];
        upper_levels[i] = hi[i];
    }
    lower_levels[n - 1] = lo[m - 1];
    upper_levels[n - 1] = 1.0;
    return SolverInstance{sample, CdfBand(StepCdf(xs, lower_levels), StepCdf(xs, upper_levels))};
}

StepCdf random_cdf_in_band(Rng& rng, const CdfBand& band) {
    const std::vector<double> knots = merged_knots(band.lower(), band.upper(), StepCdf());
    std::vector<double> levels(knots.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double lo = std::max(prev, eval_right(band.lower(), knots[i]));
        const double hi = eval_right(band.upper(), knots[i]);
        levels[i] = lo >= hi ? lo : rng.uniform(lo, hi);
        prev = levels[i];
    }
    return StepCdf(knots, levels);
}

}  // namespace testsupport
