#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degenerate.hpp"

namespace bandtest {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double robust_ks_statistic(const SortedSample& sample, const CdfBand& band) {
    const StepCdf fe = ecdf(sample);
    double sup = 0.0;
    for (double x : merged_knots(fe, band.lower(), band.upper())) {
        sup = std::max(sup, eval_right(fe, x) - eval_right(band.upper(), x));
        sup = std::max(sup, eval_right(band.lower(), x) - eval_right(fe, x));
        sup = std::max(sup, eval_left(fe, x) - eval_left(band.upper(), x));
        sup = std::max(sup, eval_left(band.lower(), x) - eval_left(fe, x));
    }
    return sup;
}

Decision ks_decide(double d_n, std::size_t n, double gamma) {
    if (n < 1) throw RangeError("ks_decide needs n >= 1");
    if (!(gamma > 0.0)) throw RangeError("gamma must be positive");
    return std::sqrt(static_cast<double>(n)) * d_n > gamma ? Decision::H1 : Decision::H0;
}

double robust_cvm_statistic(const SortedSample& sample, const CdfBand& band) {
    const std::size_t n = sample.size();
    const double dn = static_cast<double>(n);
    double acc = 1.0 / (12.0 * dn);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = eval_right(band.lower(), sample[i]);
        const double hi = eval_right(band.upper(), sample[i]);
        if (lo > hi) throw InfeasibleBand("band edges cross at sample point");
        const double target = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * dn);
        // Both bound sequences and the target are nondecreasing, so the
        // clipped values are automatically monotone and the pairwise
        // ordering constraints never activate.
        const double proj = std::clamp(target, lo, hi);
        acc += (target - proj) * (target - proj);
    }
    return acc;
}

double elrm_statistic(const SortedSample& sample, const MomentConstraint& constraint) {
    const std::size_t n = sample.size();
    const double dn = static_cast<double>(n);
    double lo = constraint.lower;
    double hi = constraint.upper;
    if (lo > hi) std::swap(lo, hi);

    std::vector<double> g(n);
    double mean = 0.0, gmin = kInf, gmax = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = constraint.g(sample[i]);
        mean += g[i];
        gmin = std::min(gmin, g[i]);
        gmax = std::max(gmax, g[i]);
    }
    mean /= dn;

    if (lo <= mean && mean <= hi) return 0.0;
    const double mu = mean > hi ? hi : lo;  // bind the nearer endpoint
    if (mu < gmin || mu > gmax) {
        throw InfeasibleMoment("moment target outside the convex hull of g(X)");
    }
    if (mu == gmin || mu == gmax) return kInf;  // only a degenerate vector attains it

    std::vector<double> d(n);
    double dmin = kInf, dmax = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = g[i] - mu;
        dmin = std::min(dmin, d[i]);
        dmax = std::max(dmax, d[i]);
    }

    // h(lambda) = sum d_i / (n (1 + lambda d_i)) is strictly decreasing on the
    // open interval where all weights stay positive; bisection with a Newton
    // accelerant finds the unique root.
    const double left = -1.0 / dmax;
    const double right = -1.0 / dmin;
    auto h = [&](double lambda) {
        double acc = 0.0;
        for (double di : d) acc += di / (1.0 + lambda * di);
        return acc / dn;
    };
    double a = left + 1e-12 * (right - left);
    double b = right - 1e-12 * (right - left);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (a + b);
        const double val = h(lambda);
        if (std::abs(val) < 1e-15 || b - a < 1e-15 * std::max(1.0, std::abs(lambda))) break;
        if (val > 0.0) {
            a = lambda;
        } else {
            b = lambda;
        }
    }

    double acc = 0.0;
    for (double di : d) {
        const double wi_times_n = 1.0 / (1.0 + lambda * di);
        if (!(wi_times_n > 0.0)) return kInf;
        acc += std::log(wi_times_n);
    }
    return std::max(0.0, -acc / dn);
}

double ks_normality_statistic(std::span<const double> raw) {
    const std::size_t n = raw.size();
    if (n < 2) throw RangeError("normality statistic needs n >= 2");
    std::vector<double> v(raw.begin(), raw.end());
    std::sort(v.begin(), v.end());

    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);  // ML estimator
    if (!(var > 0.0)) throw ZeroVariance("sample variance is zero");
    const double sd = std::sqrt(var);

    const double dn = static_cast<double>(n);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = standard_normal_cdf((v[i] - mean) / sd);
        sup = std::max(sup, std::abs(static_cast<double>(i + 1) / dn - phi));
        sup = std::max(sup, std::abs(static_cast<double>(i) / dn - phi));
    }
    return sup;
}

}  // namespace bandtest
