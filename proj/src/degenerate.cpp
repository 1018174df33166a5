#include "degenerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include "io.hpp"

namespace bandtest {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

NullCdf NullCdf::normal(double mean, double sd) {
    if (!(sd > 0.0)) throw RangeError("normal null requires sd > 0");
    return NullCdf([mean, sd](double x) { return standard_normal_cdf((x - mean) / sd); });
}

NullCdf NullCdf::uniform(double a, double b) {
    if (!(a < b)) throw RangeError("uniform null requires a < b");
    return NullCdf([a, b](double x) { return std::clamp((x - a) / (b - a), 0.0, 1.0); });
}

NullCdf NullCdf::from_ecdf(StepCdf cdf) {
    auto shared = std::make_shared<StepCdf>(std::move(cdf));
    return NullCdf([shared](double x) { return eval_right(*shared, x); });
}

NullCdf NullCdf::from_function(std::function<double(double)> eval) {
    return NullCdf(std::move(eval));
}

NullCdf NullCdf::parse(const std::string& spec) {
    const auto first = spec.find(':');
    if (first == std::string::npos) throw ParseError("null spec needs 'kind:...': " + spec);
    const std::string kind = spec.substr(0, first);
    const std::string rest = spec.substr(first + 1);
    if (kind == "ecdf") {
        return from_ecdf(ecdf_from_raw(load_sample_file(rest)));
    }
    const auto second = rest.find(':');
    if (second == std::string::npos) throw ParseError("null spec needs two parameters: " + spec);
    double p1 = 0.0, p2 = 0.0;
    try {
        p1 = std::stod(rest.substr(0, second));
        p2 = std::stod(rest.substr(second + 1));
    } catch (const std::exception&) {
        throw ParseError("bad numeric parameter in null spec: " + spec);
    }
    if (kind == "normal") return normal(p1, p2);
    if (kind == "uniform") return uniform(p1, p2);
    throw ParseError("unknown null kind '" + kind + "'");
}

WeightVector degenerate_weights(const SortedSample& sample, const NullCdf& null) {
    const std::size_t n = sample.size();
    WeightVector wv;
    wv.w.resize(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = null(sample[i]);
        wv.w[i] = fi - prev;
        if (wv.w[i] < 0.0) throw NonMonotoneCdf("null CDF decreases across sample points");
        prev = fi;
    }
    wv.sum_target = prev;
    return wv;
}

GroupingPlan GroupingPlan::identity(std::size_t groups, std::size_t group_size) {
    GroupingPlan plan{groups, group_size, {}};
    plan.assignment.resize(groups * group_size);
    std::iota(plan.assignment.begin(), plan.assignment.end(), std::size_t{0});
    return plan;
}

GroupingPlan GroupingPlan::random(std::size_t groups, std::size_t group_size, Rng& rng) {
    GroupingPlan plan = identity(groups, group_size);
    // Fisher-Yates over the index permutation.
    for (std::size_t i = plan.assignment.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i));
        std::swap(plan.assignment[i - 1], plan.assignment[std::min(j, i - 1)]);
    }
    return plan;
}

void GroupingPlan::validate(std::size_t n) const {
    if (groups == 0 || group_size == 0) throw RangeError("groups and group size must be positive");
    if (groups * group_size != n) {
        throw RangeError("grouping plan covers " + std::to_string(groups * group_size) +
                         " samples, input has " + std::to_string(n));
    }
    std::vector<char> seen(n, 0);
    for (std::size_t idx : assignment) {
        if (idx >= n || seen[idx]) throw RangeError("grouping assignment is not a permutation");
        seen[idx] = 1;
    }
}

double grouped_statistic(std::span<const double> raw, const NullCdf& null,
                         const GroupingPlan& plan) {
    plan.validate(raw.size());
    const std::size_t k = plan.groups;
    const std::size_t m = plan.group_size;

    std::vector<double> averaged(m, 0.0);
    std::vector<double> group(m);
    for (std::size_t g = 0; g < k; ++g) {
        for (std::size_t j = 0; j < m; ++j) group[j] = raw[plan.assignment[g * m + j]];
        std::sort(group.begin(), group.end());
        double prev = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double fj = null(group[j]);
            if (fj < prev) throw NonMonotoneCdf("null CDF decreases across sample points");
            averaged[j] += fj - prev;
            prev = fj;
        }
    }

    const double dm = static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double wbar = averaged[j] / static_cast<double>(k);
        if (!(wbar > 0.0)) return std::numeric_limits<double>::infinity();
        acc += std::log(dm * wbar);
    }
    return -acc / dm;
}

double spacing_cdf(std::size_t n, double w) {
    if (n < 1) throw RangeError("spacing law needs n >= 1");
    if (!(w >= 0.0 && w <= 1.0)) throw RangeError("spacing argument must lie in [0, 1]");
    return 1.0 - std::pow(1.0 - w, static_cast<double>(n));
}

}  // namespace bandtest
