#include "step_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bandtest {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i - 1] < v[i])) return false;
    }
    return true;
}

}  // namespace

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw EmptyInput("sample must contain at least one observation");
    if (!strictly_increasing(values_)) {
        throw DuplicateSample("sample values must be strictly increasing");
    }
}

SortedSample canonicalize_sample(std::span<const double> raw, TiePolicy policy) {
    if (raw.empty()) throw EmptyInput("empty sample");
    std::vector<double> v(raw.begin(), raw.end());
    for (double x : v) {
        if (!std::isfinite(x)) throw RangeError("sample values must be finite");
    }
    std::stable_sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) {
            if (policy == TiePolicy::Error) {
                throw DuplicateSample("duplicate sample value " + std::to_string(v[i]));
            }
            // Jitter: one ulp above the previous entry; cascades through runs.
            v[i] = std::nextafter(v[i - 1], std::numeric_limits<double>::infinity());
        }
    }
    return SortedSample(std::move(v));
}

StepCdf::StepCdf(std::vector<double> knots, std::vector<double> levels)
    : knots_(std::move(knots)), levels_(std::move(levels)) {
    if (knots_.size() != levels_.size()) throw RangeError("knot/level size mismatch");
    if (!strictly_increasing(knots_)) throw RangeError("knots must be strictly increasing");
    double prev = 0.0;
    for (double p : levels_) {
        if (!(p >= 0.0 && p <= 1.0)) throw RangeError("levels must lie in [0, 1]");
        if (p < prev) throw RangeError("levels must be nondecreasing");
        prev = p;
    }
}

StepCdf StepCdf::compressed() const {
    std::vector<double> k, l;
    k.reserve(knots_.size());
    l.reserve(levels_.size());
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        double prev = l.empty() ? 0.0 : l.back();
        if (i == 0 || levels_[i] != prev) {
            k.push_back(knots_[i]);
            l.push_back(levels_[i]);
        }
    }
    return StepCdf(std::move(k), std::move(l));
}

double eval_right(const StepCdf& cdf, double x) {
    const auto& k = cdf.knots();
    auto it = std::upper_bound(k.begin(), k.end(), x);
    if (it == k.begin()) return 0.0;
    return cdf.levels()[static_cast<std::size_t>(it - k.begin()) - 1];
}

double eval_left(const StepCdf& cdf, double x) {
    const auto& k = cdf.knots();
    auto it = std::lower_bound(k.begin(), k.end(), x);
    if (it == k.begin()) return 0.0;
    return cdf.levels()[static_cast<std::size_t>(it - k.begin()) - 1];
}

StepCdf ecdf(const SortedSample& sample) {
    const std::size_t n = sample.size();
    std::vector<double> levels(n);
    for (std::size_t i = 0; i < n; ++i) {
        levels[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
    return StepCdf(sample.values(), std::move(levels));
}

StepCdf ecdf_from_raw(std::span<const double> raw) {
    if (raw.empty()) throw EmptyInput("empty sample");
    std::vector<double> v(raw.begin(), raw.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    std::vector<double> knots, levels;
    knots.reserve(v.size());
    levels.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!knots.empty() && v[i] == knots.back()) {
            levels.back() = static_cast<double>(i + 1) / n;
        } else {
            knots.push_back(v[i]);
            levels.push_back(static_cast<double>(i + 1) / n);
        }
    }
    return StepCdf(std::move(knots), std::move(levels));
}

std::vector<double> merged_knots(const StepCdf& a, const StepCdf& b, const StepCdf& c) {
    std::vector<double> out;
    out.reserve(a.knots().size() + b.knots().size() + c.knots().size());
    out.insert(out.end(), a.knots().begin(), a.knots().end());
    out.insert(out.end(), b.knots().begin(), b.knots().end());
    out.insert(out.end(), c.knots().begin(), c.knots().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double band_max_crossing(const CdfBand& band) {
    double worst = 0.0;  // both edges are 0 before the first knot
    for (double x : merged_knots(band.lower(), band.upper(), StepCdf())) {
        worst = std::max(worst, eval_right(band.lower(), x) - eval_right(band.upper(), x));
    }
    return worst;
}

void WeightVector::validate() const {
    if (w.empty()) throw EmptyInput("empty weight vector");
    double sum = 0.0;
    for (double wi : w) {
        if (wi < 0.0) throw RangeError("negative weight");
        sum += wi;
    }
    if (std::abs(sum - sum_target) > 1e-10) {
        throw RangeError("weights sum to " + std::to_string(sum) + ", expected " +
                         std::to_string(sum_target));
    }
}

}  // namespace bandtest
