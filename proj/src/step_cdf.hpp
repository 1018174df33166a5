#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace bandtest {

enum class TiePolicy {
    Error,   // reject exact duplicates
    Jitter,  // break ties by bumping repeats to the next representable value
};

// Strictly increasing observation vector; the x-grid for all statistics.
class SortedSample {
  public:
    // `values` must already be strictly increasing.
    explicit SortedSample(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

  private:
    std::vector<double> values_;
};

// Sort raw observations and resolve exact ties per policy.
SortedSample canonicalize_sample(std::span<const double> raw, TiePolicy policy = TiePolicy::Error);

// Right-continuous piecewise-constant CDF: value is levels[j] on
// [knots[j], knots[j+1]), 0 before knots[0].
class StepCdf {
  public:
    StepCdf() = default;  // flat zero function, usable as a merge sentinel
    StepCdf(std::vector<double> knots, std::vector<double> levels);

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& levels() const { return levels_; }
    bool empty() const { return knots_.empty(); }

    // Drops knots whose level repeats the previous one. Exact function, fewer knots.
    StepCdf compressed() const;

  private:
    std::vector<double> knots_;
    std::vector<double> levels_;
};

// Value at x (right-continuous convention).
double eval_right(const StepCdf& cdf, double x);
// Limit from below at x.
double eval_left(const StepCdf& cdf, double x);

StepCdf ecdf(const SortedSample& sample);

// ECDF of arbitrary raw data; duplicate values collapse into taller jumps.
StepCdf ecdf_from_raw(std::span<const double> raw);

// Sorted union of the three knot sets.
std::vector<double> merged_knots(const StepCdf& a, const StepCdf& b, const StepCdf& c);

// Pair (lower, upper) of step CDFs. A well-formed band has lower <= upper
// everywhere; crossed edges are representable (e.g. from a hand-written band
// file) and surface as InfeasibleBand when a statistic needs the band.
class CdfBand {
  public:
    CdfBand(StepCdf lower, StepCdf upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {}

    const StepCdf& lower() const { return lower_; }
    const StepCdf& upper() const { return upper_; }

  private:
    StepCdf lower_;
    StepCdf upper_;
};

// Largest violation of lower <= upper over the merged knots; <= 0 for a valid
// band. Both edges are piecewise constant, so the knot scan is exhaustive.
double band_max_crossing(const CdfBand& band);

inline bool band_is_valid(const CdfBand& band, double tol = 1e-12) {
    return band_max_crossing(band) <= tol;
}

// Probability weights on sample points; sum_target is 1 for the rich-constraint
// case and F(X_n) for the degenerate case.
struct WeightVector {
    std::vector<double> w;
    double sum_target = 1.0;

    void validate() const;
};

}  // namespace bandtest
