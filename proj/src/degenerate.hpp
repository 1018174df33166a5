#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"
#include "step_cdf.hpp"

namespace bandtest {

// Fully known null CDF, the degenerate form of the band constraint.
class NullCdf {
  public:
    static NullCdf normal(double mean, double sd);
    static NullCdf uniform(double a, double b);
    static NullCdf from_ecdf(StepCdf cdf);
    // Caller promises the callable is a CDF; monotonicity is re-checked
    // wherever spacings are formed.
    static NullCdf from_function(std::function<double(double)> eval);
    // Accepts "normal:<mean>:<sd>", "uniform:<a>:<b>", "ecdf:<file>".
    static NullCdf parse(const std::string& spec);

    double operator()(double x) const { return eval_(x); }

  private:
    explicit NullCdf(std::function<double(double)> eval) : eval_(std::move(eval)) {}
    std::function<double(double)> eval_;
};

double standard_normal_cdf(double z);

// Spacings of the null CDF at the ordered sample: w_1 = F(X_1),
// w_i = F(X_i) - F(X_{i-1}); the weights are forced once the constraint
// is degenerate. sum_target is F(X_n).
WeightVector degenerate_weights(const SortedSample& sample, const NullCdf& null);

// Partition of k*m indices into k groups of m.
struct GroupingPlan {
    std::size_t groups = 1;
    std::size_t group_size = 1;
    std::vector<std::size_t> assignment;  // permutation; group i owns slots [i*m, (i+1)*m)

    static GroupingPlan identity(std::size_t groups, std::size_t group_size);
    static GroupingPlan random(std::size_t groups, std::size_t group_size, Rng& rng);

    void validate(std::size_t n) const;
};

// Average the per-group spacings across groups, then score the averaged
// weights: -(1/m) sum_j log(m * wbar_j). Converges to log(1 + 1/m) under
// the null as the group count grows.
double grouped_statistic(std::span<const double> raw, const NullCdf& null,
                         const GroupingPlan& plan);

// CDF of a single spacing under the null: 1 - (1-w)^n. Mean is 1/(n+1).
double spacing_cdf(std::size_t n, double w);

}  // namespace bandtest
