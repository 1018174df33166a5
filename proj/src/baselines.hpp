#pragma once

#include <functional>
#include <span>

#include "elrdf.hpp"
#include "step_cdf.hpp"

namespace bandtest {

// Worst-case Kolmogorov-Smirnov distance between the ECDF and the band:
// inf over CDFs in the band of sup_x |F_e(x) - F(x)|. Clipping the ECDF
// into the band attains the inf, so this is an exact finite scan.
double robust_ks_statistic(const SortedSample& sample, const CdfBand& band);

// H1 iff sqrt(n) * d_n > gamma; ties go to H0.
Decision ks_decide(double d_n, std::size_t n, double gamma);

// Worst-case Cramer-von Mises discrepancy over the band:
// 1/(12n) + sum_i (t_i - F_i*)^2 with t_i = (2i-1)/(2n) and F_i* the
// monotone-box projection of t onto the band values at the sample points.
double robust_cvm_statistic(const SortedSample& sample, const CdfBand& band);

// Scalar moment function with interval bounds: l <= sum w_i g(X_i) <= u.
struct MomentConstraint {
    std::function<double(double)> g;
    double lower = 0.0;
    double upper = 0.0;
};

// Empirical likelihood ratio statistic under a moment interval constraint.
// Zero when uniform weights already satisfy the interval; otherwise binds the
// nearer endpoint and solves the tilted-weights equation for the multiplier.
// +inf when the bound can only be met by a degenerate weight vector.
double elrm_statistic(const SortedSample& sample, const MomentConstraint& constraint);

// sup_x |F_e(x) - Phi((x - mean)/sd)| with ML-fitted Gaussian parameters.
double ks_normality_statistic(std::span<const double> raw);

}  // namespace bandtest
