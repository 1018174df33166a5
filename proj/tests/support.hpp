// Shared test utilities and independent oracles. Everything here verifies the
// library from the outside: no function reuses the implementation path it is
// meant to check.
#pragma once

#include <functional>
#include <vector>

#include "elrdf.hpp"
#include "rng.hpp"
#include "step_cdf.hpp"

namespace testsupport {

// Step CDF that is 1 everywhere (knot at the lowest finite double).
bandtest::StepCdf constant_one_cdf();

// Band admitting every CDF: lower identically 0, upper identically 1.
bandtest::CdfBand vacuous_band();

// One-sample Kolmogorov-Smirnov distance against a reference CDF.
double ks_distance_to_cdf(std::vector<double> draws, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double two_sample_ks(std::vector<double> a, std::vector<double> b);

// One-sided variant: sup_x (F_a(x) - F_b(x)).
double one_sided_ks(std::vector<double> a, std::vector<double> b);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);
double median_of(std::vector<double> v);

// Unweighted isotonic regression (pool-adjacent-violators).
std::vector<double> isotonic_fit(const std::vector<double>& target);

// Euclidean projection onto {monotone nondecreasing} |-| {box}, by Dykstra's
// alternating projections. The quadratic-minimization oracle for the robust
// Cramer-von Mises statistic.
std::vector<double> project_monotone_box(const std::vector<double>& target,
                                         const std::vector<double>& lo,
                                         const std::vector<double>& hi);

// Discretized inf-sup oracle for the robust KS statistic: dynamic program
// over all monotone step functions on the merged knots with levels on a
// 1/1000 lattice.
double rks_dp_oracle(const bandtest::SortedSample& sample, const bandtest::CdfBand& band);

// Exhaustive lattice search for the moment-constrained likelihood (n <= 3).
double elrm_grid_oracle(const bandtest::SortedSample& sample, double lower, double upper,
                        double step);

struct SolverInstance {
    bandtest::SortedSample sample;
    bandtest::CdfBand band;
};

// Random interior-feasible band instance with all band levels on the 1/1000
// lattice, sized for the grid oracle (n in {2, 3, 4}).
SolverInstance random_feasible_instance(bandtest::Rng& rng, std::size_t n);

// Random monotone step CDF between the band edges, on the band's knots.
bandtest::StepCdf random_cdf_in_band(bandtest::Rng& rng, const bandtest::CdfBand& band);

}  // namespace testsupport
