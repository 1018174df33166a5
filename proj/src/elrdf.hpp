#pragma once

#include <vector>

#include "step_cdf.hpp"

namespace bandtest {

enum class Feasibility {
    InteriorFeasible,  // some weight vector with all w_i > 0 satisfies the band
    BoundaryOnly,      // feasible, but every feasible point has a zero weight
    Infeasible,        // no feasible point at all
};

// Per-coordinate box constraints on the cumulative weights s_1..s_{n-1},
// after folding redundant band constraints into running max/min bounds.
struct TightenedBounds {
    std::vector<double> lower;  // nondecreasing, length n-1
    std::vector<double> upper;  // nondecreasing, length n-1
    Feasibility feasibility = Feasibility::InteriorFeasible;
};

TightenedBounds tighten_bounds(const SortedSample& sample, const CdfBand& band);

struct ElrdfResult {
    WeightVector weights;
    double statistic = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
};

struct MaxIterationsExceeded : Error {
    MaxIterationsExceeded(const std::string& msg, ElrdfResult best_so_far)
        : Error(msg), best(std::move(best_so_far)) {}
    ElrdfResult best;
};

// Maximize sum(log w_i) subject to w >= 0, sum w = 1 and the band constraints
// on the cumulative weights. Log-barrier path following with damped Newton
// steps; each Newton solve is a tridiagonal system, O(n) per iteration.
// Throws InfeasibleBand; BoundaryOnly feasibility yields statistic +inf.
ElrdfResult solve_elrdf(const SortedSample& sample, const CdfBand& band, double tol = 1e-8);

// -(1/n) sum log(n w_i); +inf if any weight is zero.
double elrdf_statistic(const WeightVector& w);

enum class Decision { H0, H1 };

// H1 iff statistic > eta; ties go to H0.
Decision elrdf_decide(double statistic, double eta);

// Exhaustive simplex-lattice search, the verification oracle for the solver.
// Evaluates the band constraints directly and never touches the solver path.
// Requires n <= 4 and step in (0, 0.1].
double grid_oracle_solve(const SortedSample& sample, const CdfBand& band, double step);

}  // namespace bandtest
