#pragma once

#include <span>

#include "phantom/core.hpp"
#include "phantom/systems.hpp"

namespace phantom {

/// Outcome of running a moving phantom mechanism on a profile.
struct AggregationResult {
  Division outcome;
  double tstar;
  double sum_at_tstar;  // feasibility sum at tstar, within kSimplexTol of 1
  int iterations;       // bisection steps spent locating tstar
};

/// Endpoints of the feasible set {t : feasibility_sum(t) = 1}. The sum is
/// weakly increasing, so the set is an interval (possibly a point).
struct TStarInterval {
  double lo;
  double hi;
};

/// Median of the 2n+1 pooled values (n votes + n+1 phantoms): the
/// (n+1)-th smallest, found by order-statistic selection.
double median_with_phantoms(std::span<const double> column,
                            std::span<const double> phantoms);

/// Fills medians[j] = median of column j against the given phantom
/// values. This is the data-parallel kernel behind the engine; both
/// variants produce bitwise-identical output.
void column_medians_serial(const Profile& v, std::span<const double> phantoms,
                           std::span<double> medians);
void column_medians_parallel(const Profile& v, std::span<const double> phantoms,
                             std::span<double> medians);
void column_medians(const Profile& v, std::span<const double> phantoms,
                    std::span<double> medians);

/// Sum over projects of the phantom-pooled medians at time t; weakly
/// increasing and continuous in t.
double feasibility_sum(const Profile& v, const PhantomSystem& y, double t);

/// Root of feasibility_sum(t) = 1 by bisection on the monotone sum.
/// Deterministic. Throws invariant_error when the bracket
/// sum(0) <= 1 <= sum(1) fails (an invalid system for this profile).
double solve_tstar(const Profile& v, const PhantomSystem& y,
                   double tol = kSimplexTol);

/// Both endpoints of the feasible t-interval, to within t_tol.
TStarInterval tstar_interval(const Profile& v, const PhantomSystem& y,
                             double t_tol = 1e-9);

/// Full aggregation: locate tstar, take per-project medians, spread the
/// residual (at most the sum tolerance) proportionally over nonzero
/// coordinates so the outcome sums to 1 exactly.
AggregationResult aggregate(const Profile& v, const PhantomSystem& y,
                            double tol = kSimplexTol);

/// The two-project mechanism with fixed uniform phantoms k/n; feasible
/// without any t. Throws mechanism_mismatch for m != 2.
Division uniform_phantom_m2(const Profile& v);

/// Sum of the m uniform-phantom medians for m >= 3; always at least
/// 1 - kSimplexTol. Throws mechanism_mismatch for m < 3.
double uniform_sum_check(const Profile& v);

}  // namespace phantom
