#include "phantom/engine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "phantom/parallel.hpp"

namespace phantom {

namespace {

double pool_median(std::span<const double> column,
                   std::span<const double> phantoms,
                   std::vector<double>& scratch) {
  const std::size_t n = column.size();
  scratch.resize(2 * n + 1);
  std::copy(column.begin(), column.end(), scratch.begin());
  std::copy(phantoms.begin(), phantoms.end(), scratch.begin() + n);
  auto mid = scratch.begin() + n;  // (n+1)-th smallest of 2n+1
  std::nth_element(scratch.begin(), mid, scratch.end());
  return *mid;
}

struct SolveOutcome {
  double t;
  double sum;
  int iterations;
};

SolveOutcome solve_tstar_impl(const Profile& v, const PhantomSystem& y,
                              double tol) {
  const double s0 = feasibility_sum(v, y, 0.0);
  const double s1 = feasibility_sum(v, y, 1.0);
  if (s0 > 1.0 + tol || s1 < 1.0 - tol) {
    throw invariant_error(
        "feasibility bracket violated: sum(0)=" + std::to_string(s0) +
        ", sum(1)=" + std::to_string(s1) + " for system " + y.name());
  }

  SolveOutcome best{0.0, s0, 0};
  if (std::abs(s1 - 1.0) < std::abs(s0 - 1.0)) best = {1.0, s1, 0};
  if (std::abs(best.sum - 1.0) <= tol) return best;

  double lo = 0.0, hi = 1.0;
  for (int iter = 1; iter <= 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // interval exhausted in doubles
    const double s = feasibility_sum(v, y, mid);
    if (std::abs(s - 1.0) < std::abs(best.sum - 1.0)) best = {mid, s, iter};
    if (std::abs(s - 1.0) <= tol) return {mid, s, iter};
    if (s < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

}  // namespace

double median_with_phantoms(std::span<const double> column,
                            std::span<const double> phantoms) {
  if (phantoms.size() != column.size() + 1) {
    throw invariant_error("phantom count must be one more than vote count");
  }
  std::vector<double> scratch;
  return pool_median(column, phantoms, scratch);
}

void column_medians_serial(const Profile& v, std::span<const double> phantoms,
                           std::span<double> medians) {
  std::vector<double> scratch;
  for (std::size_t j = 0; j < v.projects(); ++j) {
    medians[j] = pool_median(v.column(j), phantoms, scratch);
  }
}

void column_medians_parallel(const Profile& v, std::span<const double> phantoms,
                             std::span<double> medians) {
#ifdef _OPENMP
  const int m = static_cast<int>(v.projects());
#pragma omp parallel num_threads(thread_budget())
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (int j = 0; j < m; ++j) {
      medians[j] = pool_median(v.column(j), phantoms, scratch);
    }
  }
#else
  column_medians_serial(v, phantoms, medians);
#endif
}

void column_medians(const Profile& v, std::span<const double> phantoms,
                    std::span<double> medians) {
  // Parallelism only pays once the per-call work is substantial.
  if (v.projects() * v.voters() >= 16384 && thread_budget() > 1) {
    column_medians_parallel(v, phantoms, medians);
  } else {
    column_medians_serial(v, phantoms, medians);
  }
}

double feasibility_sum(const Profile& v, const PhantomSystem& y, double t) {
  if (static_cast<std::size_t>(y.voters()) != v.voters()) {
    throw invariant_error("phantom system built for a different voter count");
  }
  std::vector<double> phantoms(v.voters() + 1);
  y.values(t, phantoms);
  std::vector<double> medians(v.projects());
  column_medians(v, phantoms, medians);
  double s = 0.0;  // serial reduction keeps the result thread-count independent
  for (double mj : medians) s += mj;
  return s;
}

double solve_tstar(const Profile& v, const PhantomSystem& y, double tol) {
  return solve_tstar_impl(v, y, tol).t;
}

TStarInterval tstar_interval(const Profile& v, const PhantomSystem& y,
                             double t_tol) {
  // Monotone predicates locate both edges of {t : sum(t) = 1}.
  const double eps = 1e-12;
  solve_tstar_impl(v, y, kSimplexTol);  // asserts the bracket

  auto bisect = [&](auto reached) {
    double lo = 0.0, hi = 1.0;
    if (reached(feasibility_sum(v, y, 0.0))) return 0.0;
    if (!reached(feasibility_sum(v, y, 1.0))) return 1.0;
    while (hi - lo > t_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (reached(feasibility_sum(v, y, mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  TStarInterval out{};
  out.lo = bisect([&](double s) { return s >= 1.0 - eps; });
  out.hi = bisect([&](double s) { return s > 1.0 + eps; });
  if (out.hi < out.lo) out.hi = out.lo;
  return out;
}

AggregationResult aggregate(const Profile& v, const PhantomSystem& y,
                            double tol) {
  const SolveOutcome solved = solve_tstar_impl(v, y, tol);
  if (std::abs(solved.sum - 1.0) > tol) {
    throw invariant_error("no t with median sum within tolerance of 1 (got " +
                          std::to_string(solved.sum) + ")");
  }
  std::vector<double> phantoms(v.voters() + 1);
  y.values(solved.t, phantoms);
  std::vector<double> medians(v.projects());
  column_medians(v, phantoms, medians);
  double sum = 0.0;
  for (double mj : medians) sum += mj;
  for (double& mj : medians) mj /= sum;  // spread the residual proportionally
  return AggregationResult{Division(std::move(medians)), solved.t, sum,
                           solved.iterations};
}

Division uniform_phantom_m2(const Profile& v) {
  if (v.projects() != 2) {
    throw mechanism_mismatch(
        "uniform phantom mechanism applies to exactly 2 projects");
  }
  const PhantomSystem y = uniform_system(static_cast<int>(v.voters()));
  std::vector<double> phantoms(v.voters() + 1);
  y.values(0.0, phantoms);
  std::vector<double> medians(2);
  column_medians(v, phantoms, medians);
  return Division(std::move(medians));
}

double uniform_sum_check(const Profile& v) {
  if (v.projects() < 3) {
    throw mechanism_mismatch("uniform sum check applies to m >= 3");
  }
  const PhantomSystem y = uniform_system(static_cast<int>(v.voters()));
  return feasibility_sum(v, y, 0.0);
}

}  // namespace phantom
