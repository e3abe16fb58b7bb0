// Acceptance runner: one line per criterion, nonzero exit on any failure.
// An optional list of criterion numbers restricts the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "phantom/constructions.hpp"
#include "phantom/core.hpp"
#include "phantom/engine.hpp"
#include "phantom/search.hpp"
#include "phantom/utilitarian.hpp"
#include "phantom/verify.hpp"

using namespace phantom;

namespace {

Profile fig1a() {
  return Profile({Division({0.375, 0.375, 0.25}), Division({0.375, 0.375, 0.25}),
                  Division({0.125, 0.5, 0.375}), Division({0.4375, 0.5625, 0.0}),
                  Division({0.625, 0.0625, 0.3125})});
}

Profile fig1b() {
  return Profile({Division({1.0, 0.0, 0.0}), Division({0.5, 0.5, 0.0}),
                  Division({0.0, 2.0 / 3, 1.0 / 3}),
                  Division({1.0 / 3, 5.0 / 9, 1.0 / 9}),
                  Division({0.375, 0.375, 0.25})});
}

bool criterion_1(std::string& note) {
  auto y = piecewise_uniform_system(5);
  auto a = aggregate(fig1a(), y);
  bool ok = std::abs(a.outcome[0] - 0.375) <= 1e-6 &&
            std::abs(a.outcome[1] - 0.375) <= 1e-6 &&
            std::abs(a.outcome[2] - 0.25) <= 1e-6;
  auto b = aggregate(fig1b(), y);
  ok = ok && std::abs(b.sum_at_tstar - 1.0) <= 1e-9;
  auto iv = tstar_interval(fig1b(), y);
  const double target = 49.0 / 64.0;
  ok = ok && iv.lo <= target + 1e-6 && iv.hi >= target - 1e-6;
  std::ostringstream s;
  s << "outcome_a=(" << a.outcome[0] << "," << a.outcome[1] << ","
    << a.outcome[2] << ") t-interval_b=[" << iv.lo << "," << iv.hi << "]";
  note = s.str();
  return ok;
}

bool criterion_2(std::string& note) {
  double max_loss = 0.0;
  // Exhaustive two-project grid: a vote is its first share, in eighths.
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<Division> rows;
      rows.reserve(n);
      for (int v : idx) rows.emplace_back(std::vector<double>{v / 8.0, 1.0 - v / 8.0});
      Profile profile(std::move(rows));
      max_loss = std::max(max_loss, loss(profile, uniform_phantom_m2(profile)));
      int d = n - 1;
      while (d >= 0 && idx[d] == 8) idx[d--] = 0;
      if (d < 0) break;
      ++idx[d];
    }
  }
  Profile witness({Division({1.0, 0.0}), Division({0.5, 0.5})});
  const double witness_loss = loss(witness, uniform_phantom_m2(witness));
  std::ostringstream s;
  s << "grid max=" << max_loss << " witness=" << witness_loss;
  note = s.str();
  return max_loss <= 0.5 + 1e-9 && std::abs(witness_loss - 0.5) <= 1e-12;
}

bool criterion_3(std::string& note) {
  auto rep = run_suite("proportional", 1000, 0);
  note = rep.summary;
  return rep.passed;
}

bool criterion_4(std::string& note) {
  for (std::size_t m : {2u, 3u, 4u, 5u}) {
    for (const char* mech : {"pu", "im"}) {
      auto rep = verify_construction({ConstructionKind::PhantomLB, m, 6}, mech);
      if (!rep.passed ||
          std::abs(rep.actual_loss - (1.0 - 1.0 / static_cast<double>(m))) >
              1e-9) {
        note = std::string("failed at m=") + std::to_string(m) + " " + mech;
        return false;
      }
    }
  }
  note = "pu and im land on (1/m,...,1/m) for m in {2,3,4,5}";
  return true;
}

bool criterion_5(std::string& note) {
  auto rep = verify_construction({ConstructionKind::ImLB, 3, 20000}, "im");
  bool ok = rep.passed && rep.actual_loss >= 0.6862;
  double at_1e5 = 0.0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    auto r = verify_construction({ConstructionKind::ImLB, 3, n}, "im");
    ok = ok && r.passed;
    if (n == 100000u) at_1e5 = r.actual_loss;
  }
  const double limit = 12.0 - 8.0 * std::sqrt(2.0);
  ok = ok && std::abs(at_1e5 - limit) <= 1e-3;
  std::ostringstream s;
  s << "loss(n=2e4)=" << rep.actual_loss << " loss(n=1e5)=" << at_1e5
    << " limit=" << limit;
  note = s.str();
  return ok;
}

bool criterion_6(std::string& note) {
  bool ok = true;
  std::ostringstream s;
  for (const char* mech : {"pu", "im"}) {
    auto rep = verify_construction({ConstructionKind::PropLB, 1000, 1000}, mech);
    ok = ok && rep.passed && rep.actual_loss >= 1.2;
    s << mech << "=" << rep.actual_loss << " ";
  }
  s << "(bound 1.2)";
  note = s.str();
  return ok;
}

bool criterion_7(std::string& note) {
  for (std::size_t m = 3; m <= 10; ++m) {
    auto rep =
        verify_construction({ConstructionKind::UtilLB, m, m + 1}, "utilitarian");
    if (!rep.passed) {
      note = "failed at m=" + std::to_string(m);
      return false;
    }
  }
  // Independent grid oracle at m = 3: the welfare optimum is a grid
  // point, so the LP cost must meet the 1/64-grid minimum exactly.
  auto built = build({ConstructionKind::UtilLB, 3, 4});
  auto sol = utilitarian_outcome(built.profile);
  double grid_min = std::numeric_limits<double>::infinity();
  for_each_grid_division(3, 64, [&](const Division& d) {
    grid_min = std::min(grid_min, social_cost(built.profile, d));
  });
  std::ostringstream s;
  s << "lp cost=" << sol.social_cost << " grid min=" << grid_min;
  note = s.str();
  return std::abs(sol.social_cost - grid_min) <= 1e-9;
}

bool criterion_8(std::string& note) {
  auto rep = run_suite("truthful", 1000, 0);
  note = rep.summary + " (pu, pu-prime, im)";
  return rep.passed;
}

bool criterion_9(std::string& note) {
  auto sums = run_suite("uniform-sum", 500, 0);
  auto equiv = run_suite("equivalence", 500, 0);
  note = "uniform-sum: " + sums.summary + "; equivalence: " + equiv.summary;
  return sums.passed && equiv.passed;
}

bool criterion_10(std::string& note) {
  auto rep = run_suite("validity-oracle", 2000, 0);
  note = rep.summary;
  return rep.passed;
}

bool criterion_11(std::string& note) {
  auto rep = run_suite("escalation", 500, 0);
  note = rep.summary;
  return rep.passed;
}

bool criterion_12(std::string& note) {
  auto out = search_max_loss("pu", 1000000, 42);
  bool ok = out.witness_loss >= 0.66666 && out.witness.has_value() &&
            std::abs(out.witness_loss - out.best_relaxed) <= 1e-3;
  auto hit = falsify_upper_bound("pu", 2.0 / 3.0 + 1e-4, 1000000, 42);
  ok = ok && !hit.has_value();
  std::ostringstream s;
  s << "best=" << out.best_relaxed << " witness=" << out.witness_loss
    << " (n=" << out.witness_voters << ") falsified_above_2/3+1e-4="
    << (hit ? "yes" : "no");
  note = s.str();
  return ok;
}

struct Criterion {
  int id;
  const char* title;
  double seconds_limit;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {1, "worked five-voter outcomes and t-interval", 1.0, criterion_1},
      {2, "two-project exhaustive grid stays at 1/2", 30.0, criterion_2},
      {3, "single-minded profiles resolve proportionally", 10.0, criterion_3},
      {4, "half-uniform instance forces (1/m,...,1/m)", 1.0, criterion_4},
      {5, "independent markets sqrt(2) instance", 5.0, criterion_5},
      {6, "m = n = 1000 supermajority instance", 60.0, criterion_6},
      {7, "welfare maximizer concentrates the budget", 30.0, criterion_7},
      {8, "no profitable deviation across the fixed set", 300.0, criterion_8},
      {9, "uniform-sum and pu/pu-prime equivalence", 120.0, criterion_9},
      {10, "sandwich validity matches aggregation", 120.0, criterion_10},
      {11, "escalation classifies without losing loss", 120.0, criterion_11},
      {12, "budgeted search and falsification at 2/3", 600.0, criterion_12},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = c.run(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = secs <= c.seconds_limit;
    if (!(ok && in_time)) ++failures;
    std::printf("[%s] criterion %2d: %s  [%.2fs/%.0fs]  %s\n",
                ok && in_time ? "PASS" : "FAIL", c.id, c.title, secs,
                c.seconds_limit, note.c_str());
    std::fflush(stdout);
  }
  return failures;
}
