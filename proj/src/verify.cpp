#include "phantom/verify.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "phantom/engine.hpp"
#include "phantom/io.hpp"
#include "phantom/parallel.hpp"
#include "phantom/three_type.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phantom {

namespace {

Division random_division(std::mt19937_64& rng, std::size_t m) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> s(m);
  double sum = 0.0;
  for (double& x : s) {
    x = exp1(rng);
    sum += x;
  }
  for (double& x : s) x /= sum;
  return Division(std::move(s));
}

Profile random_profile(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<Division> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(random_division(rng, m));
  return Profile(std::move(rows));
}

Division unit(std::size_t m, std::size_t j) {
  std::vector<double> s(m, 0.0);
  s[j] = 1.0;
  return Division(std::move(s));
}

struct TrialResult {
  bool ok = true;
  nlohmann::json detail;
};

using TrialFn = std::function<TrialResult(std::uint64_t trial_seed)>;

SuiteReport run_trials(const std::string& suite, int trials,
                       std::uint64_t seed, std::uint64_t stream,
                       const TrialFn& fn) {
  std::vector<TrialResult> results(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(thread_budget())
#endif
  for (int i = 0; i < trials; ++i) {
    try {
      results[i] = fn(derive_seed(seed, stream, i));
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].detail = {{"error", e.what()}, {"trial", i}};
    }
  }
  SuiteReport rep;
  rep.suite = suite;
  rep.trials = trials;
  for (int i = 0; i < trials; ++i) {
    if (!results[i].ok) {
      if (rep.violations == 0) rep.violation = results[i].detail;
      ++rep.violations;
    }
  }
  rep.passed = rep.violations == 0;
  rep.summary = rep.passed ? "all trials passed"
                           : std::to_string(rep.violations) + " of " +
                                 std::to_string(trials) + " trials violated";
  return rep;
}

// Fixed deviation set: every 1/8-grid division, 50 seeded random draws,
// and the targeted single- and double-minded reports around the honest
// outcome (plus the outcome itself).
std::vector<Division> deviation_set(std::size_t m, const Division& outcome,
                                    std::mt19937_64& rng) {
  std::vector<Division> out;
  for_each_grid_division(m, 8, [&](const Division& d) { out.push_back(d); });
  for (int i = 0; i < 50; ++i) out.push_back(random_division(rng, m));
  for (std::size_t j = 0; j < m; ++j) out.push_back(unit(m, j));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (j == k) continue;
      std::vector<double> d(m, 0.0);
      d[j] = outcome[j];
      d[k] = 1.0 - outcome[j];
      out.emplace_back(std::move(d));
    }
  }
  out.push_back(outcome);
  return out;
}

TrialResult truthful_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_m(2, 4), pick_n(2, 5);
  const std::size_t m = pick_m(rng), n = pick_n(rng);
  const Profile v = random_profile(rng, n, m);
  std::uniform_int_distribution<std::size_t> pick_i(0, n - 1);
  const std::size_t voter = pick_i(rng);
  const Division peak = v.row(voter);

  for (const char* mech : {"pu", "pu-prime", "im"}) {
    const PhantomSystem y = system_from_descriptor(mech, static_cast<int>(n));
    const Division honest = aggregate(v, y).outcome;
    const double honest_cost = l1_distance(honest, peak);
    for (const Division& lie : deviation_set(m, honest, rng)) {
      const Division moved = aggregate(v.with_row(voter, lie), y).outcome;
      const double lied_cost = l1_distance(moved, peak);
      if (lied_cost < honest_cost - 1e-7) {
        return {false,
                {{"mechanism", mech},
                 {"profile", profile_to_json(v)},
                 {"voter", voter},
                 {"deviation", lie.shares()},
                 {"honest_cost", honest_cost},
                 {"lied_cost", lied_cost}}};
      }
    }
  }
  return {};
}

TrialResult proportional_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_n(2, 12), pick_j(0, 2);
  const std::size_t n = pick_n(rng);
  std::vector<Division> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(unit(3, pick_j(rng)));
  const Profile v(std::move(rows));
  const auto y = piecewise_uniform_system(static_cast<int>(n));
  const Division out = aggregate(v, y, 1e-12).outcome;
  const Division mean = proportional_division(v);
  for (int j = 0; j < 3; ++j) {
    if (std::abs(out[j] - mean[j]) > 1e-9) {
      return {false,
              {{"profile", profile_to_json(v)},
               {"outcome", out.shares()},
               {"proportional", mean.shares()}}};
    }
  }
  return {};
}

TrialResult feasibility_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_n(2, 20), pick_m(2, 6);
  const Profile v = random_profile(rng, pick_n(rng), pick_m(rng));
  for (const char* mech : {"im", "pu", "pu-prime"}) {
    const PhantomSystem y =
        system_from_descriptor(mech, static_cast<int>(v.voters()));
    const AggregationResult res = aggregate(v, y);
    double sum = 0.0;
    bool in_range = true;
    for (std::size_t j = 0; j < v.projects(); ++j) {
      sum += res.outcome[j];
      in_range = in_range && res.outcome[j] >= 0.0 && res.outcome[j] <= 1.0;
    }
    if (!in_range || std::abs(sum - 1.0) > 1e-9 ||
        std::abs(res.sum_at_tstar - 1.0) > 1e-9) {
      return {false,
              {{"mechanism", mech},
               {"profile", profile_to_json(v)},
               {"outcome", res.outcome.shares()},
               {"sum_at_tstar", res.sum_at_tstar}}};
    }
  }
  return {};
}

TrialResult uniform_sum_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_n(2, 20), pick_m(3, 5);
  const Profile v = random_profile(rng, pick_n(rng), pick_m(rng));
  const double sum = uniform_sum_check(v);
  if (sum < 1.0 - 1e-9) {
    return {false, {{"profile", profile_to_json(v)}, {"sum", sum}}};
  }
  return {};
}

TrialResult equivalence_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_n(2, 20), pick_m(2, 5);
  const Profile v = random_profile(rng, pick_n(rng), pick_m(rng));
  const int n = static_cast<int>(v.voters());
  const Division a = aggregate(v, piecewise_uniform_system(n)).outcome;
  const Division b =
      aggregate(v, piecewise_uniform_prime_system(n, 0.01)).outcome;
  for (std::size_t j = 0; j < v.projects(); ++j) {
    if (std::abs(a[j] - b[j]) > 1e-6) {
      return {false,
              {{"profile", profile_to_json(v)},
               {"pu", a.shares()},
               {"pu_prime", b.shares()}}};
    }
  }
  return {};
}

TrialResult escalation_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<std::size_t> pick_n(2, 6);
  const Profile v = random_profile(rng, pick_n(rng), 3);
  const auto y = piecewise_uniform_system(static_cast<int>(v.voters()));
  const double before = loss(v, aggregate(v, y, 1e-12).outcome);
  const Profile out = escalate(v, y);
  const Division f = aggregate(out, y, 1e-12).outcome;
  const double after = loss(out, f);
  if (after < before - 1e-9 || !is_three_type(out, f)) {
    return {false,
            {{"profile", profile_to_json(v)},
             {"escalated", profile_to_json(out)},
             {"loss_before", before},
             {"loss_after", after}}};
  }
  return {};
}

TrialResult validity_oracle_trial(std::uint64_t ts) {
  std::mt19937_64 rng(ts);
  std::uniform_int_distribution<int> pick_n(4, 8), coin(0, 3);
  const int n = pick_n(rng);
  std::uniform_int_distribution<int> cut1(1, 6);
  const int k1 = cut1(rng);
  std::uniform_int_distribution<int> cut2(1, 7 - k1);
  const int k2 = cut2(rng);
  Division x({k1 / 8.0, k2 / 8.0, (8 - k1 - k2) / 8.0});
  std::array<int, 3> a{};
  std::array<std::array<int, 3>, 3> b{};
  int left = n;
  for (int j = 0; j < 3 && left > 0; ++j) {
    a[j] = std::min(left, coin(rng));
    left -= a[j];
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3 && left > 0; ++k) {
      if (j == k) continue;
      b[j][k] = std::min(left, coin(rng) / 2);
      left -= b[j][k];
    }
  }
  const ThreeTypeProfile t3(std::move(x), a, b, n);
  const auto y = piecewise_uniform_system(n);
  const Profile v = t3.expand();
  const AggregationResult agg = aggregate(v, y);
  const bool valid = three_type_valid(t3, y, agg.tstar);
  const bool matches = l1_distance(agg.outcome, t3.x) <= 1e-6;
  if (valid != matches) {
    return {false,
            {{"profile", profile_to_json(v)},
             {"x", t3.x.shares()},
             {"tstar", agg.tstar},
             {"valid", valid},
             {"outcome", agg.outcome.shares()}}};
  }
  return {};
}

struct SuiteDef {
  const char* name;
  int stock_trials;
  std::uint64_t stream;
  TrialResult (*fn)(std::uint64_t);
};

constexpr SuiteDef kSuites[] = {
    {"truthful", 1000, 10, truthful_trial},
    {"proportional", 1000, 11, proportional_trial},
    {"feasibility", 300, 12, feasibility_trial},
    {"uniform-sum", 500, 13, uniform_sum_trial},
    {"equivalence", 500, 14, equivalence_trial},
    {"escalation", 500, 15, escalation_trial},
    {"validity-oracle", 2000, 16, validity_oracle_trial},
};

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& def : kSuites) names.emplace_back(def.name);
  return names;
}

SuiteReport run_suite(const std::string& suite, int trials,
                      std::uint64_t seed) {
  for (const auto& def : kSuites) {
    if (suite == def.name) {
      const int count = trials > 0 ? trials : def.stock_trials;
      return run_trials(def.name, count, seed, def.stream, def.fn);
    }
  }
  throw mechanism_mismatch("unknown verify suite: " + suite);
}

}  // namespace phantom
