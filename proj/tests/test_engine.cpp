#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "phantom/engine.hpp"
#include "support/generators.hpp"

using namespace phantom;

namespace {

// Five-voter fixtures used throughout: both have a known tstar and a
// known outcome under the piecewise-uniform system.
Profile fixture_a() {
  return Profile({Division({3.0 / 8, 3.0 / 8, 1.0 / 4}),
                  Division({3.0 / 8, 3.0 / 8, 1.0 / 4}),
                  Division({1.0 / 8, 1.0 / 2, 3.0 / 8}),
                  Division({7.0 / 16, 9.0 / 16, 0.0}),
                  Division({5.0 / 8, 1.0 / 16, 5.0 / 16})});
}

Profile fixture_b() {
  return Profile({Division({1.0, 0.0, 0.0}),
                  Division({0.5, 0.5, 0.0}),
                  Division({0.0, 2.0 / 3, 1.0 / 3}),
                  Division({1.0 / 3, 5.0 / 9, 1.0 / 9}),
                  Division({3.0 / 8, 3.0 / 8, 1.0 / 4})});
}

}  // namespace

TEST_CASE("median of pooled votes and phantoms") {
  // Hand-sorted pool 0,0,0.5,1,1 -> third smallest is 0.5.
  std::vector<double> col{1.0, 0.0};
  std::vector<double> ph{0.0, 0.5, 1.0};
  CHECK(median_with_phantoms(col, ph) == 0.5);

  // Project 3 of fixture (a) at tstar = 3/8: pool sorts to
  // 0,0,0,0,0.15,0.25,0.25,0.3125,0.375,0.45,0.75 -> sixth is 0.25.
  std::vector<double> col3{0.25, 0.375, 0.3125, 0.0, 0.25};
  std::vector<double> ph3{0.0, 0.0, 0.0, 0.15, 0.45, 0.75};
  CHECK(median_with_phantoms(col3, ph3) == 0.25);

  // Pool 0,0,0.5,0.5,1 -> 0.5.
  std::vector<double> colc{0.5, 0.5};
  std::vector<double> phc{0.0, 0.0, 1.0};
  CHECK(median_with_phantoms(colc, phc) == 0.5);

  CHECK_THROWS_AS(median_with_phantoms(col, ph3), invariant_error);
}

TEST_CASE("serial and parallel median kernels agree bitwise") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial * 7, m = 2 + trial % 6;
    auto v = testing::random_profile(rng, n, m);
    auto y = piecewise_uniform_system(static_cast<int>(n));
    std::vector<double> phantoms(n + 1);
    y.values(0.3 + 0.001 * trial, phantoms);
    std::vector<double> serial(m), parallel(m);
    column_medians_serial(v, phantoms, serial);
    column_medians_parallel(v, phantoms, parallel);
    for (std::size_t j = 0; j < m; ++j) CHECK(serial[j] == parallel[j]);
  }
}

TEST_CASE("feasibility sum of the pu system starts at zero") {
  auto v = fixture_a();
  auto y = piecewise_uniform_system(5);
  CHECK(feasibility_sum(v, y, 0.0) == 0.0);
  CHECK(feasibility_sum(v, y, 0.375) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("feasibility sum is weakly increasing in t") {
  std::mt19937_64 rng(31);
  for (const char* name : {"im", "pu", "pu-prime"}) {
    auto v = testing::random_profile(rng, 6, 3);
    auto y = system_from_descriptor(name, 6);
    double prev = feasibility_sum(v, y, 0.0);
    for (int ti = 1; ti <= 200; ++ti) {
      double cur = feasibility_sum(v, y, ti / 200.0);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("uniform feasibility sum is exactly one on two projects") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = testing::random_profile(rng, 2 + trial % 9, 2);
    auto y = uniform_system(static_cast<int>(v.voters()));
    CHECK(feasibility_sum(v, y, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fixture (a): tstar interval contains 3/8 and outcome matches") {
  auto v = fixture_a();
  auto y = piecewise_uniform_system(5);
  auto res = aggregate(v, y);
  CHECK(res.outcome[0] == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(res.outcome[1] == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(res.outcome[2] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::abs(res.sum_at_tstar - 1.0) <= 1e-9);
  auto interval = tstar_interval(v, y);
  CHECK(interval.lo <= 0.375 + 1e-6);
  CHECK(interval.hi >= 0.375 - 1e-6);
}

TEST_CASE("fixture (b): outcome consistent with tstar = 49/64") {
  auto v = fixture_b();
  auto y = piecewise_uniform_system(5);
  auto res = aggregate(v, y);
  // Medians at t = 49/64, derived by sorting the pools by hand.
  CHECK(res.outcome[0] == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(res.outcome[1] == doctest::Approx(0.4125).epsilon(1e-9));
  CHECK(res.outcome[2] == doctest::Approx(0.2125).epsilon(1e-9));
  auto interval = tstar_interval(v, y);
  CHECK(interval.lo <= 49.0 / 64 + 1e-6);
  CHECK(interval.hi >= 49.0 / 64 - 1e-6);
}

TEST_CASE("aggregate recomputes medians at tstar independently") {
  auto v = fixture_b();
  auto y = piecewise_uniform_system(5);
  auto res = aggregate(v, y);
  std::vector<double> phantoms(6);
  y.values(res.tstar, phantoms);
  for (std::size_t j = 0; j < 3; ++j) {
    double med = median_with_phantoms(v.column(j), phantoms);
    CHECK(res.outcome[j] == doctest::Approx(med).epsilon(1e-12));
  }
}

TEST_CASE("unanimous profiles aggregate to the common vote") {
  std::mt19937_64 rng(41);
  for (const char* name : {"im", "pu", "pu-prime"}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto d = testing::random_division(rng, 3);
      Profile v({d, d, d, d});
      auto y = system_from_descriptor(name, 4);
      auto res = aggregate(v, y);
      CHECK(l1_distance(res.outcome, d) < 1e-8);
    }
  }
}

TEST_CASE("feasible outcomes stay on the simplex for random profiles") {
  std::mt19937_64 rng(43);
  for (const char* name : {"im", "pu", "pu-prime"}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::uniform_int_distribution<std::size_t> pick_n(2, 20), pick_m(2, 6);
      auto v = testing::random_profile(rng, pick_n(rng), pick_m(rng));
      auto y = system_from_descriptor(name, static_cast<int>(v.voters()));
      auto res = aggregate(v, y);
      double sum = 0.0;
      for (std::size_t j = 0; j < res.outcome.size(); ++j) {
        CHECK(res.outcome[j] >= 0.0);
        CHECK(res.outcome[j] <= 1.0);
        sum += res.outcome[j];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(std::abs(res.sum_at_tstar - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("flat feasible intervals leave the outcome unchanged") {
  // Scan for profiles whose feasible set is a fat interval; medians
  // computed at both endpoints must coincide.
  std::mt19937_64 rng(47);
  int fat_intervals = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto v = testing::random_profile(rng, 5, 3);
    auto y = piecewise_uniform_system(5);
    auto iv = tstar_interval(v, y);
    if (iv.hi - iv.lo < 1e-4) continue;
    ++fat_intervals;
    std::vector<double> pl(6), ph(6), ml(3), mh(3);
    y.values(iv.lo + 1e-7, pl);
    y.values(iv.hi - 1e-7, ph);
    column_medians(v, pl, ml);
    column_medians(v, ph, mh);
    for (int j = 0; j < 3; ++j) {
      CHECK(ml[j] == doctest::Approx(mh[j]).epsilon(1e-7));
    }
  }
  CHECK(fat_intervals > 0);  // the scan actually exercised the property
}

TEST_CASE("uniform phantom mechanism on two projects") {
  // Antipodal pair lands in the middle.
  Profile v2({Division({1.0, 0.0}), Division({0.0, 1.0})});
  auto out = uniform_phantom_m2(v2);
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-12));

  // Fifty (0.5,0.5) + fifty (1,0): the 101st of 201 pooled values is 0.5
  // in both columns, so the outcome is (0.5, 0.5) and the loss is 0.5.
  std::vector<Division> rows;
  for (int i = 0; i < 50; ++i) rows.push_back(Division({0.5, 0.5}));
  for (int i = 0; i < 50; ++i) rows.push_back(Division({1.0, 0.0}));
  Profile v100(rows);
  auto out100 = uniform_phantom_m2(v100);
  CHECK(out100[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out100[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loss(v100, out100) == doctest::Approx(0.5).epsilon(1e-12));

  // Two voters (1,0) and (0.5,0.5): pooled sort gives (0.5,0.5), loss 1/2.
  Profile vtight({Division({1.0, 0.0}), Division({0.5, 0.5})});
  auto outt = uniform_phantom_m2(vtight);
  CHECK(outt[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loss(vtight, outt) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(uniform_phantom_m2(Profile({Division({1.0, 0.0, 0.0}),
                                              Division({0.0, 1.0, 0.0})})),
                  mechanism_mismatch);
}

TEST_CASE("uniform medians sum to at least one for m >= 3") {
  Profile unanimous({Division({1.0 / 3, 1.0 / 3, 1.0 / 3}),
                     Division({1.0 / 3, 1.0 / 3, 1.0 / 3}),
                     Division({1.0 / 3, 1.0 / 3, 1.0 / 3})});
  CHECK(uniform_sum_check(unanimous) >= 1.0 - 1e-9);

  Profile degenerate({Division({1.0, 0.0, 0.0}), Division({1.0, 0.0, 0.0}),
                      Division({1.0, 0.0, 0.0})});
  CHECK(uniform_sum_check(degenerate) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = testing::random_profile(rng, 2 + trial % 8, 3);
    CHECK(uniform_sum_check(v) >= 1.0 - 1e-9);
  }

  CHECK_THROWS_AS(
      uniform_sum_check(Profile({Division({1.0, 0.0}), Division({0.0, 1.0})})),
      mechanism_mismatch);
}

TEST_CASE("solve_tstar reports a broken bracket as an error") {
  // The uniform system ignores t, and on this profile its medians sum to
  // 1.4 at every t, so the bracket s(0) <= 1 fails.
  Profile v({Division({0.6, 0.4, 0.0}), Division({0.0, 0.4, 0.6})});
  auto y = uniform_system(2);
  CHECK(feasibility_sum(v, y, 0.0) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK_THROWS_AS(solve_tstar(v, y), invariant_error);
}
