#include <doctest.h>

#include <cmath>
#include <random>

#include "phantom/core.hpp"
#include "support/generators.hpp"

using namespace phantom;

TEST_CASE("l1 distance on pinned pairs") {
  CHECK(l1_distance(Division({1.0, 0.0}), Division({0.0, 1.0})) == 2.0);
  CHECK(l1_distance(Division({0.5, 0.5}), Division({0.5, 0.5})) == 0.0);
  // Hand sum: |0.75-0.5| + |0.25-0.5| = 0.5.
  CHECK(l1_distance(Division({0.75, 0.25}), Division({0.5, 0.5})) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("l1 distance rejects mismatched dimensions") {
  CHECK_THROWS_AS(l1_distance(Division({1.0, 0.0}), Division({1.0, 0.0, 0.0})),
                  invariant_error);
}

TEST_CASE("l1 distance is a metric on random triples") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_division(rng, 4);
    auto b = testing::random_division(rng, 4);
    auto c = testing::random_division(rng, 4);
    CHECK(l1_distance(a, b) >= 0.0);
    CHECK(l1_distance(a, a) == 0.0);
    CHECK(l1_distance(a, b) == l1_distance(b, a));
    CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c) + 1e-12);
    CHECK(l1_distance(a, b) <= 2.0 + 1e-12);
  }
}

TEST_CASE("division validation") {
  CHECK_THROWS_AS(Division({1.0}), invariant_error);             // m >= 2
  CHECK_THROWS_AS(Division({0.7, 0.7}), invariant_error);        // sum 1.4
  CHECK_THROWS_AS(Division({1.2, -0.2}), invariant_error);       // range
  // Drift within tolerance is rescaled to an exact unit sum.
  Division d({0.5 + 4e-10, 0.5 + 4e-10});
  CHECK(d[0] + d[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(Profile({Division({1.0, 0.0})}), invariant_error);  // n >= 2
  CHECK_THROWS_AS(Profile({Division({1.0, 0.0}), Division({1.0, 0.0, 0.0})}),
                  invariant_error);  // ragged m
}

TEST_CASE("proportional division matches the worked community split") {
  // 20k rows (0.2,0,0.8) + 20k rows (0.4,0.4,0.2) + 40k rows (1,0,0)
  // averages to (0.65, 0.10, 0.25). Scaled copies keep the mean intact,
  // so 2/2/4 rows reproduce it.
  std::vector<Division> rows;
  for (int i = 0; i < 2; ++i) rows.push_back(Division({0.2, 0.0, 0.8}));
  for (int i = 0; i < 2; ++i) rows.push_back(Division({0.4, 0.4, 0.2}));
  for (int i = 0; i < 4; ++i) rows.push_back(Division({1.0, 0.0, 0.0}));
  Profile v(rows);
  Division mean = proportional_division(v);
  CHECK(mean[0] == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(mean[1] == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(mean[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("proportional division of the two-project manipulation profile") {
  std::vector<Division> rows;
  for (int i = 0; i < 50; ++i) rows.push_back(Division({0.5, 0.5}));
  for (int i = 0; i < 50; ++i) rows.push_back(Division({1.0, 0.0}));
  Division mean = proportional_division(Profile(rows));
  CHECK(mean[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(mean[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("proportional division is idempotent on unanimous profiles") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = testing::random_division(rng, 3);
    Profile v({d, d, d});
    CHECK(l1_distance(proportional_division(v), d) < 1e-12);
  }
}

TEST_CASE("proportional division lands on the simplex for random profiles") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = testing::random_profile(rng, 2 + trial % 9, 2 + trial % 5);
    Division mean = proportional_division(v);  // ctor re-validates
    double sum = 0.0;
    for (std::size_t j = 0; j < mean.size(); ++j) sum += mean[j];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("loss basics") {
  std::vector<Division> rows;
  for (int i = 0; i < 50; ++i) rows.push_back(Division({0.5, 0.5}));
  for (int i = 0; i < 50; ++i) rows.push_back(Division({1.0, 0.0}));
  Profile v(rows);
  CHECK(loss(v, proportional_division(v)) == 0.0);
  // Mechanism outcome (0.5, 0.5) against mean (0.75, 0.25).
  CHECK(loss(v, Division({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(loss(v, Division({1.0, 0.0, 0.0})), invariant_error);
}

TEST_CASE("loss is bounded by 2 and zero at the mean") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = testing::random_profile(rng, 3, 4);
    auto x = testing::random_division(rng, 4);
    double l = loss(v, x);
    CHECK(l >= 0.0);
    CHECK(l <= 2.0);
  }
}

TEST_CASE("make_loss_report ties the fields together") {
  Profile v({Division({1.0, 0.0}), Division({0.0, 1.0})});
  LossReport rep = make_loss_report(v, Division({0.5, 0.5}), 0.25);
  CHECK(rep.loss ==
        doctest::Approx(l1_distance(rep.outcome, rep.proportional))
            .epsilon(1e-12));
  CHECK(rep.tstar.has_value());
  CHECK(rep.loss >= 0.0);
  CHECK(rep.loss <= 2.0);
}

TEST_CASE("grid division enumeration counts compositions") {
  int count = 0;
  for_each_grid_division(3, 8, [&](const Division& d) {
    ++count;
    double sum = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) sum += d[j];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  });
  CHECK(count == 45);  // C(10, 2)
}
