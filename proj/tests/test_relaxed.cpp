#include <doctest.h>

#include <cmath>
#include <random>

#include "phantom/relaxed.hpp"
#include "phantom/systems.hpp"

using namespace phantom;

namespace {

RelaxedThreeType barycentric_half_single() {
  // Half the population single-minded on project 1, half fully satisfied
  // at the barycentre; constraints bind at t = 5/6.
  RelaxedThreeType r{};
  r.x = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  r.singles = {0.5, 0.0, 0.0};
  r.t = 5.0 / 6.0;
  return r;
}

std::mt19937_64 rng_fixture(std::uint64_t s) { return std::mt19937_64(s); }

RelaxedThreeType random_point(std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  auto dirichlet = [&](int k) {
    std::vector<double> v(k);
    double s = 0.0;
    for (double& e : v) {
      e = exp1(rng);
      s += e;
    }
    for (double& e : v) e /= s;
    return v;
  };
  RelaxedThreeType r{};
  auto x = dirichlet(3);
  r.x = {x[0], x[1], x[2]};
  auto m = dirichlet(10);
  r.singles = {m[0], m[1], m[2]};
  int idx = 3;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j != k) r.doubles[j][k] = m[idx++];
    }
  }
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  r.t = uni(rng);
  return r;
}

}  // namespace

TEST_CASE("relaxed loss of an all-satisfied population is zero") {
  RelaxedThreeType r{};
  r.x = {0.2, 0.3, 0.5};
  CHECK(relaxed_loss(r) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("half-single-minded point reaches 2/3") {
  auto r = barycentric_half_single();
  CHECK(relaxed_loss(r) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(relaxed_feasible(r));
  // The sandwich binds: slightly smaller or larger t becomes infeasible.
  r.t = 5.0 / 6.0 - 1e-6;
  CHECK_FALSE(relaxed_feasible(r));
  r.t = 5.0 / 6.0 + 1e-6;
  CHECK_FALSE(relaxed_feasible(r));
}

TEST_CASE("sqrt(2) landmark point evaluates to 12 - 8 sqrt(2)") {
  const double s2 = std::sqrt(2.0);
  RelaxedThreeType r{};
  r.x = {s2 - 1.0, 1.0 - s2 / 2, 1.0 - s2 / 2};
  r.singles = {2.0 - s2, 0.0, 0.0};
  CHECK(relaxed_loss(r) == doctest::Approx(12.0 - 8.0 * s2).epsilon(1e-12));
}

TEST_CASE("mean identities") {
  auto rng = rng_fixture(91);
  for (int trial = 0; trial < 300; ++trial) {
    auto r = random_point(rng);
    auto vb = r.means();
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) sum += vb[j] - r.x[j];
    // Gap terms always cancel; all-equal sign patterns are vacuous.
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("feasibility screens the obvious violations") {
  RelaxedThreeType r{};
  r.x = {1.0, 0.0, 0.0};
  r.t = 0.9;
  // Zero coordinates with satisfied mass: the upper sandwich fails on
  // the zero projects only if phantoms demand more; here y(z=0)=0 is
  // fine, so feasibility holds; break it with mass instead.
  r.singles = {0.8, 0.4, 0.0};  // total mass 1.2 > 1
  CHECK_FALSE(relaxed_feasible(r));

  auto ok = barycentric_half_single();
  ok.doubles[1][1] = 0.01;  // diagonal must stay empty
  CHECK_FALSE(relaxed_feasible(ok));
}

TEST_CASE("pattern enumeration excludes all-equal signs") {
  auto pats = enumerate_patterns();
  CHECK(pats.size() == 54);
  for (const auto& p : pats) {
    CHECK_FALSE((p.signs[0] == p.signs[1] && p.signs[1] == p.signs[2]));
  }
  CHECK_THROWS_AS(PatternPair({Sign::Plus, Sign::Plus, Sign::Plus},
                              {Bracket::BlackBlack, Bracket::BlackBlack,
                               Bracket::BlackBlack}),
                  invariant_error);
  CHECK(pats.front().label() == "(+,-,-) (b,b),(b,b),(b,b)");
}
