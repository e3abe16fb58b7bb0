#include "phantom/three_type.hpp"

#include <cmath>

#include "phantom/engine.hpp"

namespace phantom {

VoterClass classify_voter(std::span<const double> vote,
                          std::span<const double> outcome, double tol) {
  const std::size_t m = vote.size();
  bool fully = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(vote[j] - outcome[j]) > tol) fully = false;
  }
  if (fully) return VoterClass::FullySatisfied;
  for (std::size_t j = 0; j < m; ++j) {
    if (vote[j] >= 1.0 - tol) return VoterClass::SingleMinded;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(vote[j] - outcome[j]) > tol) continue;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      if (std::abs(vote[k] - (1.0 - outcome[j])) <= tol) {
        return VoterClass::DoubleMinded;
      }
    }
  }
  return VoterClass::Unclassified;
}

bool is_three_type(const Profile& v, const Division& outcome, double tol) {
  for (std::size_t i = 0; i < v.voters(); ++i) {
    std::vector<double> row(v.projects());
    for (std::size_t j = 0; j < v.projects(); ++j) row[j] = v.at(i, j);
    if (classify_voter(row, outcome.span(), tol) == VoterClass::Unclassified) {
      return false;
    }
  }
  return true;
}

ThreeTypeProfile::ThreeTypeProfile(Division x_, std::array<int, 3> singles_,
                                   std::array<std::array<int, 3>, 3> doubles_,
                                   int n_)
    : x(std::move(x_)), singles(singles_), doubles(doubles_), n(n_) {
  if (x.size() != 3) throw invariant_error("three-type profiles have m = 3");
  for (int j = 0; j < 3; ++j) {
    if (singles[j] < 0) throw invariant_error("negative single-minded count");
    for (int k = 0; k < 3; ++k) {
      if (doubles[j][k] < 0) throw invariant_error("negative double-minded count");
      if (j == k && doubles[j][k] != 0) {
        throw invariant_error("double-minded diagonal must be zero");
      }
    }
  }
  if (single_total() + double_total() > n) {
    throw invariant_error("voter class counts exceed n");
  }
  if (n < 2) throw invariant_error("three-type profile needs n >= 2");
}

int ThreeTypeProfile::single_total() const {
  return singles[0] + singles[1] + singles[2];
}

int ThreeTypeProfile::double_total() const {
  int b = 0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) b += doubles[j][k];
  }
  return b;
}

int ThreeTypeProfile::satisfied_count() const {
  return n - single_total() - double_total();
}

std::array<int, 3> ThreeTypeProfile::mass_above() const {
  std::array<int, 3> z{};
  for (int j = 0; j < 3; ++j) {
    z[j] = singles[j];
    for (int k = 0; k < 3; ++k) {
      if (k != j) z[j] += doubles[k][j];
    }
  }
  return z;
}

std::array<int, 3> ThreeTypeProfile::agreeing_doubles() const {
  std::array<int, 3> q{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (k != j) q[j] += doubles[j][k];
    }
  }
  return q;
}

Profile ThreeTypeProfile::expand() const {
  std::vector<Division> rows;
  rows.reserve(n);
  const int c = satisfied_count();
  for (int i = 0; i < c; ++i) rows.push_back(x);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      for (int i = 0; i < doubles[j][k]; ++i) {
        std::vector<double> row(3, 0.0);
        row[j] = x[j];
        row[k] = 1.0 - x[j];
        rows.push_back(Division(std::move(row)));
      }
    }
  }
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < singles[j]; ++i) {
      std::vector<double> row(3, 0.0);
      row[j] = 1.0;
      rows.push_back(Division(std::move(row)));
    }
  }
  return Profile(std::move(rows));
}

bool three_type_valid(const ThreeTypeProfile& T, const PhantomSystem& y,
                      double t) {
  for (int j = 0; j < 3; ++j) {
    if (T.x[j] <= 0.0) {
      throw invariant_error(
          "three_type_valid requires every x_j > 0; route zero outcomes "
          "through three_type_valid_zero");
    }
  }
  const auto z = T.mass_above();
  const auto q = T.agreeing_doubles();
  const int c = T.satisfied_count();
  for (int j = 0; j < 3; ++j) {
    // Slack matches the root-finder tolerance: binding constraints at the
    // bisected t must not flip on representation noise.
    if (y.value(z[j], t) > T.x[j] + kSimplexTol) return false;
    if (y.value(z[j] + q[j] + c, t) < T.x[j] - kSimplexTol) return false;
  }
  return std::abs(feasibility_sum(T.expand(), y, t) - 1.0) <= kSimplexTol;
}

bool three_type_valid_zero(const ThreeTypeProfile& T, const PhantomSystem& y,
                           double t) {
  if (!(T.x[2] <= 1e-12)) {
    throw invariant_error("zero-outcome check requires x_3 = 0");
  }
  if (T.x[0] <= 0.0 || T.x[1] <= 0.0) {
    throw invariant_error("zero-outcome check requires x_1, x_2 > 0");
  }
  if (t > 0.5) {
    throw invariant_error("zero-outcome check applies for t <= 1/2");
  }
  // Voters agreeing on the zero project put the whole budget on the other
  // project; fold them into the single-minded counts.
  std::array<int, 3> a = T.singles;
  a[0] += T.doubles[2][0];
  a[1] += T.doubles[2][1];
  const auto& b = T.doubles;
  const int upper1 = T.n - a[1] - a[2] - b[1][2];
  const int upper2 = T.n - a[0] - a[2] - b[0][2];
  if (y.value(a[0], t) > T.x[0] + kSimplexTol) return false;
  if (y.value(upper1, t) < T.x[0] - kSimplexTol) return false;
  if (y.value(a[1], t) > T.x[1] + kSimplexTol) return false;
  if (y.value(upper2, t) < T.x[1] - kSimplexTol) return false;
  return std::abs(feasibility_sum(T.expand(), y, t) - 1.0) <= kSimplexTol;
}

}  // namespace phantom
