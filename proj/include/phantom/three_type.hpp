#pragma once

#include <array>

#include "phantom/core.hpp"
#include "phantom/systems.hpp"

namespace phantom {

/// How a vote relates to a mechanism outcome f:
///   FullySatisfied  v = f
///   SingleMinded    v puts the whole budget on one project
///   DoubleMinded    v matches f on one project j and puts 1 - f_j on
///                   another (the third coordinate is then zero)
enum class VoterClass { FullySatisfied, SingleMinded, DoubleMinded, Unclassified };

VoterClass classify_voter(std::span<const double> vote,
                          std::span<const double> outcome, double tol = 1e-9);

/// True when every row is classified with respect to `outcome`.
bool is_three_type(const Profile& v, const Division& outcome,
                   double tol = 1e-9);

/// Compact encoding of a three-project profile built solely from the
/// three voter classes around a claimed outcome x:
///   satisfied voters  n - A - B rows equal to x
///   doubles[j][k]     rows with x_j on j, 1 - x_j on k, 0 elsewhere
///   singles[j]        rows equal to the unit vector e_j
struct ThreeTypeProfile {
  ThreeTypeProfile(Division x, std::array<int, 3> singles,
                   std::array<std::array<int, 3>, 3> doubles, int n);

  Division x;
  std::array<int, 3> singles;
  std::array<std::array<int, 3>, 3> doubles;
  int n;

  int single_total() const;     // A
  int double_total() const;     // B
  int satisfied_count() const;  // C = n - A - B

  /// z_j: reports forced above the outcome in project j (ones and
  /// complementary values), assuming every x_j > 0.
  std::array<int, 3> mass_above() const;
  /// q_j: double-minded reports agreeing with the outcome on project j.
  std::array<int, 3> agreeing_doubles() const;

  Profile expand() const;
};

/// Validity test for a claimed outcome with all x_j > 0 at time t: the
/// phantom sandwich y_{z_j}(t) <= x_j <= y_{z_j + q_j + C}(t) for every
/// project, plus the feasibility sum landing on 1. Throws invariant_error
/// when some x_j = 0 (use the zero-outcome variant).
bool three_type_valid(const ThreeTypeProfile& T, const PhantomSystem& y,
                      double t);

/// The x_3 = 0 variant for t <= 1/2. Degenerate double-minded voters
/// (agreeing on the zero project) are literally unit vectors and are
/// counted as single-minded before applying the index formulas.
bool three_type_valid_zero(const ThreeTypeProfile& T, const PhantomSystem& y,
                           double t);

/// Rewrites every voter into one of the three classes without lowering
/// the loss, moving one voter per step. Throws invariant_error if the
/// procedure has not settled after 10 n moves. Requires m = 3.
Profile escalate(const Profile& v, const PhantomSystem& y);

}  // namespace phantom
