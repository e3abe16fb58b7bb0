#pragma once

#include <array>
#include <string>
#include <vector>

#include "phantom/core.hpp"

namespace phantom {

/// Continuous (population-share) form of a three-type profile: voter
/// counts become masses summing to at most 1, the remainder being the
/// fully satisfied share. `t` is the phantom time the validity
/// constraints are evaluated at.
struct RelaxedThreeType {
  std::array<double, 3> x;
  std::array<double, 3> singles;                  // share of e_j voters
  std::array<std::array<double, 3>, 3> doubles;   // share agreeing on j, complement on k
  double t = 0.5;

  double single_total() const;
  double double_total() const;
  double satisfied_mass() const;  // 1 - singles - doubles

  /// Share of reports pinned above the outcome per project.
  std::array<double, 3> mass_above() const;
  /// Share of double-minded reports agreeing with the outcome per
  /// project. (A folded variant that adds the single-minded share is
  /// sometimes written for this quantity; the slot-counting definition
  /// used everywhere here does not include it.)
  std::array<double, 3> agreeing_doubles() const;

  /// Population mean of each project under the encoded vote shares.
  std::array<double, 3> means() const;
};

/// Objective of the worst-case program: l1 gap between the mean and the
/// claimed outcome.
double relaxed_loss(const RelaxedThreeType& r);

/// Feasibility of the claimed outcome under the continuous-index
/// piecewise-uniform phantoms: the sandwich
///   yhat(z_j, t) <= x_j <= yhat(C + q_j + z_j, t)
/// for every project, plus simplex and mass constraints.
bool relaxed_feasible(const RelaxedThreeType& r);

enum class Sign : int { Plus = +1, Minus = -1 };

/// Phantom bracket around a median: both enclosing phantoms in the
/// zero-sticky lower half (black), both in the upper half (red), or one
/// of each.
enum class Bracket { BlackBlack, BlackRed, RedRed };

/// One case of the worst-case program split: per-project signs of
/// (mean - outcome) and per-project phantom brackets. All-equal sign
/// tuples are excluded (their loss is identically zero).
struct PatternPair {
  PatternPair(std::array<Sign, 3> s, std::array<Bracket, 3> p);

  std::array<Sign, 3> signs;
  std::array<Bracket, 3> phantoms;

  std::string label() const;
};

/// The 2 x 27 pattern cases covering the positive-outcome regime (sign
/// tuples canonicalized up to project symmetry).
std::vector<PatternPair> enumerate_patterns();

}  // namespace phantom
