#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phantom/core.hpp"
#include "phantom/relaxed.hpp"
#include "phantom/three_type.hpp"

namespace phantom {

/// One row of the search report: a sign/bracket case with the best
/// feasible relaxed loss found inside it, or INFEASIBLE when no feasible
/// point turned up within the budget share.
struct PatternCellReport {
  std::string label;
  bool feasible = false;
  double best_relaxed = 0.0;
};

struct SearchOutcome {
  std::string family;
  std::vector<PatternCellReport> cells;
  double best_relaxed = 0.0;
  RelaxedThreeType best_point{};
  /// Engine-verified loss of the rounded integer witness; the reported
  /// result of the search.
  double witness_loss = 0.0;
  int witness_voters = 0;
  std::optional<ThreeTypeProfile> witness;  // three-project families
  std::optional<Profile> witness_profile;   // expanded witness rows
};

/// Pattern-stratified random-restart hill climb over the relaxed
/// worst-case space of the named family ("pu", "im", or "uniform" for
/// the two-project analogue). `budget` counts objective evaluations,
/// split evenly over the pattern cells; `seed` fixes every restart.
/// The returned loss is recomputed from the integer witness through the
/// mechanism itself.
SearchOutcome search_max_loss(const std::string& family, long long budget,
                              std::uint64_t seed);

struct Counterexample {
  double loss;
  std::optional<ThreeTypeProfile> three_type;
  Profile profile;
};

/// Runs the same search, returning the first integer witness whose
/// directly evaluated loss exceeds `threshold`, or nothing when the
/// budget is exhausted without one.
std::optional<Counterexample> falsify_upper_bound(const std::string& family,
                                                  double threshold,
                                                  long long budget,
                                                  std::uint64_t seed);

}  // namespace phantom
