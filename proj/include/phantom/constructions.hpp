#pragma once

#include <optional>
#include <string>

#include "phantom/core.hpp"

namespace phantom {

/// Deterministic lower-bound instance families, keyed by the CLI tags:
///   truthful-lb  two antagonistic voters; no truthful mechanism beats 1/2
///   phantom-lb   half single-minded, half uniform; loss 1 - 1/m for any
///                moving phantom mechanism (n even)
///   im-lb        the sqrt(2) block instance for independent markets
///   prop-lb      m = n supermajority instance driving both proportional
///                mechanisms to loss 2 - 8/m^(1/3) (m >= 8)
///   util-lb      m+1 single-minded voters with one project doubly backed;
///                any welfare maximizer loses 2 - 4/(m+1)
enum class ConstructionKind { TruthfulLB, PhantomLB, ImLB, PropLB, UtilLB };

ConstructionKind construction_from_tag(const std::string& tag);
std::string construction_tag(ConstructionKind kind);

struct ConstructionSpec {
  ConstructionKind kind;
  std::size_t m = 3;
  std::size_t n = 2;
};

struct Construction {
  Profile profile;
  double predicted_loss;
  /// Exact predictions must be met within 1e-9; bound predictions are
  /// checked as >=.
  bool prediction_is_exact;
  std::string derivation;  // human-readable parameter summary
};

/// Builds the instance (validating the per-family parameter rules) and
/// its closed-form predicted loss.
Construction build(const ConstructionSpec& spec);

struct ConstructionReport {
  ConstructionSpec spec;
  std::string mechanism;
  double predicted_loss = 0.0;
  double actual_loss = 0.0;
  Division outcome;
  bool passed = false;
  std::string detail;
};

/// Runs the instance through the named mechanism ("uniform", "im", "pu",
/// "pu-prime", "utilitarian") and compares the recomputed loss against
/// the prediction. Throws mechanism_mismatch for pairs the family does
/// not target (for example im-lb under utilitarian).
ConstructionReport verify_construction(const ConstructionSpec& spec,
                                       const std::string& mechanism);

}  // namespace phantom
