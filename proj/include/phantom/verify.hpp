#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace phantom {

/// Result of one randomized property suite. `violation` carries the
/// first offending instance, serialized, when the suite fails.
struct SuiteReport {
  std::string suite;
  int trials = 0;
  int violations = 0;
  bool passed = false;
  std::string summary;
  nlohmann::json violation;
};

/// Named property suites:
///   truthful        no profitable unilateral deviation for pu, pu-prime,
///                   im over a fixed deviation set (slack 1e-7)
///   proportional    pu returns the mean on single-minded profiles (1e-9)
///   feasibility     im/pu/pu-prime outcomes are valid divisions
///   uniform-sum     uniform-phantom medians sum to >= 1 for m >= 3
///   equivalence     pu and pu-prime(0.01) agree coordinate-wise (1e-6)
///   escalation      escalation terminates, classifies, never loses loss
///   validity-oracle sandwich validity matches direct aggregation
std::vector<std::string> suite_names();

/// Runs `trials` seeded trials of the named suite. Trials <= 0 selects
/// the suite's stock size. Throws mechanism_mismatch for unknown names.
SuiteReport run_suite(const std::string& suite, int trials,
                      std::uint64_t seed);

}  // namespace phantom
