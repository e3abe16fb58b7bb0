#pragma once

#include "phantom/core.hpp"

namespace phantom {

/// Minimizer of the total l1 distance to all votes over the simplex.
struct SocialCostSolution {
  Division outcome;
  double social_cost;
  bool unique;  // the optimal face collapses to a point (within 1e-7)
};

/// Sum over voters of the l1 distance between their vote and x.
double social_cost(const Profile& v, const Division& x);

/// Welfare-maximizing division: solves the slack-variable linear program
/// min sum_{i,j} s_ij with s_ij >= |v_ij - x_j| and x on the simplex.
/// Among optimal divisions, returns the lexicographically smallest,
/// realized by sequential per-coordinate refinements.
SocialCostSolution utilitarian_outcome(const Profile& v);

}  // namespace phantom
