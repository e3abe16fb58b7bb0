#pragma once

#include <vector>

namespace phantom::lp {

enum class Relation { LessEq, Eq, GreaterEq };

struct Constraint {
  std::vector<double> coeffs;
  Relation rel;
  double rhs;
};

struct Solution {
  bool feasible = false;
  std::vector<double> x;
  double objective = 0.0;
};

/// Minimizes c.x subject to the constraints and x >= 0, with a dense
/// two-phase simplex using Bland's rule. Sized for the small instances
/// this project produces (a few hundred rows); deterministic.
Solution solve_min(const std::vector<double>& c,
                   const std::vector<Constraint>& rows);

}  // namespace phantom::lp
