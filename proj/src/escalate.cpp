#include <array>
#include <cmath>
#include <vector>

#include "phantom/engine.hpp"
#include "phantom/three_type.hpp"

namespace phantom {

namespace {

constexpr double kClassTol = 1e-9;

struct PairChoice {
  bool case_one;  // true: f_p <= min(v_p, vb_p) and f_q >= max(v_q, vb_q)
  int p;
  int q;
};

// For f != v there are projects with v above f and below f; the mean
// then fits one of the two sandwich configurations on some pair.
PairChoice claim_pair(const std::array<double, 3>& f,
                      const std::array<double, 3>& v,
                      const std::array<double, 3>& vb) {
  int j1 = 0, j2 = 0;
  for (int j = 1; j < 3; ++j) {
    if (v[j] - f[j] > v[j1] - f[j1]) j1 = j;
    if (v[j] - f[j] < v[j2] - f[j2]) j2 = j;
  }
  const int j3 = 3 - j1 - j2;
  const bool above1 = f[j1] <= vb[j1];  // mean at or above outcome on j1
  const bool above2 = f[j2] <= vb[j2];
  if (above1 && !above2) return {true, j1, j2};
  if (!above1 && above2) return {false, j2, j1};
  if (above1 && above2) {
    if (v[j3] <= f[j3]) return {true, j1, j3};
    return {false, j2, j3};
  }
  if (v[j3] >= f[j3]) return {true, j3, j2};
  return {false, j3, j1};
}

Division make_row(double a, double b, double c, int pa, int pb, int pc) {
  std::vector<double> row(3);
  row[pa] = a;
  row[pb] = b;
  row[pc] = c;
  return Division(std::move(row));
}

// One rewrite of voter i. Every move below keeps each touched coordinate
// on its side of the project median (strictly, or landing exactly on the
// outcome value), so the aggregate is unchanged, and the mean moves so
// the loss cannot drop (strict shifts gain 2*eps/n; conversions trade a
// guaranteed gain against a triangle-bounded term).
Division move_voter(const std::array<double, 3>& v,
                    const std::array<double, 3>& f,
                    const std::array<double, 3>& vb) {
  int agree = -1;
  int agree_count = 0;
  for (int j = 0; j < 3; ++j) {
    if (std::abs(v[j] - f[j]) <= kClassTol) {
      agree = j;
      ++agree_count;
    }
  }

  if (agree_count >= 2) {
    // Two coordinates already match; snap the residue away.
    return Division({f[0], f[1], f[2]});
  }

  if (agree_count == 1) {
    const int j = agree;
    int l = (j + 1) % 3, r = (j + 2) % 3;
    if (v[l] < f[l]) std::swap(l, r);  // now v_l > f_l and v_r < f_r
    if (vb[l] <= f[l] || vb[r] >= f[r]) {
      return Division({f[0], f[1], f[2]});  // loss-safe full agreement
    }
    // Mean strictly inside on both: push v_l up, v_r down to a boundary.
    const double eps = std::min(v[r], 1.0 - v[l]);
    return make_row(v[j], v[l] + eps, v[r] - eps, j, l, r);
  }

  const PairChoice pc = claim_pair(f, v, vb);
  const int p = pc.p, q = pc.q, w = 3 - p - q;
  if (pc.case_one) {
    if (v[q] > 0.0) {
      const double eps = std::min(v[q], 1.0 - v[p]);
      return make_row(v[p] + eps, v[q] - eps, v[w], p, q, w);
    }
    if (v[w] <= f[w]) {
      return make_row(1.0, 0.0, 0.0, p, q, w);  // single-minded
    }
    // Agree on w, complement on p: double-minded.
    return make_row(1.0 - f[w], 0.0, f[w], p, q, w);
  }
  // Sandwich case: v_p < f_p <= vb_p and vb_q <= f_q < v_q.
  const double eps = std::min(f[p] - v[p], v[q] - f[q]);
  return make_row(v[p] + eps, v[q] - eps, v[w], p, q, w);
}

}  // namespace

Profile escalate(const Profile& input, const PhantomSystem& y) {
  if (input.projects() != 3) {
    throw mechanism_mismatch("escalation is defined for m = 3");
  }
  if (static_cast<std::size_t>(y.voters()) != input.voters()) {
    throw invariant_error("phantom system built for a different voter count");
  }
  Profile v = input;
  const int cap = 10 * static_cast<int>(input.voters());
  double initial = -1.0;
  for (int moves = 0; moves <= cap; ++moves) {
    // Tight root tolerance keeps already-classified voters classified
    // across iterations (outcome drift far below kClassTol).
    const AggregationResult res = aggregate(v, y, 1e-12);
    const Division mean = proportional_division(v);
    const double cur = l1_distance(res.outcome, mean);
    if (initial < 0.0) initial = cur;
    if (cur < initial - kClassTol) {
      throw invariant_error("escalation lowered the loss");
    }

    int target = -1;
    std::array<double, 3> row{};
    for (std::size_t i = 0; i < v.voters() && target < 0; ++i) {
      for (int j = 0; j < 3; ++j) row[j] = v.at(i, j);
      if (classify_voter(row, res.outcome.span(), kClassTol) ==
          VoterClass::Unclassified) {
        target = static_cast<int>(i);
      }
    }
    if (target < 0) return v;

    const std::array<double, 3> f{res.outcome[0], res.outcome[1],
                                  res.outcome[2]};
    const std::array<double, 3> vb{mean[0], mean[1], mean[2]};
    v = v.with_row(target, move_voter(row, f, vb));
  }
  throw invariant_error("escalation did not settle within 10n moves");
}

}  // namespace phantom
