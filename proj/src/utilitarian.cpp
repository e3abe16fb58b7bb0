#include "phantom/utilitarian.hpp"

#include <cmath>

#include "phantom/lp.hpp"

namespace phantom {

double social_cost(const Profile& v, const Division& x) {
  if (x.size() != v.projects()) {
    throw invariant_error("social cost dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < v.projects(); ++j) {
    for (double vote : v.column(j)) total += std::abs(vote - x[j]);
  }
  return total;
}

namespace {

// Variables: x_0..x_{m-1}, then one deviation slack per (voter, project).
struct UtilModel {
  std::size_t n, m;
  std::vector<lp::Constraint> base;

  explicit UtilModel(const Profile& v) : n(v.voters()), m(v.projects()) {
    const std::size_t nvar = m + n * m;
    base.reserve(2 * n * m + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t s = m + i * m + j;
        // x_j - s_ij <= v_ij  and  -x_j - s_ij <= -v_ij
        lp::Constraint above{std::vector<double>(nvar, 0.0),
                             lp::Relation::LessEq, v.at(i, j)};
        above.coeffs[j] = 1.0;
        above.coeffs[s] = -1.0;
        base.push_back(std::move(above));
        lp::Constraint below{std::vector<double>(nvar, 0.0),
                             lp::Relation::LessEq, -v.at(i, j)};
        below.coeffs[j] = -1.0;
        below.coeffs[s] = -1.0;
        base.push_back(std::move(below));
      }
    }
    lp::Constraint simplex{std::vector<double>(nvar, 0.0), lp::Relation::Eq,
                           1.0};
    for (std::size_t j = 0; j < m; ++j) simplex.coeffs[j] = 1.0;
    base.push_back(std::move(simplex));
  }

  std::size_t vars() const { return m + n * m; }

  std::vector<double> cost_vector() const {
    std::vector<double> c(vars(), 0.0);
    for (std::size_t s = m; s < vars(); ++s) c[s] = 1.0;
    return c;
  }
};

// Sequentially pins coordinates to their extreme value over the optimal
// face; direction +1 gives the lexicographic minimum, -1 the maximum.
std::vector<double> lexic_extreme(const UtilModel& model, double opt_cost,
                                  double direction) {
  std::vector<lp::Constraint> rows = model.base;
  // The first solve's vertex satisfies this with equality in the same
  // arithmetic, so no slack is needed (and any slack would be spent by
  // the refinement objectives).
  lp::Constraint budget{model.cost_vector(), lp::Relation::LessEq, opt_cost};
  rows.push_back(std::move(budget));

  std::vector<double> pinned(model.m, 0.0);
  std::vector<double> last;
  for (std::size_t j = 0; j < model.m; ++j) {
    std::vector<double> c(model.vars(), 0.0);
    c[j] = direction;
    auto sol = lp::solve_min(c, rows);
    if (!sol.feasible) {
      throw invariant_error("utilitarian refinement lost feasibility");
    }
    pinned[j] = sol.x[j];
    last = std::move(sol.x);
    if (j + 1 < model.m) {
      lp::Constraint fix{std::vector<double>(model.vars(), 0.0),
                         lp::Relation::Eq, pinned[j]};
      fix.coeffs[j] = 1.0;
      rows.push_back(std::move(fix));
    }
  }
  return std::vector<double>(last.begin(), last.begin() + model.m);
}

Division polish(std::vector<double> x) {
  double sum = 0.0;
  for (double& xi : x) {
    xi = std::min(1.0, std::max(0.0, xi));
    sum += xi;
  }
  for (double& xi : x) xi /= sum;
  return Division(std::move(x));
}

}  // namespace

SocialCostSolution utilitarian_outcome(const Profile& v) {
  UtilModel model(v);
  auto first = lp::solve_min(model.cost_vector(), model.base);
  if (!first.feasible) {
    throw invariant_error("utilitarian base program infeasible");
  }

  Division lexmin = polish(lexic_extreme(model, first.objective, +1.0));
  Division lexmax = polish(lexic_extreme(model, first.objective, -1.0));

  bool unique = true;
  for (std::size_t j = 0; j < v.projects(); ++j) {
    if (std::abs(lexmin[j] - lexmax[j]) > 1e-7) unique = false;
  }
  return SocialCostSolution{lexmin, social_cost(v, lexmin), unique};
}

}  // namespace phantom
