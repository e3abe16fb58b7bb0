#include "phantom/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace phantom::lp {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;

// Dense simplex tableau. Columns: structural vars, slack/surplus vars,
// artificial vars, rhs. Row `rows` is the objective under minimization.
struct Tableau {
  std::size_t rows, cols;       // constraint rows, total columns incl. rhs
  std::vector<double> a;        // (rows + 1) * cols
  std::vector<int> basis;       // basic variable per row
  std::size_t art_begin;        // first artificial column
  std::size_t rhs;              // rhs column index

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c < cols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = static_cast<int>(pc);
  }

  // Bland's rule: lowest eligible entering column, lowest basis index on
  // ratio ties. `allowed` bounds the entering column range.
  bool iterate(std::size_t allowed) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (at(rows, c) < -kCostTol) {
          enter = c;
          break;
        }
      }
      if (enter == allowed) return true;  // optimal
      std::size_t leave = rows;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        const double col = at(r, enter);
        if (col > kPivotTol) {
          const double ratio = at(r, rhs) / col;
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && leave < rows &&
               basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows) return false;  // unbounded
      pivot(leave, enter);
    }
  }
};

}  // namespace

Solution solve_min(const std::vector<double>& c,
                   const std::vector<Constraint>& rows) {
  const std::size_t nvar = c.size();
  const std::size_t m = rows.size();

  // Count auxiliary columns: one slack/surplus per inequality, one
  // artificial per row that lacks an obvious basic slack.
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    const bool flip = r.rhs < 0.0;
    Relation rel = r.rel;
    if (flip) {
      rel = rel == Relation::LessEq
                ? Relation::GreaterEq
                : (rel == Relation::GreaterEq ? Relation::LessEq : Relation::Eq);
    }
    if (rel != Relation::Eq) ++n_slack;
    if (rel != Relation::LessEq) ++n_art;
  }

  Tableau t;
  t.rows = m;
  t.art_begin = nvar + n_slack;
  t.cols = nvar + n_slack + n_art + 1;
  t.rhs = t.cols - 1;
  t.a.assign((m + 1) * t.cols, 0.0);
  t.basis.assign(m, -1);

  std::size_t slack_c = nvar, art_c = t.art_begin;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = rows[r];
    if (row.coeffs.size() != nvar) {
      throw std::invalid_argument("lp row width mismatch");
    }
    const bool flip = row.rhs < 0.0;
    const double sgn = flip ? -1.0 : 1.0;
    Relation rel = row.rel;
    if (flip) {
      rel = rel == Relation::LessEq
                ? Relation::GreaterEq
                : (rel == Relation::GreaterEq ? Relation::LessEq : Relation::Eq);
    }
    for (std::size_t j = 0; j < nvar; ++j) t.at(r, j) = sgn * row.coeffs[j];
    t.at(r, t.rhs) = sgn * row.rhs;
    if (rel == Relation::LessEq) {
      t.at(r, slack_c) = 1.0;
      t.basis[r] = static_cast<int>(slack_c++);
    } else if (rel == Relation::GreaterEq) {
      t.at(r, slack_c++) = -1.0;
      t.at(r, art_c) = 1.0;
      t.basis[r] = static_cast<int>(art_c++);
    } else {
      t.at(r, art_c) = 1.0;
      t.basis[r] = static_cast<int>(art_c++);
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (std::size_t cidx = t.art_begin; cidx < t.rhs; ++cidx) {
      t.at(m, cidx) = 1.0;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis[r] >= static_cast<int>(t.art_begin)) {
        for (std::size_t cidx = 0; cidx < t.cols; ++cidx) {
          t.at(m, cidx) -= t.at(r, cidx);
        }
      }
    }
    if (!t.iterate(t.art_begin)) return {};  // phase 1 cannot be unbounded
    if (t.at(m, t.rhs) < -1e-7) return {};   // infeasible
    // Pivot leftover artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis[r] >= static_cast<int>(t.art_begin)) {
        for (std::size_t cidx = 0; cidx < t.art_begin; ++cidx) {
          if (std::abs(t.at(r, cidx)) > 1e-7) {
            t.pivot(r, cidx);
            break;
          }
        }
      }
    }
  }

  // Phase 2: install the real objective, priced out over the basis.
  for (std::size_t cidx = 0; cidx < t.cols; ++cidx) t.at(m, cidx) = 0.0;
  for (std::size_t j = 0; j < nvar; ++j) t.at(m, j) = c[j];
  for (std::size_t r = 0; r < m; ++r) {
    const int b = t.basis[r];
    if (b >= 0 && b < static_cast<int>(nvar) && c[b] != 0.0) {
      for (std::size_t cidx = 0; cidx < t.cols; ++cidx) {
        t.at(m, cidx) -= c[b] * t.at(r, cidx);
      }
    }
  }
  if (!t.iterate(t.art_begin)) return {};  // unbounded

  Solution s;
  s.feasible = true;
  s.x.assign(nvar, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis[r] >= 0 && t.basis[r] < static_cast<int>(nvar)) {
      s.x[t.basis[r]] = t.at(r, t.rhs);
    }
  }
  s.objective = 0.0;
  for (std::size_t j = 0; j < nvar; ++j) s.objective += c[j] * s.x[j];
  return s;
}

}  // namespace phantom::lp
