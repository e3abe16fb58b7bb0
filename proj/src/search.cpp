#include "phantom/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "phantom/engine.hpp"
#include "phantom/parallel.hpp"
#include "phantom/systems.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phantom {

namespace {

enum class Family { PU, IM, Uniform };

Family parse_family(const std::string& name) {
  if (name == "pu") return Family::PU;
  if (name == "im") return Family::IM;
  if (name == "uniform") return Family::Uniform;
  throw mechanism_mismatch("search supports pu, im, uniform; got " + name);
}

// Relaxed phantom value at index fraction z. For IM the time axis is
// s = n*t, which is scale free in the voter count.
double family_phantom(Family f, double z, double t) {
  z = std::clamp(z, 0.0, 1.0);
  switch (f) {
    case Family::PU: return relaxed_phantom(z, t);
    case Family::IM: return std::min(z * t, 1.0);
    case Family::Uniform: return z;
  }
  return 0.0;
}

constexpr double kImTimeCap = 10.0;  // the binding region sits near s ~ 0.7

// One sign/bracket case of the worst-case program. The search variables
// are the nine voter-class masses (four in the zero regime, two for the
// two-project analogue); the outcome coordinates are pinned to their
// sign-favorable phantom bound and, in the standard regime, the time is
// recovered from the simplex equation.
struct Cell {
  std::string label;
  std::array<int, 3> sign{};  // +1 / -1 per project
  std::array<int, 3> lo_b{};  // -1 none, 0 black, 1 red (bracket of z_j)
  std::array<int, 3> hi_b{};  // bracket of C + q_j + z_j
  double t_lo = 0.0, t_hi = 1.0;
  bool zero_case = false;
  bool two_projects = false;
  int dims = 9;  // mass dims (+1 trailing t dim in the zero regime)
};

struct Masses {
  std::array<double, 3> singles{};
  std::array<std::array<double, 3>, 3> doubles{};

  double total() const {
    double s = singles[0] + singles[1] + singles[2];
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) s += doubles[j][k];
    }
    return s;
  }
};

Masses unpack_masses(const Cell& cell, const std::vector<double>& p) {
  Masses m;
  if (cell.two_projects) {
    m.singles = {p[0], p[1], 0.0};
  } else if (cell.zero_case) {
    m.singles = {p[0], p[1], p[2]};
    m.doubles[0][2] = p[3];
    m.doubles[1][2] = p[4];
    // Voters agreeing on the zero project are unit vectors; they live in
    // the single-minded masses already.
  } else {
    m.singles = {p[0], p[1], p[2]};
    m.doubles[0][1] = p[3];
    m.doubles[0][2] = p[4];
    m.doubles[1][0] = p[5];
    m.doubles[1][2] = p[6];
    m.doubles[2][0] = p[7];
    m.doubles[2][1] = p[8];
  }
  return m;
}

RelaxedThreeType assemble(const Cell& cell, const Masses& m,
                          const std::array<double, 3>& x, double t) {
  RelaxedThreeType r{};
  r.x = x;
  r.singles = m.singles;
  r.doubles = m.doubles;
  r.t = cell.two_projects ? 0.0 : t;  // the uniform family ignores t
  return r;
}

struct Eval {
  bool feasible = false;
  double loss = 0.0;
  double violation = std::numeric_limits<double>::infinity();
  RelaxedThreeType point{};

  bool better_than(const Eval& o) const {
    if (feasible != o.feasible) return feasible;
    return feasible ? loss > o.loss : violation < o.violation;
  }
};

// Feasibility audit shared by every cell kind: mass positivity, bracket
// membership, the phantom sandwich and the sign pattern. Returns the
// violation total; zero (within 1e-10) means feasible.
double audit(Family fam, const Cell& cell, const RelaxedThreeType& r,
             double* loss_out) {
  double bad = 0.0;
  auto need = [&](double v) { bad += std::max(0.0, v); };

  const int nproj = cell.two_projects ? 2 : 3;
  double xsum = 0.0;
  for (int j = 0; j < nproj; ++j) {
    need(-r.x[j]);
    need(r.x[j] - 1.0);
    xsum += r.x[j];
  }
  need(std::abs(xsum - 1.0) - 1e-9);
  double mass = 0.0;
  for (int j = 0; j < 3; ++j) {
    need(-r.singles[j]);
    mass += r.singles[j];
    for (int k = 0; k < 3; ++k) {
      need(-r.doubles[j][k]);
      mass += r.doubles[j][k];
    }
  }
  need(mass - 1.0);
  const double c = 1.0 - mass;
  need(cell.t_lo - r.t);
  need(r.t - cell.t_hi);

  const auto z = r.mass_above();
  const auto q = r.agreeing_doubles();

  if (cell.zero_case) {
    const double u0 = 1.0 - r.singles[1] - r.singles[2] - r.doubles[1][2];
    const double u1 = 1.0 - r.singles[0] - r.singles[2] - r.doubles[0][2];
    need(0.5 - u0);  // upper phantoms must be red
    need(0.5 - u1);
    need(family_phantom(fam, r.singles[0], r.t) - r.x[0]);
    need(family_phantom(fam, r.singles[1], r.t) - r.x[1]);
    need(r.x[0] - family_phantom(fam, u0, r.t));
    need(r.x[1] - family_phantom(fam, u1, r.t));
    for (int j = 0; j < 2; ++j) {
      if (cell.lo_b[j] == 0) need(r.singles[j] - 0.5);
      if (cell.lo_b[j] == 1) need(0.5 - r.singles[j]);
    }
  } else {
    for (int j = 0; j < nproj; ++j) {
      const double hi_idx = c + q[j] + z[j];
      need(family_phantom(fam, z[j], r.t) - r.x[j]);
      need(r.x[j] - family_phantom(fam, hi_idx, r.t));
      if (cell.lo_b[j] == 0) need(z[j] - 0.5);
      if (cell.lo_b[j] == 1) need(0.5 - z[j]);
      if (cell.hi_b[j] == 0) need(hi_idx - 0.5);
      if (cell.hi_b[j] == 1) need(0.5 - hi_idx);
    }
  }

  const auto vb = r.means();
  double l = 0.0;
  for (int j = 0; j < nproj; ++j) {
    const double gap = vb[j] - r.x[j];
    need(-cell.sign[j] * gap);
    l += std::abs(gap);
  }
  if (cell.two_projects) l = 2.0 * std::abs(vb[0] - r.x[0]);
  if (loss_out) *loss_out = l;
  return bad;
}

Eval score_full(Family fam, const Cell& cell, const RelaxedThreeType& r) {
  Eval e;
  e.point = r;
  e.violation = audit(fam, cell, r, &e.loss);
  e.feasible = e.violation <= 1e-10;
  return e;
}

// Reduced evaluation: given masses (and t in the regimes where it stays
// free), pin every outcome coordinate to the phantom bound its sign
// pattern pushes it against, then close the simplex equation.
Eval reduced_eval(Family fam, const Cell& cell, const std::vector<double>& p) {
  const Masses m = unpack_masses(cell, p);
  const double c = 1.0 - m.total();

  if (cell.two_projects) {
    // x0 range: [max(a0, 1-a1-C), min(a0+C, 1-a1)]
    const double lo = std::max(m.singles[0], 1.0 - m.singles[1] - c);
    const double hi = std::min(m.singles[0] + c, 1.0 - m.singles[1]);
    const double x0 = cell.sign[0] > 0 ? lo : hi;
    return score_full(fam, cell, assemble(cell, m, {x0, 1.0 - x0, 0.0}, 0.0));
  }

  if (cell.zero_case) {
    const double t = p[cell.dims - 1];
    const double u0 = 1.0 - m.singles[1] - m.singles[2] - m.doubles[1][2];
    const double u1 = 1.0 - m.singles[0] - m.singles[2] - m.doubles[0][2];
    const double lo0 = family_phantom(fam, m.singles[0], t);
    const double hi0 = family_phantom(fam, u0, t);
    const double lo1 = family_phantom(fam, m.singles[1], t);
    const double hi1 = family_phantom(fam, u1, t);
    const double lo = std::max(lo0, 1.0 - hi1);
    const double hi = std::min(hi0, 1.0 - lo1);
    const double x0 = cell.sign[0] > 0 ? lo : hi;
    return score_full(fam, cell, assemble(cell, m, {x0, 1.0 - x0, 0.0}, t));
  }

  RelaxedThreeType probe = assemble(cell, m, {0, 0, 0}, 0.0);
  const auto z = probe.mass_above();
  const auto q = probe.agreeing_doubles();
  auto pinned_sum = [&](double t, std::array<double, 3>* out) {
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double xj = cell.sign[j] > 0
                            ? family_phantom(fam, z[j], t)
                            : family_phantom(fam, c + q[j] + z[j], t);
      if (out) (*out)[j] = xj;
      sum += xj;
    }
    return sum;
  };

  // The pinned coordinates rise with t, so the simplex equation has a
  // bracketed root whenever the endpoints straddle 1.
  double lo = cell.t_lo, hi = cell.t_hi;
  const double slo = pinned_sum(lo, nullptr), shi = pinned_sum(hi, nullptr);
  double t;
  if (slo > 1.0) {
    t = lo;
  } else if (shi < 1.0) {
    t = hi;
  } else {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (pinned_sum(mid, nullptr) < 1.0 ? lo : hi) = mid;
    }
    t = 0.5 * (lo + hi);
  }
  std::array<double, 3> x{};
  pinned_sum(t, &x);
  // Spread the residual over the largest coordinate to land exactly on
  // the simplex (the audit would otherwise reject by a rounding hair).
  const double resid = 1.0 - x[0] - x[1] - x[2];
  if (std::abs(resid) <= 1e-7) {
    int jmax = 0;
    for (int j = 1; j < 3; ++j) {
      if (x[j] > x[jmax]) jmax = j;
    }
    x[jmax] += resid;
  }
  return score_full(fam, cell, assemble(cell, m, x, t));
}

std::vector<double> sample_start(const Cell& cell, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::exponential_distribution<double> exp1(1.0);
  const int nmass = cell.zero_case ? cell.dims - 1 : cell.dims;
  std::vector<double> p(cell.dims, 0.0);

  // Alternate dense and sparse draws: worst cases concentrate the mass
  // on very few voter classes, which dense Dirichlet starts rarely do.
  std::vector<int> active(nmass);
  for (int i = 0; i < nmass; ++i) active[i] = i;
  if (uni(rng) < 0.5) {
    std::shuffle(active.begin(), active.end(), rng);
    const int keep = 1 + static_cast<int>(uni(rng) * 3.0);
    active.resize(std::min<std::size_t>(active.size(), keep));
  }
  double sum = exp1(rng);  // satisfied share
  std::vector<double> draw(active.size());
  for (double& v : draw) {
    v = exp1(rng);
    sum += v;
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    p[active[i]] = draw[i] / sum;
  }
  if (cell.zero_case) {
    p[cell.dims - 1] = cell.t_lo + (cell.t_hi - cell.t_lo) * uni(rng);
  }
  return p;
}

struct Climbed {
  Eval eval;
};

// Coordinate ascent over the reduced variables with a geometric step
// schedule. Every evaluation re-derives the pinned outcome, so moves in
// mass space track the binding constraints instead of fighting them.
Climbed climb(Family fam, const Cell& cell, std::mt19937_64& rng,
              long long* evals) {
  std::vector<double> p = sample_start(cell, rng);
  Eval best = reduced_eval(fam, cell, p);
  ++*evals;

  const int tdim = cell.zero_case ? cell.dims - 1 : -1;
  const int nmass = tdim < 0 ? cell.dims : cell.dims - 1;
  for (double scale = 0.1; scale >= 0.9e-6; scale *= 0.1) {
    for (int sweep = 0; sweep < 3; ++sweep) {
      bool moved = false;
      auto attempt = [&](std::vector<double>&& cand) {
        Eval e = reduced_eval(fam, cell, cand);
        ++*evals;
        if (e.better_than(best)) {
          best = e;
          p = std::move(cand);
          moved = true;
        }
      };
      for (int d = 0; d < cell.dims; ++d) {
        const double range = d == tdim ? cell.t_hi - cell.t_lo : 1.0;
        for (double dir : {+1.0, -1.0}) {
          std::vector<double> cand = p;
          cand[d] = std::max(0.0, cand[d] + dir * scale * range);
          if (d == tdim) cand[d] = std::clamp(cand[d], cell.t_lo, cell.t_hi);
          attempt(std::move(cand));
        }
      }
      // Mass transfers walk along the binding-constraint surfaces that
      // single-coordinate steps bounce off.
      for (int da = 0; da < nmass; ++da) {
        for (int db = 0; db < nmass; ++db) {
          if (da == db) continue;
          std::vector<double> cand = p;
          cand[da] += scale;
          cand[db] = std::max(0.0, cand[db] - scale);
          attempt(std::move(cand));
        }
      }
      if (!moved) break;
    }
  }
  return {best};
}

std::vector<Cell> build_cells(Family fam) {
  std::vector<Cell> cells;
  if (fam == Family::Uniform) {
    for (int flip = 0; flip < 2; ++flip) {
      Cell c;
      c.sign = {flip ? -1 : +1, flip ? +1 : -1, +1};
      c.two_projects = true;
      c.dims = 2;
      c.t_lo = c.t_hi = 0.0;
      c.lo_b = {-1, -1, -1};
      c.hi_b = {-1, -1, -1};
      c.label = flip ? "(-,+)" : "(+,-)";
      cells.push_back(std::move(c));
    }
    return cells;
  }

  if (fam == Family::PU) {
    for (const PatternPair& pat : enumerate_patterns()) {
      Cell c;
      for (int j = 0; j < 3; ++j) {
        c.sign[j] = static_cast<int>(pat.signs[j]);
        switch (pat.phantoms[j]) {
          case Bracket::BlackBlack: c.lo_b[j] = 0; c.hi_b[j] = 0; break;
          case Bracket::BlackRed: c.lo_b[j] = 0; c.hi_b[j] = 1; break;
          case Bracket::RedRed: c.lo_b[j] = 1; c.hi_b[j] = 1; break;
        }
      }
      c.t_lo = 0.5;
      c.t_hi = 1.0;
      c.label = pat.label();
      c.dims = 9;
      cells.push_back(std::move(c));
    }
    // The x3 = 0 regime below t = 1/2: project 3's sign is forced to +,
    // upper phantoms are red, and only the lower brackets vary.
    for (int s1 : {+1, -1}) {
      for (int lo0 : {0, 1}) {
        for (int lo1 : {0, 1}) {
          Cell c;
          c.sign = {-1, s1, +1};
          c.lo_b = {lo0, lo1, -1};
          c.hi_b = {1, 1, -1};
          c.t_lo = 0.0;
          c.t_hi = 0.5;
          c.zero_case = true;
          c.dims = 6;  // a0 a1 a2 b02 b12 t
          c.label = std::string("zero (-,") + (s1 > 0 ? "+" : "-") + ",+) " +
                    (lo0 ? "(r,r)" : "(b,r)") + "," + (lo1 ? "(r,r)" : "(b,r)");
          cells.push_back(std::move(c));
        }
      }
    }
    return cells;
  }

  // IM has no black/red split; only the two sign cases remain.
  const std::array<std::array<int, 3>, 2> signs = {
      std::array<int, 3>{+1, -1, -1}, std::array<int, 3>{+1, +1, -1}};
  for (const auto& s : signs) {
    Cell c;
    c.sign = s;
    c.lo_b = {-1, -1, -1};
    c.hi_b = {-1, -1, -1};
    c.t_lo = 0.0;
    c.t_hi = kImTimeCap;
    c.label = std::string("(") + (s[0] > 0 ? "+" : "-") + "," +
              (s[1] > 0 ? "+" : "-") + "," + (s[2] > 0 ? "+" : "-") + ")";
    c.dims = 9;
    cells.push_back(std::move(c));
  }
  return cells;
}

struct RoundedWitness {
  double loss = -1.0;
  int n = 0;
  std::optional<ThreeTypeProfile> three_type;
  std::optional<Profile> profile;
};

long long llround_clamped(double v, long long lo, long long hi) {
  return std::clamp(static_cast<long long>(std::llround(v)), lo, hi);
}

// Rounds the relaxed masses to counts over n voters and evaluates the
// resulting profile through the actual mechanism.
RoundedWitness round_and_verify(Family fam, const RelaxedThreeType& r, int n,
                                bool two_projects) {
  RoundedWitness w;
  w.n = n;
  if (two_projects) {
    const int a0 = static_cast<int>(llround_clamped(r.singles[0] * n, 0, n));
    const int a1 =
        static_cast<int>(llround_clamped(r.singles[1] * n, 0, n - a0));
    const int c = n - a0 - a1;
    const double x0 = std::clamp(r.x[0], 0.0, 1.0);
    std::vector<Division> rows;
    rows.reserve(n);
    for (int i = 0; i < c; ++i) rows.push_back(Division({x0, 1.0 - x0}));
    for (int i = 0; i < a0; ++i) rows.push_back(Division({1.0, 0.0}));
    for (int i = 0; i < a1; ++i) rows.push_back(Division({0.0, 1.0}));
    if (rows.size() < 2) return w;
    Profile prof(std::move(rows));
    const Division out = uniform_phantom_m2(prof);
    w.loss = loss(prof, out);
    w.profile = std::move(prof);
    return w;
  }

  std::array<int, 3> a{};
  std::array<std::array<int, 3>, 3> b{};
  long long used = 0;
  for (int j = 0; j < 3; ++j) {
    a[j] = static_cast<int>(llround_clamped(r.singles[j] * n, 0, n - used));
    used += a[j];
  }
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      b[j][k] =
          static_cast<int>(llround_clamped(r.doubles[j][k] * n, 0, n - used));
      used += b[j][k];
    }
  }
  std::vector<double> x = {r.x[0], r.x[1], r.x[2]};
  double xs = 0.0;
  for (double& xj : x) {
    xj = std::clamp(xj, 0.0, 1.0);
    xs += xj;
  }
  for (double& xj : x) xj /= xs;
  try {
    ThreeTypeProfile t3(Division(x), a, b, n);
    Profile prof = t3.expand();
    const PhantomSystem sys = fam == Family::PU
                                  ? piecewise_uniform_system(n)
                                  : independent_markets_system(n);
    const AggregationResult agg = aggregate(prof, sys);
    w.loss = loss(prof, agg.outcome);
    w.three_type = std::move(t3);
    w.profile = std::move(prof);
  } catch (const invariant_error&) {
    // Unroundable corner; the caller tries the next denominator.
  }
  return w;
}

Eval run_cell(Family fam, const Cell& cell, long long budget,
              std::uint64_t seed, std::size_t cell_idx) {
  const int est_per_restart = (2 * cell.dims + cell.dims * (cell.dims - 1)) * 3 * 6 + 1;
  const long long restarts = std::max(1LL, budget / est_per_restart);

  std::vector<Eval> results(restarts);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(thread_budget())
#endif
  for (long long rix = 0; rix < restarts; ++rix) {
    std::mt19937_64 rng(derive_seed(seed, cell_idx, rix));
    long long used = 0;
    results[rix] = climb(fam, cell, rng, &used).eval;
  }

  Eval best = results[0];
  for (long long rix = 1; rix < restarts; ++rix) {
    if (results[rix].better_than(best)) best = results[rix];
  }
  return best;
}

const int kDenominators[] = {60, 600, 6000, 600000};

}  // namespace

SearchOutcome search_max_loss(const std::string& family, long long budget,
                              std::uint64_t seed) {
  if (budget < 1) throw invariant_error("search budget must be at least 1");
  const Family fam = parse_family(family);
  const std::vector<Cell> cells = build_cells(fam);
  const long long per_cell = std::max<long long>(1, budget / cells.size());

  SearchOutcome out;
  out.family = family;
  out.best_relaxed = -1.0;

  std::size_t best_cell = 0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    Eval cb = run_cell(fam, cells[ci], per_cell, seed, ci);
    PatternCellReport rep;
    rep.label = cells[ci].label;
    rep.feasible = cb.feasible;
    rep.best_relaxed = cb.feasible ? cb.loss : 0.0;
    out.cells.push_back(rep);
    if (cb.feasible && cb.loss > out.best_relaxed) {
      out.best_relaxed = cb.loss;
      out.best_point = cb.point;
      best_cell = ci;
    }
  }
  if (out.best_relaxed < 0.0) {
    throw invariant_error("search found no feasible point in any cell");
  }

  const bool two = cells[best_cell].two_projects;
  for (int n : kDenominators) {
    RoundedWitness w = round_and_verify(fam, out.best_point, n, two);
    if (w.loss > out.witness_loss) {
      out.witness_loss = w.loss;
      out.witness_voters = w.n;
      out.witness = std::move(w.three_type);
      out.witness_profile = std::move(w.profile);
    }
  }
  return out;
}

std::optional<Counterexample> falsify_upper_bound(const std::string& family,
                                                  double threshold,
                                                  long long budget,
                                                  std::uint64_t seed) {
  if (!(threshold > 0.0 && threshold < 2.0)) {
    throw invariant_error("threshold must lie in (0, 2)");
  }
  const Family fam = parse_family(family);
  const std::vector<Cell> cells = build_cells(fam);
  const long long per_cell = std::max<long long>(1, budget / cells.size());

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    Eval cb = run_cell(fam, cells[ci], per_cell, seed, ci);
    if (!cb.feasible) continue;
    // Rounding moves the loss by O(1/n); only candidates near or above
    // the bar can verify past it.
    if (cb.loss <= threshold - 1e-3) continue;
    for (int n : kDenominators) {
      RoundedWitness w = round_and_verify(fam, cb.point, n,
                                          cells[ci].two_projects);
      if (w.loss > threshold && w.profile.has_value()) {
        return Counterexample{w.loss, std::move(w.three_type),
                              std::move(*w.profile)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace phantom
