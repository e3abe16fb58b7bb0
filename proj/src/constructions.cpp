#include "phantom/constructions.hpp"

#include <cmath>
#include <sstream>

#include "phantom/engine.hpp"
#include "phantom/utilitarian.hpp"

namespace phantom {

namespace {

Division unit(std::size_t m, std::size_t j) {
  std::vector<double> s(m, 0.0);
  s[j] = 1.0;
  return Division(std::move(s));
}

// Smallest k with k^3 >= m^2; avoids cbrt rounding at perfect cubes.
std::size_t ceil_m_to_two_thirds(std::size_t m) {
  std::size_t k = 1;
  while (k * k * k < m * m) ++k;
  return k;
}

Construction build_truthful(const ConstructionSpec& spec) {
  if (spec.n != 2) throw invariant_error("truthful-lb uses exactly 2 voters");
  if (spec.m < 2) throw invariant_error("truthful-lb needs m >= 2");
  Profile v({unit(spec.m, 0), unit(spec.m, 1)});
  return Construction{std::move(v), 0.5, false,
                      "two antagonistic single-minded voters; bound max(1-x1,1-x2) >= 1/2"};
}

Construction build_phantom(const ConstructionSpec& spec) {
  if (spec.m < 2) throw invariant_error("phantom-lb needs m >= 2");
  if (spec.n < 2 || spec.n % 2 != 0) {
    throw invariant_error("phantom-lb needs an even voter count");
  }
  std::vector<Division> rows;
  rows.reserve(spec.n);
  const Division uniform(
      std::vector<double>(spec.m, 1.0 / static_cast<double>(spec.m)));
  for (std::size_t i = 0; i < spec.n / 2; ++i) rows.push_back(unit(spec.m, 0));
  for (std::size_t i = 0; i < spec.n / 2; ++i) rows.push_back(uniform);
  std::ostringstream d;
  d << spec.n / 2 << " voters on project 1, " << spec.n / 2
    << " at the uniform division; any phantom system lands at (1/m,...,1/m)";
  return Construction{Profile(std::move(rows)),
                      1.0 - 1.0 / static_cast<double>(spec.m), true, d.str()};
}

Construction build_im(const ConstructionSpec& spec) {
  if (spec.m != 3) throw invariant_error("im-lb is a three-project instance");
  if (spec.n < 3) throw invariant_error("im-lb needs n >= 3");
  const double rho = 2.0 - std::sqrt(2.0);
  const auto n = static_cast<double>(spec.n);
  const auto floor_rho = static_cast<std::size_t>(std::floor(n * rho));
  const auto ceil_rest = spec.n - floor_rho;  // = ceil(n (1 - rho))
  const double s2 = std::sqrt(2.0);
  const Division x({s2 - 1.0, 1.0 - s2 / 2.0, 1.0 - s2 / 2.0});
  std::vector<Division> rows;
  rows.reserve(spec.n);
  for (std::size_t i = 0; i < floor_rho; ++i) rows.push_back(unit(3, 0));
  for (std::size_t i = 0; i < ceil_rest; ++i) rows.push_back(x);
  const double predicted =
      (3.0 - 2.0 * s2) * (1.0 - static_cast<double>(ceil_rest) / n) +
      static_cast<double>(floor_rho) / n;
  std::ostringstream d;
  d << floor_rho << " single-minded voters, " << ceil_rest
    << " at (sqrt(2)-1, 1-sqrt(2)/2, 1-sqrt(2)/2); limit loss 12-8*sqrt(2)";
  return Construction{Profile(std::move(rows)), predicted, true, d.str()};
}

Construction build_prop(const ConstructionSpec& spec) {
  if (spec.m < 8) throw invariant_error("prop-lb needs m >= 8");
  const std::size_t m = spec.m;
  if (spec.n != m) {
    throw invariant_error("prop-lb uses n = m voters");
  }
  const std::size_t k = ceil_m_to_two_thirds(m);  // m - z
  const std::size_t z = m - k;
  const std::size_t a = k * k;
  if (k > m / 2) {
    throw invariant_error(
        "prop-lb requires m - z <= m/2; this m is below the regime");
  }
  std::vector<double> shares(m);
  for (std::size_t j = 0; j < m; ++j) {
    shares[j] = (j < z ? 1.0 : static_cast<double>(k)) /
                static_cast<double>(a + z);
  }
  const Division x(std::move(shares));
  std::vector<Division> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < z; ++i) rows.push_back(unit(m, i));
  for (std::size_t i = z; i < m; ++i) rows.push_back(x);
  const double predicted = 2.0 * (static_cast<double>(a) / (a + z)) *
                           (static_cast<double>(z) / m);
  std::ostringstream d;
  d << "z=" << z << " single-minded voters, a=" << a
    << "; loss 2*(a/(a+z))*(z/m) >= 2-8/m^(1/3)";
  return Construction{Profile(std::move(rows)), predicted, true, d.str()};
}

Construction build_util(const ConstructionSpec& spec) {
  if (spec.m < 2) throw invariant_error("util-lb needs m >= 2");
  if (spec.n != spec.m + 1) {
    throw invariant_error("util-lb uses n = m + 1 voters");
  }
  std::vector<Division> rows;
  rows.reserve(spec.n);
  for (std::size_t j = 0; j < spec.m; ++j) rows.push_back(unit(spec.m, j));
  rows.push_back(unit(spec.m, 0));
  std::ostringstream d;
  d << "every project backed once, project 1 twice; any welfare maximizer "
       "returns the first unit vector";
  return Construction{Profile(std::move(rows)),
                      2.0 - 4.0 / static_cast<double>(spec.m + 1), true,
                      d.str()};
}

Division run_mechanism(const Profile& v, const std::string& mechanism,
                       std::optional<double>* tstar) {
  if (mechanism == "utilitarian") {
    return utilitarian_outcome(v).outcome;
  }
  if (mechanism == "uniform") {
    return uniform_phantom_m2(v);
  }
  const PhantomSystem y =
      system_from_descriptor(mechanism, static_cast<int>(v.voters()));
  // Exact-match predictions are asserted at 1e-9, so drive the root
  // search well past that.
  AggregationResult res = aggregate(v, y, 1e-12);
  if (tstar) *tstar = res.tstar;
  return res.outcome;
}

}  // namespace

ConstructionKind construction_from_tag(const std::string& tag) {
  if (tag == "truthful-lb") return ConstructionKind::TruthfulLB;
  if (tag == "phantom-lb") return ConstructionKind::PhantomLB;
  if (tag == "im-lb") return ConstructionKind::ImLB;
  if (tag == "prop-lb") return ConstructionKind::PropLB;
  if (tag == "util-lb") return ConstructionKind::UtilLB;
  throw mechanism_mismatch("unknown construction tag: " + tag);
}

std::string construction_tag(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::TruthfulLB: return "truthful-lb";
    case ConstructionKind::PhantomLB: return "phantom-lb";
    case ConstructionKind::ImLB: return "im-lb";
    case ConstructionKind::PropLB: return "prop-lb";
    case ConstructionKind::UtilLB: return "util-lb";
  }
  return "";
}

Construction build(const ConstructionSpec& spec) {
  switch (spec.kind) {
    case ConstructionKind::TruthfulLB: return build_truthful(spec);
    case ConstructionKind::PhantomLB: return build_phantom(spec);
    case ConstructionKind::ImLB: return build_im(spec);
    case ConstructionKind::PropLB: return build_prop(spec);
    case ConstructionKind::UtilLB: return build_util(spec);
  }
  throw invariant_error("unreachable construction kind");
}

ConstructionReport verify_construction(const ConstructionSpec& spec,
                                       const std::string& mechanism) {
  const bool phantom_family = mechanism == "im" || mechanism == "pu" ||
                              mechanism == "pu-prime" || mechanism == "uniform";
  switch (spec.kind) {
    case ConstructionKind::TruthfulLB:
      if (!phantom_family) {
        throw mechanism_mismatch("truthful-lb targets truthful mechanisms");
      }
      break;
    case ConstructionKind::PhantomLB:
      if (!phantom_family || mechanism == "uniform") {
        throw mechanism_mismatch(
            "phantom-lb targets moving phantom mechanisms");
      }
      break;
    case ConstructionKind::ImLB:
      if (mechanism != "im") {
        throw mechanism_mismatch("im-lb targets the independent markets mechanism");
      }
      break;
    case ConstructionKind::PropLB:
      if (mechanism != "pu" && mechanism != "im") {
        throw mechanism_mismatch("prop-lb targets the proportional mechanisms");
      }
      break;
    case ConstructionKind::UtilLB:
      if (mechanism != "utilitarian") {
        throw mechanism_mismatch("util-lb targets utilitarian mechanisms");
      }
      break;
  }

  Construction built = build(spec);
  ConstructionReport rep{spec,
                         mechanism,
                         built.predicted_loss,
                         0.0,
                         Division(std::vector<double>(spec.m, 1.0 / spec.m)),
                         false,
                         built.derivation};

  if (spec.kind == ConstructionKind::TruthfulLB) {
    // The bound argument: feed the mechanism's own outcome back as a
    // report; truthfulness pins the outcome, and one of the two derived
    // profiles loses at least max(1-x1, 1-x2) >= 1/2.
    const Division x = run_mechanism(built.profile, mechanism, nullptr);
    Profile swapped_first({x, unit(spec.m, 1)});
    Profile swapped_second({unit(spec.m, 0), x});
    const Division out1 = run_mechanism(swapped_first, mechanism, nullptr);
    const Division out2 = run_mechanism(swapped_second, mechanism, nullptr);
    const bool pinned =
        l1_distance(out1, x) <= 1e-7 && l1_distance(out2, x) <= 1e-7;
    const double worst =
        std::max(loss(swapped_first, out1), loss(swapped_second, out2));
    const double expected = std::max(1.0 - x[0], 1.0 - x[1]);
    rep.outcome = x;
    rep.actual_loss = worst;
    rep.passed = pinned && worst >= 0.5 - 1e-9 &&
                 std::abs(worst - expected) <= 1e-9;
    if (!pinned) rep.detail += "; outcome moved under the derived profiles";
    return rep;
  }

  rep.outcome = run_mechanism(built.profile, mechanism, nullptr);
  rep.actual_loss = loss(built.profile, rep.outcome);
  rep.passed = built.prediction_is_exact
                   ? std::abs(rep.actual_loss - built.predicted_loss) <= 1e-9
                   : rep.actual_loss >= built.predicted_loss - 1e-9;

  if (spec.kind == ConstructionKind::PhantomLB && rep.passed) {
    for (std::size_t j = 0; j < spec.m; ++j) {
      if (std::abs(rep.outcome[j] - 1.0 / static_cast<double>(spec.m)) >
          1e-9) {
        rep.passed = false;
        rep.detail += "; outcome off the uniform division";
        break;
      }
    }
  }
  if (spec.kind == ConstructionKind::UtilLB && rep.passed) {
    if (std::abs(rep.outcome[0] - 1.0) > 1e-9) {
      rep.passed = false;
      rep.detail += "; welfare optimum is not the doubly-backed project";
    }
  }
  return rep;
}

}  // namespace phantom
