#include "phantom/relaxed.hpp"

#include <cmath>

#include "phantom/systems.hpp"

namespace phantom {

double RelaxedThreeType::single_total() const {
  return singles[0] + singles[1] + singles[2];
}

double RelaxedThreeType::double_total() const {
  double b = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) b += doubles[j][k];
  }
  return b;
}

double RelaxedThreeType::satisfied_mass() const {
  return 1.0 - single_total() - double_total();
}

std::array<double, 3> RelaxedThreeType::mass_above() const {
  std::array<double, 3> z{};
  for (int j = 0; j < 3; ++j) {
    z[j] = singles[j];
    for (int k = 0; k < 3; ++k) {
      if (k != j) z[j] += doubles[k][j];
    }
  }
  return z;
}

std::array<double, 3> RelaxedThreeType::agreeing_doubles() const {
  std::array<double, 3> q{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (k != j) q[j] += doubles[j][k];
    }
  }
  return q;
}

std::array<double, 3> RelaxedThreeType::means() const {
  const double c = satisfied_mass();
  const auto q = agreeing_doubles();
  std::array<double, 3> vb{};
  for (int j = 0; j < 3; ++j) {
    vb[j] = singles[j] + x[j] * (c + q[j]);
    for (int k = 0; k < 3; ++k) {
      if (k != j) vb[j] += (1.0 - x[k]) * doubles[k][j];
    }
  }
  return vb;
}

double relaxed_loss(const RelaxedThreeType& r) {
  const auto vb = r.means();
  double l = 0.0;
  for (int j = 0; j < 3; ++j) l += std::abs(vb[j] - r.x[j]);
  return l;
}

bool relaxed_feasible(const RelaxedThreeType& r) {
  constexpr double slack = 1e-12;
  double xsum = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (r.x[j] < -slack) return false;
    xsum += r.x[j];
    if (r.singles[j] < -slack) return false;
    for (int k = 0; k < 3; ++k) {
      if (r.doubles[j][k] < -slack) return false;
      if (j == k && r.doubles[j][k] != 0.0) return false;
    }
  }
  if (std::abs(xsum - 1.0) > kSimplexTol) return false;
  if (r.single_total() + r.double_total() > 1.0 + slack) return false;
  if (r.t < 0.0 || r.t > 1.0) return false;

  const auto z = r.mass_above();
  const auto q = r.agreeing_doubles();
  const double c = r.satisfied_mass();
  for (int j = 0; j < 3; ++j) {
    if (relaxed_phantom(z[j], r.t) > r.x[j] + slack) return false;
    const double hi = std::min(1.0, c + q[j] + z[j]);
    if (relaxed_phantom(hi, r.t) < r.x[j] - slack) return false;
  }
  return true;
}

PatternPair::PatternPair(std::array<Sign, 3> s, std::array<Bracket, 3> p)
    : signs(s), phantoms(p) {
  if (s[0] == s[1] && s[1] == s[2]) {
    throw invariant_error("all-equal sign patterns carry zero loss");
  }
}

std::string PatternPair::label() const {
  std::string out = "(";
  for (int j = 0; j < 3; ++j) {
    out += signs[j] == Sign::Plus ? '+' : '-';
    if (j < 2) out += ',';
  }
  out += ") ";
  for (int j = 0; j < 3; ++j) {
    switch (phantoms[j]) {
      case Bracket::BlackBlack: out += "(b,b)"; break;
      case Bracket::BlackRed: out += "(b,r)"; break;
      case Bracket::RedRed: out += "(r,r)"; break;
    }
    if (j < 2) out += ',';
  }
  return out;
}

std::vector<PatternPair> enumerate_patterns() {
  const std::array<std::array<Sign, 3>, 2> signs = {
      std::array<Sign, 3>{Sign::Plus, Sign::Minus, Sign::Minus},
      std::array<Sign, 3>{Sign::Plus, Sign::Plus, Sign::Minus}};
  const std::array<Bracket, 3> kinds = {Bracket::BlackBlack, Bracket::BlackRed,
                                        Bracket::RedRed};
  std::vector<PatternPair> out;
  out.reserve(54);
  for (const auto& s : signs) {
    for (Bracket b0 : kinds) {
      for (Bracket b1 : kinds) {
        for (Bracket b2 : kinds) {
          out.emplace_back(s, std::array<Bracket, 3>{b0, b1, b2});
        }
      }
    }
  }
  return out;
}

}  // namespace phantom
