#include "phantom/core.hpp"

#include <cmath>

namespace phantom {

namespace {

void validate_and_normalize(std::vector<double>& shares) {
  if (shares.size() < 2) {
    throw invariant_error("division needs at least 2 projects, got " +
                          std::to_string(shares.size()));
  }
  double sum = 0.0;
  for (double s : shares) {
    if (!std::isfinite(s) || s < -kSimplexTol || s > 1.0 + kSimplexTol) {
      throw invariant_error("division share " + std::to_string(s) +
                            " outside [0,1]");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw invariant_error("division shares sum to " + std::to_string(sum) +
                          ", not 1");
  }
  // Rescale the drift away so downstream sums are exact.
  for (double& s : shares) {
    s = std::min(1.0, std::max(0.0, s / sum));
  }
}

}  // namespace

Division::Division(std::vector<double> shares) : shares_(std::move(shares)) {
  validate_and_normalize(shares_);
}

Profile::Profile(std::vector<Division> votes) {
  if (votes.size() < 2) {
    throw invariant_error("profile needs at least 2 voters");
  }
  n_ = votes.size();
  m_ = votes.front().size();
  for (const Division& v : votes) {
    if (v.size() != m_) {
      throw invariant_error("profile rows disagree on project count");
    }
  }
  cols_.resize(n_ * m_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) {
      cols_[j * n_ + i] = votes[i][j];
    }
  }
}

Profile::Profile(std::size_t n, std::size_t m, std::vector<double> row_major) {
  if (row_major.size() != n * m) {
    throw invariant_error("profile data size mismatch");
  }
  std::vector<Division> votes;
  votes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    votes.emplace_back(std::vector<double>(row_major.begin() + i * m,
                                           row_major.begin() + (i + 1) * m));
  }
  *this = Profile(std::move(votes));
}

Division Profile::row(std::size_t i) const {
  std::vector<double> r(m_);
  for (std::size_t j = 0; j < m_; ++j) r[j] = at(i, j);
  return Division(std::move(r));
}

std::vector<Division> Profile::rows() const {
  std::vector<Division> out;
  out.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) out.push_back(row(i));
  return out;
}

Profile Profile::with_row(std::size_t i, const Division& v) const {
  if (v.size() != m_) throw invariant_error("replacement row has wrong m");
  std::vector<Division> votes = rows();
  votes[i] = v;
  return Profile(std::move(votes));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw invariant_error("l1 distance over mismatched dimensions");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += std::abs(a[j] - b[j]);
  return d;
}

double l1_distance(const Division& a, const Division& b) {
  return l1_distance(a.span(), b.span());
}

Division proportional_division(const Profile& v) {
  const double inv_n = 1.0 / static_cast<double>(v.voters());
  std::vector<double> mean(v.projects());
  for (std::size_t j = 0; j < v.projects(); ++j) {
    double s = 0.0;
    for (double x : v.column(j)) s += x;
    mean[j] = s * inv_n;
  }
  return Division(std::move(mean));
}

double loss(const Profile& v, const Division& outcome) {
  if (outcome.size() != v.projects()) {
    throw invariant_error("outcome dimension does not match profile");
  }
  return l1_distance(outcome, proportional_division(v));
}

LossReport make_loss_report(const Profile& v, Division outcome,
                            std::optional<double> tstar) {
  Division prop = proportional_division(v);
  double l = l1_distance(outcome, prop);
  return LossReport{std::move(outcome), tstar, std::move(prop), l};
}

namespace {

void grid_rec(std::size_t m, unsigned steps, unsigned left,
              std::vector<double>& acc,
              const std::function<void(const Division&)>& fn) {
  if (acc.size() + 1 == m) {
    acc.push_back(static_cast<double>(left) / steps);
    fn(Division(acc));
    acc.pop_back();
    return;
  }
  for (unsigned k = 0; k <= left; ++k) {
    acc.push_back(static_cast<double>(k) / steps);
    grid_rec(m, steps, left - k, acc, fn);
    acc.pop_back();
  }
}

}  // namespace

void for_each_grid_division(std::size_t m, unsigned steps,
                            const std::function<void(const Division&)>& fn) {
  std::vector<double> acc;
  acc.reserve(m);
  grid_rec(m, steps, steps, acc, fn);
}

}  // namespace phantom
