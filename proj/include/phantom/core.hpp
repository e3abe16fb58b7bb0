#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phantom {

// Absolute tolerance used by every simplex / sum check in the library.
inline constexpr double kSimplexTol = 1e-9;

/// Input could not be parsed (files, inline divisions). CLI exit code 2.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A domain invariant is violated (bad shares, inconsistent counts,
/// broken feasibility bracket). CLI exit code 3.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mechanism and instance shape do not fit (e.g. the two-project
/// mechanism on m >= 3). CLI exit code 4.
struct mechanism_mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point on the standard simplex: m nonnegative budget shares summing
/// to one. Construction rescales away drift up to kSimplexTol and rejects
/// anything worse. Immutable after construction.
class Division {
 public:
  explicit Division(std::vector<double> shares);

  std::size_t size() const { return shares_.size(); }
  double operator[](std::size_t j) const { return shares_[j]; }
  const std::vector<double>& shares() const { return shares_; }
  std::span<const double> span() const { return shares_; }

  bool operator==(const Division&) const = default;

 private:
  std::vector<double> shares_;
};

/// n voter divisions over a common set of m projects. Rows are validated
/// as Divisions; storage is column-major so per-project scans are
/// contiguous.
class Profile {
 public:
  explicit Profile(std::vector<Division> votes);
  Profile(std::size_t n, std::size_t m, std::vector<double> row_major);

  std::size_t voters() const { return n_; }
  std::size_t projects() const { return m_; }

  double at(std::size_t i, std::size_t j) const { return cols_[j * n_ + i]; }
  std::span<const double> column(std::size_t j) const {
    return {cols_.data() + j * n_, n_};
  }
  Division row(std::size_t i) const;
  std::vector<Division> rows() const;

  /// Returns a copy with row i replaced (used by deviation tests).
  Profile with_row(std::size_t i, const Division& v) const;

 private:
  std::size_t n_ = 0, m_ = 0;
  std::vector<double> cols_;  // column-major, m * n entries
};

/// Mechanism outcome bundled with the quantities a loss report needs.
/// tstar is absent for mechanisms that do not move phantoms (uniform on
/// two projects, utilitarian).
struct LossReport {
  Division outcome;
  std::optional<double> tstar;
  Division proportional;
  double loss;
};

double l1_distance(const Division& a, const Division& b);
double l1_distance(std::span<const double> a, std::span<const double> b);

/// Coordinate-wise mean of the rows; always a valid Division.
Division proportional_division(const Profile& v);

/// l1 distance between an outcome and the profile's proportional division.
double loss(const Profile& v, const Division& outcome);

LossReport make_loss_report(const Profile& v, Division outcome,
                            std::optional<double> tstar);

/// Calls fn with every division of dimension m whose shares are multiples
/// of 1/steps (compositions of `steps` into m parts). Used by grid oracles
/// and deviation sets.
void for_each_grid_division(std::size_t m, unsigned steps,
                            const std::function<void(const Division&)>& fn);

}  // namespace phantom
