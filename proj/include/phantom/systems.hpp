#pragma once

#include <span>
#include <string>

#include "phantom/core.hpp"

namespace phantom {

/// A family of n+1 coordinated phantom curves y_k(t), k = 0..n, each
/// continuous and weakly increasing on [0,1], with y_0 <= ... <= y_n
/// pointwise. Value object; evaluation is pure and thread-safe.
///
/// Concrete families:
///   uniform       y_k(t) = k/n                 (t plays no role)
///   im            y_k(t) = min(k*t, 1)
///   pu            two-regime piecewise-uniform family: below t = 1/2 the
///                 lower half of the phantoms sticks at 0 and the upper
///                 half fans out uniformly; from t = 1/2 on, both halves
///                 spread uniformly over [0, y_floor(n/2)] and
///                 [y_ceil(n/2), 1]. Note y_k(1) = k/n < 1 for k < n; the
///                 engine's root search still brackets a feasible t
///                 because the phantoms at t = 1 are the uniform family,
///                 whose medians sum to at least 1.
///   pu-prime      the same mechanism reshaped (parameter eps in (0,1/2))
///                 so that y_k(0) = 0 and y_k(1) = 1 exactly: the pu
///                 schedule is compressed into [0, 1-eps] and a final
///                 linear ramp lifts every phantom to 1. The first piece
///                 is evaluated as pu at time t/(1-2*eps), the unique
///                 linear time map that keeps the schedule continuous at
///                 both piece boundaries.
class PhantomSystem {
 public:
  enum class Kind { Uniform, IndependentMarkets, PiecewiseUniform, PiecewiseUniformPrime };

  Kind kind() const { return kind_; }
  int voters() const { return n_; }
  double epsilon() const { return eps_; }
  const std::string& name() const { return name_; }

  /// y_k(t) for k in 0..n, t in [0,1].
  double value(int k, double t) const;

  /// Fills out[k] = y_k(t) for all k; out.size() must be n+1.
  void values(double t, std::span<double> out) const;

 private:
  PhantomSystem(Kind kind, int n, double eps, std::string name);
  friend PhantomSystem uniform_system(int n);
  friend PhantomSystem independent_markets_system(int n);
  friend PhantomSystem piecewise_uniform_system(int n);
  friend PhantomSystem piecewise_uniform_prime_system(int n, double eps);

  Kind kind_;
  int n_;
  double eps_;
  std::string name_;
};

PhantomSystem uniform_system(int n);
PhantomSystem independent_markets_system(int n);
PhantomSystem piecewise_uniform_system(int n);
PhantomSystem piecewise_uniform_prime_system(int n, double eps = 0.01);

/// Builds the system named by a CLI descriptor ("uniform", "im", "pu",
/// "pu-prime") for n voters. Throws mechanism_mismatch on unknown names.
PhantomSystem system_from_descriptor(const std::string& descriptor, int n);

/// Continuous-index form of the piecewise-uniform family: x stands for
/// the phantom index fraction k/n. Exactly equals the pu system at
/// x = k/n for every k and t (the two code paths share this function).
double relaxed_phantom(double x, double t);

}  // namespace phantom
