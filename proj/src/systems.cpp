#include "phantom/systems.hpp"

#include <cmath>

namespace phantom {

double relaxed_phantom(double x, double t) {
  if (t < 0.5) {
    if (x <= 0.5) return 0.0;
    return 4.0 * t * x - 2.0 * t;
  }
  if (x <= 0.5) return x * (2.0 * t - 1.0);
  return x * (3.0 - 2.0 * t) - 2.0 + 2.0 * t;
}

namespace {

double pu_prime_value(double x, double t, double eps) {
  // Three pieces, continuous at t = 1/2 - eps and t = 1 - eps; the first
  // two reduce to the pu schedule under t -> t/(1-2eps) and t -> t + eps.
  if (t < 0.5 - eps) return relaxed_phantom(x, t / (1.0 - 2.0 * eps));
  if (t <= 1.0 - eps) return relaxed_phantom(x, t + eps);
  return x * (1.0 - t) / eps + (t - 1.0) / eps + 1.0;
}

}  // namespace

PhantomSystem::PhantomSystem(Kind kind, int n, double eps, std::string name)
    : kind_(kind), n_(n), eps_(eps), name_(std::move(name)) {
  if (n < 1) throw invariant_error("phantom system needs n >= 1 voters");
}

double PhantomSystem::value(int k, double t) const {
  const double x = static_cast<double>(k) / n_;
  switch (kind_) {
    case Kind::Uniform:
      return x;
    case Kind::IndependentMarkets:
      return std::min(k * t, 1.0);
    case Kind::PiecewiseUniform:
      return relaxed_phantom(x, t);
    case Kind::PiecewiseUniformPrime:
      return pu_prime_value(x, t, eps_);
  }
  return 0.0;  // unreachable
}

void PhantomSystem::values(double t, std::span<double> out) const {
  for (int k = 0; k <= n_; ++k) out[k] = value(k, t);
}

PhantomSystem uniform_system(int n) {
  return PhantomSystem(PhantomSystem::Kind::Uniform, n, 0.0, "uniform");
}

PhantomSystem independent_markets_system(int n) {
  return PhantomSystem(PhantomSystem::Kind::IndependentMarkets, n, 0.0, "im");
}

PhantomSystem piecewise_uniform_system(int n) {
  return PhantomSystem(PhantomSystem::Kind::PiecewiseUniform, n, 0.0, "pu");
}

PhantomSystem piecewise_uniform_prime_system(int n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw invariant_error("pu-prime epsilon must lie in (0, 1/2)");
  }
  return PhantomSystem(PhantomSystem::Kind::PiecewiseUniformPrime, n, eps,
                       "pu-prime");
}

PhantomSystem system_from_descriptor(const std::string& descriptor, int n) {
  if (descriptor == "uniform") return uniform_system(n);
  if (descriptor == "im") return independent_markets_system(n);
  if (descriptor == "pu") return piecewise_uniform_system(n);
  if (descriptor == "pu-prime") return piecewise_uniform_prime_system(n);
  throw mechanism_mismatch("unknown phantom system descriptor: " + descriptor);
}

}  // namespace phantom
