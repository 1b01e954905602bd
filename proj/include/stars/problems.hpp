#pragma once

#include <functional>
#include <string>

#include "stars/rng.hpp"

namespace stars {

/// Deterministic objective with its analytic gradient and the constants the
/// step rules and bounds need. Immutable after construction.
struct ProblemSpec {
  std::string name;
  int n = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;
  Vector x_star;
  double f_star = 0.0;
  double L0 = 0.0;  ///< Lipschitz bound on f over the ball of radius sqrt(R2) around x_star
  double L1 = 0.0;  ///< Lipschitz constant of grad f
  double R2 = 0.0;  ///< bound on ||x0 - x_star||^2
  Vector x0;
};

/// Nesterov's tridiagonal quadratic
///   f(x) = x1^2/2 + sum (x_{i+1} - x_i)^2 / 2 + xn^2/2 - x1,
/// gradient A x - e1 with A = tridiag(-1, 2, -1). Requires n >= 2.
ProblemSpec f1_make(int n);

/// f(x) = ||x||^2 from x0 = (1, ..., 1).
ProblemSpec sphere_make(int n);

/// Looks a problem up by name ("f1" or "sphere").
ProblemSpec make_problem(const std::string& name, int n);

}  // namespace stars
