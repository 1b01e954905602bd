#include "stars/problems.hpp"

#include <cmath>

#include "stars/errors.hpp"

namespace stars {

namespace {

void check_dim(const Vector& x, int n, const char* who) {
  if (x.size() != n) throw InvalidArgument(std::string(who) + ": dimension mismatch");
}

// L0 is not part of the problem data; sqrt(R2) bounds the start distance, and
// on that ball ||grad f|| <= L1 * sqrt(R2). The +1 keeps SS away from a zero
// bound when x0 happens to be a minimizer.
double lipschitz_bound(double L1, double R2) { return L1 * std::sqrt(R2) + 1.0; }

}  // namespace

ProblemSpec f1_make(int n) {
  if (n < 2) throw InvalidArgument("f1: dimension must be >= 2");
  ProblemSpec p;
  p.name = "f1";
  p.n = n;
  p.eval = [n](const Vector& x) {
    check_dim(x, n, "f1");
    double sum = 0.5 * x[0] * x[0] + 0.5 * x[n - 1] * x[n - 1] - x[0];
    for (int i = 0; i + 1 < n; ++i) {
      const double d = x[i + 1] - x[i];
      sum += 0.5 * d * d;
    }
    return sum;
  };
  p.grad = [n](const Vector& x) {
    check_dim(x, n, "f1");
    Vector g(n);
    for (int i = 0; i < n; ++i) {
      double v = 2.0 * x[i];
      if (i > 0) v -= x[i - 1];
      if (i + 1 < n) v -= x[i + 1];
      g[i] = v;
    }
    g[0] -= 1.0;
    return g;
  };
  p.x_star.resize(n);
  for (int i = 0; i < n; ++i) p.x_star[i] = 1.0 - static_cast<double>(i + 1) / (n + 1);
  p.f_star = -static_cast<double>(n) / (2.0 * (n + 1));
  p.L1 = 4.0;
  p.R2 = (n + 1) / 3.0;
  p.L0 = lipschitz_bound(p.L1, p.R2);
  p.x0 = Vector::Zero(n);
  return p;
}

ProblemSpec sphere_make(int n) {
  if (n < 1) throw InvalidArgument("sphere: dimension must be >= 1");
  ProblemSpec p;
  p.name = "sphere";
  p.n = n;
  p.eval = [n](const Vector& x) {
    check_dim(x, n, "sphere");
    return x.squaredNorm();
  };
  p.grad = [n](const Vector& x) {
    check_dim(x, n, "sphere");
    return Vector(2.0 * x);
  };
  p.x_star = Vector::Zero(n);
  p.f_star = 0.0;
  p.L1 = 2.0;
  p.R2 = n;
  p.L0 = lipschitz_bound(p.L1, p.R2);
  p.x0 = Vector::Ones(n);
  return p;
}

ProblemSpec make_problem(const std::string& name, int n) {
  if (name == "f1") return f1_make(n);
  if (name == "sphere") return sphere_make(n);
  throw InvalidArgument("unknown problem '" + name + "'");
}

}  // namespace stars
