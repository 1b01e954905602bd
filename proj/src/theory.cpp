#include "stars/theory.hpp"

#include <cmath>
#include <sstream>

#include "stars/errors.hpp"
#include "stars/format.hpp"

namespace stars::theory {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be > 0");
}

void require_dim(int n, const char* who) {
  if (n < 1) throw InvalidArgument(std::string(who) + ": n must be >= 1");
}

void require_relative_sigma(double sigma_r, bool allow_zero, const char* who) {
  const bool low_ok = allow_zero ? sigma_r >= 0.0 : sigma_r > 0.0;
  if (!low_ok || !(sigma_r < kMaxRelativeSigma))
    throw InvalidArgument(std::string(who) + ": sigma_r must lie in " +
                          (allow_zero ? "[0" : "(0") + ", 3^{-1/2})");
}

double cube(double v) { return v * v * v; }

}  // namespace

double mu_star_additive(double sigma_a, double L1, int n) {
  require_positive(sigma_a, "sigma_a");
  require_positive(L1, "L1");
  require_dim(n, "mu_star_additive");
  return std::pow(8.0 * sigma_a * sigma_a * n / (L1 * L1 * cube(n + 6.0)), 0.25);
}

double fd_error_bound_additive(double mu, double sigma_a, double L1, int n) {
  require_positive(mu, "mu");
  require_positive(sigma_a, "sigma_a");
  require_positive(L1, "L1");
  require_dim(n, "fd_error_bound_additive");
  return mu * mu * L1 * L1 * cube(n + 6.0) / 4.0 + 2.0 * sigma_a * sigma_a * n / (mu * mu);
}

double fd_error_bound_at_optimum(double sigma_a, double L1, int n) {
  require_dim(n, "fd_error_bound_at_optimum");
  return std::sqrt(2.0) * L1 * sigma_a * std::sqrt(n * cube(n + 6.0));
}

double step_length(double L1, int n) {
  require_positive(L1, "L1");
  if (n < 0) throw InvalidArgument("step_length: n must be >= 0");
  return 1.0 / (4.0 * L1 * (n + 4.0));
}

double eps_pred_additive(double sigma_a, int n) {
  if (!(sigma_a >= 0.0)) throw InvalidArgument("sigma_a must be >= 0");
  return 6.0 * std::sqrt(2.0) * sigma_a * (n + 4.0) / 5.0;
}

std::int64_t iteration_budget_additive(int n, double L1, double R2, double eps) {
  require_positive(eps, "eps");
  const double raw = 8.0 * (n + 4.0) * L1 * R2 / eps - 1.0;
  if (raw <= 0.0) return 0;
  return static_cast<std::int64_t>(std::ceil(raw));
}

double g1(int n) {
  const double nd = n;
  return std::sqrt(nd * cube(nd + 6.0)) / (4.0 * (nd + 4.0) * (nd + 4.0)) +
         std::sqrt(cube(nd) / cube(nd + 6.0)) / (nd + 4.0);
}

AdditiveConstants constants_additive(double sigma_a, double L1, int n) {
  require_positive(sigma_a, "sigma_a");
  require_positive(L1, "L1");
  require_dim(n, "constants_additive");
  AdditiveConstants c;
  c.C1 = fd_error_bound_at_optimum(sigma_a, L1, n);
  c.C2 = 2.0 * c.C1;
  c.C3 = std::sqrt(2.0) * sigma_a / (2.0 * L1) * g1(n);
  c.C3_bound = 3.0 * std::sqrt(2.0) * sigma_a / (20.0 * L1);
  return c;
}

double c4(double sigma_r, double L1, int n) {
  require_relative_sigma(sigma_r, false, "c4");
  require_positive(L1, "L1");
  require_dim(n, "c4");
  const double s2 = sigma_r * sigma_r;
  return std::pow(16.0 * s2 * n / (L1 * L1 * (1.0 + 3.0 * s2) * cube(n + 6.0)), 0.25);
}

double mu_tilde(double c4, double f_noisy, double mu_min) {
  return std::max(c4 * std::sqrt(std::abs(f_noisy)), mu_min);
}

double snr_bound_uniform(double sigma_r) {
  require_relative_sigma(sigma_r, true, "snr_bound_uniform");
  if (sigma_r == 0.0) return 1.0;
  const double a = std::sqrt(3.0) * sigma_r;
  return std::atanh(a) / a;
}

MultiplicativeConstants constants_multiplicative(double sigma_r, double b, double L0, double L1,
                                                 int n) {
  require_positive(L0, "L0");
  if (!(b >= 1.0)) throw InvalidArgument("b must be >= 1");
  MultiplicativeConstants c;
  const double s2 = sigma_r * sigma_r;
  const double nd = n;
  const double n6 = cube(nd + 6.0);
  c.C4 = theory::c4(sigma_r, L1, n);
  c.C5 = 0.5 * c.C4 * c.C4 * L1 * L1 * n6 +
         (1.0 + b) * L1 * sigma_r * std::sqrt((1.0 + 3.0 * s2) * nd * n6);
  c.C6 = 3.0 * L0 * L0 * s2 * (nd + 4.0) * (nd + 4.0);
  c.C7 = c.C4 * c.C4 * nd / (4.0 * (nd + 4.0)) + c.C5 / (16.0 * L1 * L1 * (nd + 4.0) * (nd + 4.0));
  c.C8 = c.C6 / (16.0 * L1 * L1 * (nd + 4.0) * (nd + 4.0));
  c.C8_simplified = 3.0 * L0 * L0 * s2 / (16.0 * L1 * L1);
  c.C7_bound = 3.0 * std::sqrt(3.0) * (2.0 * b + 7.0) * (s2 + 1.0 / 6.0) / (64.0 * L1);
  return c;
}

double c9(double b, double M, double L0, double L1) {
  require_positive(L1, "L1");
  return 3.0 * std::sqrt(3.0) / 8.0 * (2.0 * b + 7.0) * M + 3.0 * L0 * L0 / (2.0 * L1);
}

double eps_pred_multiplicative(double sigma_r, int n, double b, double M, double L0, double L1) {
  return c9(b, M, L0, L1) * (sigma_r * sigma_r + 1.0 / 6.0) * (n + 4.0);
}

double max_relative_variance(double eps, int n, double b, double M, double L0, double L1) {
  return eps / (c9(b, M, L0, L1) * (n + 4.0)) - 1.0 / 6.0;
}

RelativeNoiseAdmissibility relative_noise_admissibility(double eps, int n, double b, double M,
                                                        double L0, double L1) {
  RelativeNoiseAdmissibility out;
  out.max_variance = max_relative_variance(eps, n, b, M, L0, L1);
  out.feasible = out.max_variance > 0.0;
  return out;
}

double a_priori_M(const ProblemSpec& problem) {
  return std::max(std::abs(problem.eval(problem.x0)), std::abs(problem.f_star));
}

TheoryBounds compute_bounds(const ProblemSpec& problem, const NoiseModel& noise, double M) {
  validate(noise);
  TheoryBounds out;
  out.kind = noise.kind;
  out.n = problem.n;
  out.sigma = noise.sigma;
  out.L0 = problem.L0;
  out.L1 = problem.L1;
  out.R2 = problem.R2;
  out.h = step_length(problem.L1, problem.n);
  if (noise.kind == NoiseKind::Additive) {
    out.mu_star = mu_star_additive(noise.sigma, problem.L1, problem.n);
    out.eps_pred = eps_pred_additive(noise.sigma, problem.n);
    out.N = iteration_budget_additive(problem.n, problem.L1, problem.R2, out.eps_pred);
    const auto c = constants_additive(noise.sigma, problem.L1, problem.n);
    out.constants = {{"C1", c.C1}, {"C2", c.C2}, {"C3", c.C3}, {"C3_bound", c.C3_bound}};
  } else {
    out.b = snr_bound_uniform(noise.sigma);
    out.M = M >= 0.0 ? M : a_priori_M(problem);
    out.c4 = c4(noise.sigma, problem.L1, problem.n);
    const auto c = constants_multiplicative(noise.sigma, out.b, problem.L0, problem.L1, problem.n);
    out.eps_pred =
        eps_pred_multiplicative(noise.sigma, problem.n, out.b, out.M, problem.L0, problem.L1);
    out.N = iteration_budget_additive(problem.n, problem.L1, problem.R2, out.eps_pred);
    out.eps_floor = c9(out.b, out.M, problem.L0, problem.L1) * (problem.n + 4.0) / 6.0;
    out.constants = {{"C4", c.C4},
                     {"C5", c.C5},
                     {"C6", c.C6},
                     {"C7", c.C7},
                     {"C7_bound", c.C7_bound},
                     {"C8", c.C8},
                     {"C9", c9(out.b, out.M, problem.L0, problem.L1)}};
  }
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> bound_fields(const TheoryBounds& b) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("noise", to_string(b.kind));
  rows.emplace_back("n", std::to_string(b.n));
  rows.emplace_back("sigma", format_double(b.sigma));
  rows.emplace_back("L0", format_double(b.L0));
  rows.emplace_back("L1", format_double(b.L1));
  rows.emplace_back("R2", format_double(b.R2));
  if (b.kind == NoiseKind::Additive) {
    rows.emplace_back("mu_star", format_double(b.mu_star));
  } else {
    rows.emplace_back("c4", format_double(b.c4));
    rows.emplace_back("b", format_double(b.b));
    rows.emplace_back("M", format_double(b.M));
  }
  rows.emplace_back("h", format_double(b.h));
  rows.emplace_back("eps_pred", format_double(b.eps_pred));
  rows.emplace_back("N", std::to_string(b.N));
  for (const auto& [k, v] : b.constants) rows.emplace_back(k, format_double(v));
  if (b.kind == NoiseKind::Multiplicative) rows.emplace_back("eps_floor", format_double(b.eps_floor));
  return rows;
}

}  // namespace

std::string format_text(const TheoryBounds& b) {
  std::ostringstream os;
  for (const auto& [key, value] : bound_fields(b)) {
    std::string padded = key;
    padded.resize(10, ' ');
    os << "  " << padded << " " << value << '\n';
  }
  return os.str();
}

std::string format_record(const TheoryBounds& b) {
  std::string line;
  for (const auto& [key, value] : bound_fields(b)) {
    if (!line.empty()) line += ' ';
    line += key + "=" + value;
  }
  return line;
}

}  // namespace stars::theory
