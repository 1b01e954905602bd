#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "stars/oracle.hpp"
#include "stars/problems.hpp"

namespace stars::theory {

// Additive noise -------------------------------------------------------------

/// Forward-difference offset minimizing the error bound under additive noise:
/// [8 sigma^2 n / (L1^2 (n+6)^3)]^{1/4}.
double mu_star_additive(double sigma_a, double L1, int n);

/// Expected squared error bound of the noisy forward difference along u:
/// mu^2 L1^2 (n+6)^3 / 4 + 2 sigma^2 n / mu^2.
double fd_error_bound_additive(double mu, double sigma_a, double L1, int n);

/// sqrt(2) L1 sigma sqrt(n (n+6)^3), the bound's value at mu_star_additive.
double fd_error_bound_at_optimum(double sigma_a, double L1, int n);

/// Fixed step length 1 / (4 L1 (n+4)).
double step_length(double L1, int n);

/// Accuracy floor 6 sqrt(2) sigma (n+4) / 5.
double eps_pred_additive(double sigma_a, int n);

/// ceil(8 (n+4) L1 R2 / eps - 1), floored at zero.
std::int64_t iteration_budget_additive(int n, double L1, double R2, double eps);

struct AdditiveConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;        ///< exact: sqrt(2) sigma / (2 L1) * g1(n)
  double C3_bound = 0.0;  ///< 3 sqrt(2) sigma / (20 L1)
};

/// g1(n) = sqrt(n (n+6)^3) / (4 (n+4)^2) + sqrt(n^3 / (n+6)^3) / (n+4).
double g1(int n);

AdditiveConstants constants_additive(double sigma_a, double L1, int n);

// Multiplicative noise -------------------------------------------------------

/// [16 sigma^2 n / (L1^2 (1 + 3 sigma^2) (n+6)^3)]^{1/4}; requires
/// 0 < sigma_r < 3^{-1/2}.
double c4(double sigma_r, double L1, int n);

/// max(c4 sqrt|f_noisy|, mu_min).
double mu_tilde(double c4, double f_noisy, double mu_min);

/// Smallest value used for mu_tilde when the noisy value is zero.
inline constexpr double kDefaultMuMin = 1e-12;

/// E[1 / (1 + nu)] for nu ~ U[-a, a], a = sqrt(3) sigma_r:
/// atanh(a) / a, and 1 at sigma_r = 0.
double snr_bound_uniform(double sigma_r);

struct MultiplicativeConstants {
  double C4 = 0.0;
  double C5 = 0.0;
  double C6 = 0.0;
  double C7 = 0.0;
  double C8 = 0.0;
  double C8_simplified = 0.0;  ///< 3 L0^2 sigma^2 / (16 L1^2)
  double C7_bound = 0.0;       ///< 3 sqrt(3) (2b+7) (sigma^2 + 1/6) / (64 L1)
};

MultiplicativeConstants constants_multiplicative(double sigma_r, double b, double L0, double L1,
                                                 int n);

/// C9 = (3 sqrt(3) / 8) (2b+7) M + 3 L0^2 / (2 L1).
double c9(double b, double M, double L0, double L1);

/// C9 (sigma_r^2 + 1/6) (n+4).
double eps_pred_multiplicative(double sigma_r, int n, double b, double M, double L0, double L1);

/// Largest admissible sigma_r^2 for a target accuracy eps:
/// eps / (C9 (n+4)) - 1/6. Negative means no positive noise level reaches eps.
double max_relative_variance(double eps, int n, double b, double M, double L0, double L1);

struct RelativeNoiseAdmissibility {
  double max_variance = 0.0;  ///< verbatim, may be negative
  bool feasible = false;      ///< max_variance > 0
};

RelativeNoiseAdmissibility relative_noise_admissibility(double eps, int n, double b, double M,
                                                        double L0, double L1);

// Bundles --------------------------------------------------------------------

struct TheoryBounds {
  NoiseKind kind = NoiseKind::Additive;
  int n = 0;
  double sigma = 0.0;
  double L0 = 0.0;
  double L1 = 0.0;
  double R2 = 0.0;
  double mu_star = 0.0;  ///< additive only
  double c4 = 0.0;       ///< multiplicative only
  double h = 0.0;
  double eps_pred = 0.0;
  std::int64_t N = 0;
  double b = 0.0;  ///< multiplicative only
  double M = 0.0;  ///< multiplicative only
  double eps_floor = 0.0;  ///< multiplicative: C9 (n+4) / 6, reached as sigma_r -> 0
  std::map<std::string, double> constants;
};

/// A-priori M for the relative-noise bound when no run history exists:
/// max(|f(x0)|, |f_star|).
double a_priori_M(const ProblemSpec& problem);

/// Bounds for a problem under a noise model, using the problem's analytic
/// constants. For relative noise M defaults to a_priori_M unless given.
TheoryBounds compute_bounds(const ProblemSpec& problem, const NoiseModel& noise, double M = -1.0);

/// Aligned, human-readable listing.
std::string format_text(const TheoryBounds& bounds);
/// One line of space separated key=value pairs.
std::string format_record(const TheoryBounds& bounds);

}  // namespace stars::theory
