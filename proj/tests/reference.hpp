// Independent reference values for the test suites. Everything here is
// computed in 50-digit decimal arithmetic straight from the defining
// formulas, without calling into the library.
#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <vector>

namespace ref {

using hp = boost::multiprecision::cpp_dec_float_50;

inline hp mu_star_additive(hp sigma, hp L1, int n) {
  const hp n6 = hp(n + 6);
  return boost::multiprecision::pow(8 * sigma * sigma * n / (L1 * L1 * n6 * n6 * n6), hp(0.25));
}

inline hp fd_bound_at_optimum(hp sigma, hp L1, int n) {
  const hp n6 = hp(n + 6);
  return boost::multiprecision::sqrt(hp(2)) * L1 * sigma * boost::multiprecision::sqrt(n * n6 * n6 * n6);
}

inline hp c4(hp sigma, hp L1, int n) {
  const hp n6 = hp(n + 6);
  return boost::multiprecision::pow(
      16 * sigma * sigma * n / (L1 * L1 * (1 + 3 * sigma * sigma) * n6 * n6 * n6), hp(0.25));
}

inline hp step_length(hp L1, int n) { return 1 / (4 * L1 * (n + 4)); }

inline hp eps_pred_additive(hp sigma, int n) {
  return 6 * boost::multiprecision::sqrt(hp(2)) * sigma * (n + 4) / 5;
}

inline hp rg_mu(hp eps, hp L1, int n) {
  return hp(5) / (3 * (n + 4)) * boost::multiprecision::sqrt(eps / (2 * L1));
}

/// E[1/(1+nu)] for nu ~ U[-a, a] by its power series sum a^{2k} / (2k+1).
inline hp snr_series(hp sigma) {
  const hp a = boost::multiprecision::sqrt(hp(3)) * sigma;
  const hp a2 = a * a;
  hp term = 1;
  hp sum = 0;
  for (int k = 0; k < 400; ++k) {
    sum += term / (2 * k + 1);
    term *= a2;
  }
  return sum;
}

inline double rel_err(double got, const hp& want) {
  return std::abs(static_cast<double>((hp(got) - want) / want));
}

/// Eigenvalues of tridiag(-1, 2, -1) of size n.
inline double f1_spectral_norm(int n) {
  return 2.0 - 2.0 * std::cos(n * M_PI / (n + 1));
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean
};

inline Moments moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace ref
