#include "stars/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "stars/errors.hpp"

namespace stars::estimation {

namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Welford accumulation of m replicates at x.
Moments replicate(NoisyOracle& oracle, const Vector& x, int m) {
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = oracle.eval(x);
    const double delta = v - mean;
    mean += delta / (i + 1);
    m2 += delta * (v - mean);
  }
  return {mean, std::sqrt(m2 / (m - 1))};
}

double averaged(NoisyOracle& oracle, const Vector& x, int samples) {
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += oracle.eval(x);
  return sum / samples;
}

}  // namespace

EstimateReport estimate_sigma_additive(NoisyOracle& oracle, const Vector& x, int m) {
  if (m < 2) throw InvalidArgument("estimate_sigma_additive: m must be >= 2");
  const Moments mom = replicate(oracle, x, m);
  return {mom.stddev, m, mom.stddev / std::sqrt(2.0 * (m - 1))};
}

EstimateReport estimate_sigma_relative(NoisyOracle& oracle, const Vector& x, int m) {
  if (m < 2) throw InvalidArgument("estimate_sigma_relative: m must be >= 2");
  const Moments mom = replicate(oracle, x, m);
  const double standard_error = mom.stddev / std::sqrt(static_cast<double>(m));
  if (!(std::abs(mom.mean) > 10.0 * standard_error))
    throw SignalDominated("estimate_sigma_relative: |mean| is within 10 standard errors of zero");
  const double value = mom.stddev / std::abs(mom.mean);
  return {value, m, value / std::sqrt(2.0 * (m - 1))};
}

std::int64_t saa_hessian_cost(int n, int samples) {
  return static_cast<std::int64_t>(samples) * (1 + 2 * static_cast<std::int64_t>(n) * n);
}

EstimateReport estimate_L1_saa(NoisyOracle& oracle, const Vector& x0, int samples, double fd_step) {
  if (samples < 1) throw InvalidArgument("estimate_L1_saa: samples must be >= 1");
  if (!(fd_step > 0.0)) throw InvalidArgument("estimate_L1_saa: fd_step must be > 0");
  const int n = static_cast<int>(x0.size());
  if (n != oracle.dim()) throw InvalidArgument("estimate_L1_saa: dimension mismatch");
  const double h = fd_step;
  const std::int64_t before = oracle.eval_count();

  double center_se = 0.0;
  double f0 = 0.0;
  if (samples >= 2) {
    const Moments mom = replicate(oracle, x0, samples);
    f0 = mom.mean;
    center_se = mom.stddev / std::sqrt(static_cast<double>(samples));
  } else {
    f0 = averaged(oracle, x0, samples);
  }

  Eigen::MatrixXd H(n, n);
  Vector probe = x0;
  for (int i = 0; i < n; ++i) {
    probe[i] = x0[i] + h;
    const double fp = averaged(oracle, probe, samples);
    probe[i] = x0[i] - h;
    const double fm = averaged(oracle, probe, samples);
    probe[i] = x0[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        probe[i] = x0[i] + si * h;
        probe[j] = x0[j] + sj * h;
        const double v = averaged(oracle, probe, samples);
        probe[i] = x0[i];
        probe[j] = x0[j];
        return v;
      };
      const double fpp = at(1, 1);
      const double fpm = at(1, -1);
      const double fmp = at(-1, 1);
      const double fmm = at(-1, -1);
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  if (!H.allFinite()) throw EstimationFailed("estimate_L1_saa: non-finite Hessian entry");

  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * i;
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 50; ++it) {
    Vector w = H * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      estimate = 0.0;
      break;
    }
    const double previous = estimate;
    estimate = norm;
    v = w / norm;
    if (it > 0 && std::abs(estimate - previous) <= 1e-8 * estimate) break;
  }
  if (!std::isfinite(estimate)) throw EstimationFailed("estimate_L1_saa: power iteration diverged");

  return {estimate, oracle.eval_count() - before, std::sqrt(6.0) * center_se / (h * h)};
}

EstimateReport estimate_grad_var(NoisyOracle& oracle, std::span<const Vector> points, double mu,
                                 int m, RngStream& directions) {
  if (points.empty()) throw InvalidArgument("estimate_grad_var: need at least one point");
  if (m < 2) throw InvalidArgument("estimate_grad_var: m must be >= 2");
  if (!(mu > 0.0)) throw InvalidArgument("estimate_grad_var: mu must be > 0");
  const int n = oracle.dim();
  const std::int64_t before = oracle.eval_count();
  double max_var = 0.0;
  double min_var = std::numeric_limits<double>::infinity();
  for (const Vector& x : points) {
    if (x.size() != n) throw InvalidArgument("estimate_grad_var: dimension mismatch");
    Vector mean = Vector::Zero(n);
    Vector m2 = Vector::Zero(n);
    for (int i = 0; i < m; ++i) {
      const Vector u = gaussian_vector(directions, n);
      const double f_base = oracle.eval(x);
      const double f_plus = oracle.eval(x + mu * u);
      const Vector g = (f_plus - f_base) / mu * u;
      const Vector delta = g - mean;
      mean += delta / (i + 1);
      m2 += delta.cwiseProduct(g - mean);
    }
    const double total = m2.sum() / (m - 1);
    max_var = std::max(max_var, total);
    min_var = std::min(min_var, total);
  }
  return {max_var, oracle.eval_count() - before, max_var - min_var};
}

std::vector<Vector> box_points(const Vector& center, double half_width, int count, RngStream& rng) {
  std::vector<Vector> out;
  out.reserve(count);
  for (int p = 0; p < count; ++p) {
    Vector x = center;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += half_width * (2.0 * rng.uniform01() - 1.0);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace stars::estimation
