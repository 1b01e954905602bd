#pragma once

#include <cstdint>
#include <span>

#include "stars/oracle.hpp"
#include "stars/rng.hpp"

namespace stars::estimation {

struct EstimateReport {
  double value = 0.0;
  std::int64_t sample_count = 0;  ///< noisy evaluations spent
  double dispersion = 0.0;        ///< standard error, or range across probe points
};

/// Sample standard deviation (divisor m - 1) of m replicated values at x.
/// dispersion: s / sqrt(2 (m - 1)).
EstimateReport estimate_sigma_additive(NoisyOracle& oracle, const Vector& x, int m);

/// Replicate standard deviation over |replicate mean|. Throws SignalDominated
/// when |mean| <= 10 * s / sqrt(m).
EstimateReport estimate_sigma_relative(NoisyOracle& oracle, const Vector& x, int m);

/// Noisy evaluations of the SAA Hessian stencil: samples * (1 + 2 n^2).
std::int64_t saa_hessian_cost(int n, int samples);

/// Spectral norm of the central-difference Hessian of the averaged function
/// fbar(x) = mean of `samples` noisy values at x. Power iteration, at most 50
/// sweeps or until the estimate moves by less than 1e-8 relative.
/// dispersion: sqrt(6) * (standard error of fbar(x0)) / fd_step^2, the noise
/// scale of one diagonal entry.
EstimateReport estimate_L1_saa(NoisyOracle& oracle, const Vector& x0, int samples = 200,
                               double fd_step = 1e-2);

/// Total variance (trace of the componentwise variance) of the zero-order
/// gradient G = (f(x + mu u) - f(x)) / mu * u over m draws, maximized over the
/// probe points. dispersion: max minus min across points.
EstimateReport estimate_grad_var(NoisyOracle& oracle, std::span<const Vector> points, double mu,
                                 int m, RngStream& directions);

/// `count` points drawn uniformly from the box of half-width `half_width`
/// around `center`.
std::vector<Vector> box_points(const Vector& center, double half_width, int count, RngStream& rng);

}  // namespace stars::estimation
