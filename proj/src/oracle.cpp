#include "stars/oracle.hpp"

#include <cmath>

#include "stars/errors.hpp"

namespace stars {

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::Additive ? "add" : "mult";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "add" || text == "additive") return NoiseKind::Additive;
  if (text == "mult" || text == "multiplicative") return NoiseKind::Multiplicative;
  throw InvalidArgument("unknown noise kind '" + text + "'");
}

double uniform_noise(RngStream& rng, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("uniform_noise: sigma must be >= 0");
  const double half_width = std::sqrt(3.0) * sigma;
  return half_width * (2.0 * rng.uniform01() - 1.0);
}

void validate(const NoiseModel& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
    throw InvalidArgument("noise sigma must be finite and >= 0");
  if (noise.kind == NoiseKind::Multiplicative && noise.sigma >= kMaxRelativeSigma)
    throw ConfigRejected("relative noise sigma must be < 3^{-1/2} (support bound a < 1)");
}

NoisyOracle::NoisyOracle(const ProblemSpec& problem, NoiseModel noise, RngStream rng)
    : problem_(&problem), noise_(noise), rng_(rng) {
  validate(noise_);
}

double NoisyOracle::eval(const Vector& x) {
  if (x.size() != problem_->n) throw InvalidArgument("noisy_eval: dimension mismatch");
  const double f = problem_->eval(x);
  const double nu = uniform_noise(rng_, noise_.sigma);
  ++eval_count_;
  return noise_.kind == NoiseKind::Additive ? f + nu : f * (1.0 + nu);
}

}  // namespace stars
