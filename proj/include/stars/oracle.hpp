#pragma once

#include <cstdint>
#include <string>

#include "stars/problems.hpp"
#include "stars/rng.hpp"

namespace stars {

enum class NoiseKind { Additive, Multiplicative };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& text);  // "add" | "mult"

/// nu ~ U[-sqrt(3) sigma, sqrt(3) sigma], so E[nu] = 0 and Var(nu) = sigma^2.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Additive;
  double sigma = 0.0;
};

/// Relative noise must satisfy sqrt(3) sigma < 1 so that 1 + nu stays positive.
inline constexpr double kMaxRelativeSigma = 0.57735026918962576451;  // 3^{-1/2}

double uniform_noise(RngStream& rng, double sigma);

/// Throws ConfigRejected when the noise model is not admissible.
void validate(const NoiseModel& noise);

/// The only way to obtain noisy values of a problem. Every call to eval()
/// draws fresh noise and bumps the counter; reading true values goes through
/// the ProblemSpec and leaves the oracle untouched.
///
/// Not thread-safe; give each trial its own oracle.
class NoisyOracle {
 public:
  NoisyOracle(const ProblemSpec& problem, NoiseModel noise, RngStream rng);

  double eval(const Vector& x);

  const ProblemSpec& problem() const { return *problem_; }
  const NoiseModel& noise() const { return noise_; }
  std::int64_t eval_count() const { return eval_count_; }
  int dim() const { return problem_->n; }

 private:
  const ProblemSpec* problem_;
  NoiseModel noise_;
  RngStream rng_;
  std::int64_t eval_count_ = 0;
};

}  // namespace stars
