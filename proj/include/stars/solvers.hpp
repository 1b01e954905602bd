#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stars/oracle.hpp"
#include "stars/problems.hpp"
#include "stars/rng.hpp"
#include "stars/theory.hpp"

namespace stars {

enum class SolverKind { Stars, RG, SS, RSGF, RP, ES };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);
inline constexpr SolverKind kAllSolvers[] = {SolverKind::Stars, SolverKind::RG, SolverKind::SS,
                                             SolverKind::RSGF,  SolverKind::RP, SolverKind::ES};

// Per-solver parameters. Zero / unset values are filled from the problem and
// noise model when the solver is built.

struct StarsParams {
  double L1 = 0.0;                  ///< 0: problem L1
  double sigma = -1.0;              ///< assumed noise level; < 0: the oracle's sigma
  double mu_min = theory::kDefaultMuMin;
};

struct RgParams {
  double L1 = 0.0;
  double epsilon = 0x1.0p-16;
};

struct SsParams {
  double L0 = 0.0;
  double R2 = 0.0;
  double epsilon = 0.1;
  std::int64_t N = 0;  ///< 0: iteration limit, else eval budget / 2
};

struct RsgfParams {
  double L1_est = 0.0;     ///< 0: estimated by SAA Hessian
  double sigma_est = 0.0;  ///< 0: estimated from gradient variance
  std::optional<double> f0;  ///< unset: one noisy evaluation at x0
  double mu = 0.0025;
  std::int64_t N = 0;
  int estimate_samples = 200;
  int grad_var_points = 10;
  int grad_var_draws = 100;
};

struct RpParams {
  double accuracy = 0.0025;  ///< final bracket width of the line search
  double span = 10.0;        ///< t is searched over [-span, span]
};

struct EsParams {
  double sigma0 = 0.0;  ///< 0: sqrt(R2 / n)
  double p = 0.27;
  double c_s = 1.3956;
  double c_f = 0.8840;
};

struct SolverConfig {
  SolverKind kind = SolverKind::Stars;
  std::optional<std::int64_t> iteration_limit;
  std::optional<std::int64_t> eval_budget;
  int record_every = 1;  ///< keep every k-th record (plus first and last)
  StarsParams stars;
  RgParams rg;
  SsParams ss;
  RsgfParams rsgf;
  RpParams rp;
  EsParams es;
};

/// Throws ConfigRejected when neither limit is set or a limit is negative.
void validate(const SolverConfig& config);

struct SolverState {
  Vector x;
  double cached_f_noisy = 0.0;
  std::int64_t k = 0;
  double es_sigma = 0.0;
  RngStream rng;
};

/// Step-driven solver. init() and step() may only spend evaluations through
/// the oracle they are handed.
class Solver {
 public:
  explicit Solver(SolverState state) : state_(std::move(state)) {}
  virtual ~Solver() = default;

  virtual SolverKind kind() const = 0;
  virtual std::int64_t init_cost() const { return 0; }
  virtual void init(NoisyOracle& /*oracle*/) {}
  /// Evaluations of one full step.
  virtual std::int64_t step_cost() const = 0;
  /// Smallest allowance step() can work with.
  virtual std::int64_t min_step_cost() const { return step_cost(); }
  /// Spends at most `allowance` evaluations.
  virtual void step(NoisyOracle& oracle, std::int64_t allowance) = 0;

  const SolverState& state() const { return state_; }

 protected:
  SolverState state_;
};

// Fixed-parameter forward-difference stepping shared by STARS-additive, RG, SS
// and RSGF differs only in (h, mu) and in whether f(x_k) is cached.

class StarsSolver final : public Solver {
 public:
  /// Throws ConfigRejected for an inadmissible noise level.
  StarsSolver(const ProblemSpec& problem, NoiseKind kind, double sigma, double L1, double mu_min,
              RngStream rng);

  SolverKind kind() const override { return SolverKind::Stars; }
  std::int64_t init_cost() const override { return 1; }
  void init(NoisyOracle& oracle) override;
  std::int64_t step_cost() const override { return kind_ == NoiseKind::Additive ? 2 : 3; }
  void step(NoisyOracle& oracle, std::int64_t allowance) override;

  double h() const { return h_; }
  double mu_star() const { return mu_star_; }
  double c4() const { return c4_; }
  double last_mu() const { return last_mu_; }

 private:
  NoiseKind kind_;
  double h_;
  double mu_star_ = 0.0;
  double c4_ = 0.0;
  double mu_min_;
  double last_mu_ = 0.0;
};

/// x_{k+1} = x_k - h (f(x_k + mu u) - f(x_k)) / mu * u with both values drawn
/// fresh each iteration (RG, SS, RSGF).
class FixedStepSolver final : public Solver {
 public:
  FixedStepSolver(SolverKind kind, const ProblemSpec& problem, double h, double mu, RngStream rng);

  SolverKind kind() const override { return kind_; }
  std::int64_t step_cost() const override { return 2; }
  void step(NoisyOracle& oracle, std::int64_t allowance) override;

  double h() const { return h_; }
  double mu() const { return mu_; }

 private:
  SolverKind kind_;
  double h_;
  double mu_;
};

struct LineSearchResult {
  double t = 0.0;
  std::int64_t probes = 0;
  bool completed = false;
};

/// Golden-section search for the minimizer of phi over [-span, span]. Probes
/// until the bracket is at most `accuracy` wide and returns its midpoint, or,
/// when `max_probes` runs out first, the best probe seen.
template <class Phi>
LineSearchResult golden_section(Phi&& phi, double span, double accuracy, std::int64_t max_probes);

/// Probes a full golden-section search spends: ceil(ln(acc / 2T) / ln(1/phi)) + 1.
std::int64_t golden_section_probe_count(double span, double accuracy);

class RandomPursuitSolver final : public Solver {
 public:
  RandomPursuitSolver(const ProblemSpec& problem, double accuracy, double span, RngStream rng);

  SolverKind kind() const override { return SolverKind::RP; }
  std::int64_t step_cost() const override { return probes_; }
  std::int64_t min_step_cost() const override { return 2; }
  void step(NoisyOracle& oracle, std::int64_t allowance) override;

  double last_t() const { return last_t_; }
  const Vector& last_direction() const { return last_u_; }

 private:
  double accuracy_;
  double span_;
  std::int64_t probes_;
  double last_t_ = 0.0;
  Vector last_u_;
};

/// (1+1)-ES with multiplicative step-size control; accepts on <=.
class EvolutionStrategySolver final : public Solver {
 public:
  EvolutionStrategySolver(const ProblemSpec& problem, const EsParams& params, RngStream rng);

  SolverKind kind() const override { return SolverKind::ES; }
  std::int64_t step_cost() const override { return 2; }
  void step(NoisyOracle& oracle, std::int64_t allowance) override;

  /// Decision rule alone: accept when trial <= current.
  static bool accepts(double f_trial, double f_current) { return f_trial <= f_current; }

 private:
  EsParams params_;
};

// Parameter rules of the baselines.

/// (5 / (3 (n+4))) sqrt(eps / (2 L1)).
double rg_mu(double epsilon, double L1, int n);
/// R / ((n+4) sqrt(N+1) L0).
double ss_h(double R, int n, std::int64_t N, double L0);
/// eps / (2 L0 sqrt(n)).
double ss_mu(double epsilon, double L0, int n);
/// sqrt(2 max(f0, 0) / L1), replaced by sqrt(R2) (or 1 without R2) when larger.
double rsgf_diameter(double f0, double L1, std::optional<double> R2);
/// (1/sqrt(n+4)) min{1 / (4 L1 sqrt(n+4)), D / (sigma sqrt(N))} with the
/// guarded diameter above.
double rsgf_gamma(double L1_est, double sigma_est, double f0, int n, std::int64_t N,
                  std::optional<double> R2 = std::nullopt);

/// Builds a solver with every unset parameter resolved. RSGF estimates are
/// drawn from an oracle on the Estimation lane of (seed, stream_id).
std::unique_ptr<Solver> make_solver(const SolverConfig& config, const ProblemSpec& problem,
                                    const NoiseModel& noise, std::uint64_t seed,
                                    std::uint64_t stream_id);

struct TrajectoryRecord {
  std::int64_t k = 0;
  std::int64_t nevals = 0;
  double f_true = 0.0;
  double acc = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::int64_t iterations = 0;
  std::int64_t evaluations = 0;
  double mean_abs_f = 0.0;  ///< mean of |f(x_k)| over every iterate, k = 0..iterations
  bool aborted = false;
  std::string abort_reason;
  Vector final_x;
};

/// Drives one solver until the iteration limit or the evaluation budget,
/// whichever binds first. Accuracy is read from the problem, never from the
/// oracle. A TrialAborted is caught and reported in the trajectory.
Trajectory run(const SolverConfig& config, const ProblemSpec& problem, const NoiseModel& noise,
               std::uint64_t seed, std::uint64_t stream_id = 0);

// ---------------------------------------------------------------------------

template <class Phi>
LineSearchResult golden_section(Phi&& phi, double span, double accuracy, std::int64_t max_probes) {
  constexpr double kInvPhi = 0.61803398874989484820;
  LineSearchResult out;
  if (max_probes < 2) return out;
  double a = -span;
  double b = span;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  out.probes = 2;
  double best_t = fc <= fd ? c : d;
  double best_f = fc <= fd ? fc : fd;
  for (;;) {
    bool probe_c = false;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      probe_c = true;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
    }
    if (b - a <= accuracy) {
      out.t = 0.5 * (a + b);
      out.completed = true;
      return out;
    }
    if (out.probes >= max_probes) {
      out.t = best_t;
      return out;
    }
    const double t = probe_c ? c : d;
    const double ft = phi(t);
    ++out.probes;
    (probe_c ? fc : fd) = ft;
    if (ft < best_f) {
      best_f = ft;
      best_t = t;
    }
  }
}

}  // namespace stars
