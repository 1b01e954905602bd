#include "stars/solvers.hpp"

#include <cmath>
#include <limits>

#include "stars/errors.hpp"
#include "stars/estimation.hpp"

namespace stars {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Stars: return "stars";
    case SolverKind::RG: return "rg";
    case SolverKind::SS: return "ss";
    case SolverKind::RSGF: return "rsgf";
    case SolverKind::RP: return "rp";
    case SolverKind::ES: return "es";
  }
  return "?";
}

SolverKind parse_solver_kind(const std::string& text) {
  for (SolverKind k : kAllSolvers)
    if (to_string(k) == text) return k;
  throw InvalidArgument("unknown solver '" + text + "'");
}

void validate(const SolverConfig& config) {
  if (!config.iteration_limit && !config.eval_budget)
    throw ConfigRejected("solver config needs an iteration limit or an evaluation budget");
  if (config.iteration_limit && *config.iteration_limit < 0)
    throw ConfigRejected("iteration limit must be >= 0");
  if (config.eval_budget && *config.eval_budget < 0)
    throw ConfigRejected("evaluation budget must be >= 0");
  if (config.record_every < 1) throw ConfigRejected("record_every must be >= 1");
}

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw TrialAborted(std::string(what) + " is not finite");
}

// N for solvers whose step sizes depend on the iteration count.
std::int64_t planned_iterations(const SolverConfig& config, std::int64_t explicit_n) {
  if (explicit_n > 0) return explicit_n;
  std::int64_t n = std::numeric_limits<std::int64_t>::max();
  if (config.iteration_limit) n = std::min(n, *config.iteration_limit);
  if (config.eval_budget) n = std::min(n, *config.eval_budget / 2);
  return std::max<std::int64_t>(n, 1);
}

}  // namespace

// STARS ---------------------------------------------------------------------

StarsSolver::StarsSolver(const ProblemSpec& problem, NoiseKind kind, double sigma, double L1,
                         double mu_min, RngStream rng)
    : Solver(SolverState{problem.x0, 0.0, 0, 0.0, rng}), kind_(kind), mu_min_(mu_min) {
  if (!(L1 > 0.0)) throw ConfigRejected("STARS: L1 must be > 0");
  if (!(mu_min > 0.0)) throw ConfigRejected("STARS: mu_min must be > 0");
  if (kind == NoiseKind::Additive) {
    if (!(sigma > 0.0)) throw ConfigRejected("STARS additive mode needs sigma_a > 0");
    mu_star_ = theory::mu_star_additive(sigma, L1, problem.n);
  } else {
    if (!(sigma > 0.0) || !(sigma < kMaxRelativeSigma))
      throw ConfigRejected("STARS multiplicative mode needs 0 < sigma_r < 3^{-1/2}");
    c4_ = theory::c4(sigma, L1, problem.n);
  }
  h_ = theory::step_length(L1, problem.n);
}

void StarsSolver::init(NoisyOracle& oracle) {
  state_.cached_f_noisy = oracle.eval(state_.x);
}

void StarsSolver::step(NoisyOracle& oracle, std::int64_t /*allowance*/) {
  const int n = static_cast<int>(state_.x.size());
  const Vector u = gaussian_vector(state_.rng, n);
  // Relative noise: mu from a fresh value, independent of the cached one.
  last_mu_ = kind_ == NoiseKind::Additive
                 ? mu_star_
                 : theory::mu_tilde(c4_, oracle.eval(state_.x), mu_min_);
  const double f_plus = oracle.eval(state_.x + last_mu_ * u);
  const Vector s = (f_plus - state_.cached_f_noisy) / last_mu_ * u;
  require_finite(s, "STARS oracle vector");
  state_.x -= h_ * s;
  require_finite(state_.x, "STARS iterate");
  state_.cached_f_noisy = oracle.eval(state_.x);
  ++state_.k;
}

// RG / SS / RSGF -------------------------------------------------------------

FixedStepSolver::FixedStepSolver(SolverKind kind, const ProblemSpec& problem, double h, double mu,
                                 RngStream rng)
    : Solver(SolverState{problem.x0, 0.0, 0, 0.0, rng}), kind_(kind), h_(h), mu_(mu) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigRejected(to_string(kind) + ": step length must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigRejected(to_string(kind) + ": mu must be > 0");
}

void FixedStepSolver::step(NoisyOracle& oracle, std::int64_t /*allowance*/) {
  const int n = static_cast<int>(state_.x.size());
  const Vector u = gaussian_vector(state_.rng, n);
  const double f_base = oracle.eval(state_.x);
  const double f_plus = oracle.eval(state_.x + mu_ * u);
  const Vector s = (f_plus - f_base) / mu_ * u;
  require_finite(s, "oracle vector");
  state_.x -= h_ * s;
  require_finite(state_.x, "iterate");
  ++state_.k;
}

double rg_mu(double epsilon, double L1, int n) {
  if (!(epsilon > 0.0) || !(L1 > 0.0) || n < 1) throw InvalidArgument("rg_mu: arguments must be positive");
  return 5.0 / (3.0 * (n + 4.0)) * std::sqrt(epsilon / (2.0 * L1));
}

double ss_h(double R, int n, std::int64_t N, double L0) {
  if (!(R > 0.0) || !(L0 > 0.0) || n < 1 || N < 0) throw InvalidArgument("ss_h: arguments must be positive");
  return R / ((n + 4.0) * std::sqrt(static_cast<double>(N) + 1.0) * L0);
}

double ss_mu(double epsilon, double L0, int n) {
  if (!(epsilon > 0.0) || !(L0 > 0.0) || n < 1) throw InvalidArgument("ss_mu: arguments must be positive");
  return epsilon / (2.0 * L0 * std::sqrt(static_cast<double>(n)));
}

double rsgf_diameter(double f0, double L1, std::optional<double> R2) {
  const double raw = std::sqrt(2.0 * std::max(f0, 0.0) / L1);
  const double fallback = R2 ? std::sqrt(*R2) : 1.0;
  return std::max(raw, fallback);
}

double rsgf_gamma(double L1_est, double sigma_est, double f0, int n, std::int64_t N,
                  std::optional<double> R2) {
  if (!(L1_est > 0.0) || !(sigma_est > 0.0) || N < 1 || n < 1)
    throw InvalidArgument("rsgf_gamma: L1, sigma and N must be positive");
  const double root = std::sqrt(n + 4.0);
  const double D = rsgf_diameter(f0, L1_est, R2);
  return std::min(1.0 / (4.0 * L1_est * root), D / (sigma_est * std::sqrt(static_cast<double>(N)))) / root;
}

// RP ------------------------------------------------------------------------

std::int64_t golden_section_probe_count(double span, double accuracy) {
  constexpr double kInvPhi = 0.61803398874989484820;
  if (!(span > 0.0) || !(accuracy > 0.0)) throw InvalidArgument("line search span and accuracy must be > 0");
  if (2.0 * span * kInvPhi <= accuracy) return 2;
  return static_cast<std::int64_t>(std::ceil(std::log(accuracy / (2.0 * span)) / std::log(kInvPhi))) + 1;
}

RandomPursuitSolver::RandomPursuitSolver(const ProblemSpec& problem, double accuracy, double span,
                                         RngStream rng)
    : Solver(SolverState{problem.x0, 0.0, 0, 0.0, rng}),
      accuracy_(accuracy),
      span_(span),
      probes_(golden_section_probe_count(span, accuracy)) {}

void RandomPursuitSolver::step(NoisyOracle& oracle, std::int64_t allowance) {
  const int n = static_cast<int>(state_.x.size());
  last_u_ = gaussian_vector(state_.rng, n);
  const Vector& x = state_.x;
  const auto result = golden_section(
      [&](double t) { return oracle.eval(x + t * last_u_); }, span_, accuracy_, allowance);
  last_t_ = result.t;
  state_.x += last_t_ * last_u_;
  require_finite(state_.x, "RP iterate");
  ++state_.k;
}

// ES ------------------------------------------------------------------------

EvolutionStrategySolver::EvolutionStrategySolver(const ProblemSpec& problem, const EsParams& params,
                                                 RngStream rng)
    : Solver(SolverState{problem.x0, 0.0, 0, params.sigma0, rng}), params_(params) {
  if (!(params.sigma0 > 0.0)) throw ConfigRejected("ES: sigma0 must be > 0");
  if (!(params.c_s > 1.0) || !(params.c_f > 0.0) || !(params.c_f < 1.0))
    throw ConfigRejected("ES: need c_s > 1 and 0 < c_f < 1");
}

void EvolutionStrategySolver::step(NoisyOracle& oracle, std::int64_t /*allowance*/) {
  const int n = static_cast<int>(state_.x.size());
  const Vector u = gaussian_vector(state_.rng, n);
  const Vector trial = state_.x + state_.es_sigma * u;
  const double f_current = oracle.eval(state_.x);
  const double f_trial = oracle.eval(trial);
  if (accepts(f_trial, f_current)) {
    state_.x = trial;
    state_.es_sigma *= params_.c_s;
  } else {
    state_.es_sigma *= params_.c_f;
  }
  require_finite(state_.x, "ES iterate");
  if (!(state_.es_sigma > 0.0) || !std::isfinite(state_.es_sigma))
    throw TrialAborted("ES step size left (0, inf)");
  ++state_.k;
}

// Factory -------------------------------------------------------------------

std::unique_ptr<Solver> make_solver(const SolverConfig& config, const ProblemSpec& problem,
                                    const NoiseModel& noise, std::uint64_t seed,
                                    std::uint64_t stream_id) {
  validate(config);
  validate(noise);
  RngStream directions(seed, stream_id, Lane::Directions);
  const int n = problem.n;
  switch (config.kind) {
    case SolverKind::Stars: {
      const auto& p = config.stars;
      const double L1 = p.L1 > 0.0 ? p.L1 : problem.L1;
      const double sigma = p.sigma >= 0.0 ? p.sigma : noise.sigma;
      return std::make_unique<StarsSolver>(problem, noise.kind, sigma, L1, p.mu_min, directions);
    }
    case SolverKind::RG: {
      const double L1 = config.rg.L1 > 0.0 ? config.rg.L1 : problem.L1;
      return std::make_unique<FixedStepSolver>(SolverKind::RG, problem, theory::step_length(L1, n),
                                               rg_mu(config.rg.epsilon, L1, n), directions);
    }
    case SolverKind::SS: {
      const auto& p = config.ss;
      const double L0 = p.L0 > 0.0 ? p.L0 : problem.L0;
      const double R2 = p.R2 > 0.0 ? p.R2 : problem.R2;
      const std::int64_t N = planned_iterations(config, p.N);
      return std::make_unique<FixedStepSolver>(SolverKind::SS, problem,
                                               ss_h(std::sqrt(R2), n, N, L0),
                                               ss_mu(p.epsilon, L0, n), directions);
    }
    case SolverKind::RSGF: {
      const auto& p = config.rsgf;
      double L1 = p.L1_est;
      double sigma = p.sigma_est;
      std::optional<double> f0 = p.f0;
      if (!(L1 > 0.0) || !(sigma > 0.0) || !f0) {
        // Setup probes run on their own lane and are not charged to the trial.
        NoisyOracle probe(problem, noise, RngStream(seed, stream_id, Lane::Estimation));
        RngStream probe_dirs(seed, stream_id, Lane::EstimationDirections);
        if (!f0) f0 = probe.eval(problem.x0);
        if (!(L1 > 0.0)) L1 = estimation::estimate_L1_saa(probe, problem.x0, p.estimate_samples).value;
        if (!(sigma > 0.0)) {
          const auto points = estimation::box_points(problem.x0, 1.0, p.grad_var_points, probe_dirs);
          sigma = std::sqrt(
              estimation::estimate_grad_var(probe, points, p.mu, p.grad_var_draws, probe_dirs).value);
        }
        if (!(L1 > 0.0) || !(sigma > 0.0))
          throw ConfigRejected("RSGF: parameter estimation returned a non-positive constant");
      }
      const std::int64_t N = planned_iterations(config, p.N);
      return std::make_unique<FixedStepSolver>(SolverKind::RSGF, problem,
                                               rsgf_gamma(L1, sigma, *f0, n, N, problem.R2), p.mu,
                                               directions);
    }
    case SolverKind::RP:
      return std::make_unique<RandomPursuitSolver>(problem, config.rp.accuracy, config.rp.span,
                                                   directions);
    case SolverKind::ES: {
      EsParams p = config.es;
      if (!(p.sigma0 > 0.0)) p.sigma0 = std::sqrt(problem.R2 / n);
      return std::make_unique<EvolutionStrategySolver>(problem, p, directions);
    }
  }
  throw InvalidArgument("unknown solver kind");
}

// Driver --------------------------------------------------------------------

Trajectory run(const SolverConfig& config, const ProblemSpec& problem, const NoiseModel& noise,
               std::uint64_t seed, std::uint64_t stream_id) {
  validate(config);
  NoisyOracle oracle(problem, noise, RngStream(seed, stream_id, Lane::Noise));
  auto solver = make_solver(config, problem, noise, seed, stream_id);

  const std::int64_t iteration_limit =
      config.iteration_limit.value_or(std::numeric_limits<std::int64_t>::max());
  const std::int64_t budget = config.eval_budget.value_or(std::numeric_limits<std::int64_t>::max());

  Trajectory traj;
  double abs_f_sum = 0.0;
  auto observe = [&](bool force) {
    const auto& st = solver->state();
    const double f = problem.eval(st.x);
    abs_f_sum += std::abs(f);
    if (force || st.k % config.record_every == 0)
      traj.records.push_back({st.k, oracle.eval_count(), f, f - problem.f_star});
  };

  observe(true);
  try {
    if (solver->init_cost() <= budget && iteration_limit > 0) {
      solver->init(oracle);
      while (solver->state().k < iteration_limit) {
        const std::int64_t remaining = budget - oracle.eval_count();
        if (remaining < solver->min_step_cost()) break;
        solver->step(oracle, std::min(remaining, solver->step_cost()));
        observe(false);
      }
    }
  } catch (const TrialAborted& e) {
    traj.aborted = true;
    traj.abort_reason = e.what();
  }

  const auto& st = solver->state();
  if (traj.records.back().k != st.k) {
    const double f = problem.eval(st.x);
    traj.records.push_back({st.k, oracle.eval_count(), f, f - problem.f_star});
  }
  traj.iterations = st.k;
  traj.evaluations = oracle.eval_count();
  traj.mean_abs_f = abs_f_sum / static_cast<double>(st.k + 1);
  traj.final_x = st.x;
  return traj;
}

}  // namespace stars
