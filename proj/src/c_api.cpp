#include "stars/stars_c.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "stars/errors.hpp"
#include "stars/estimation.hpp"
#include "stars/harness.hpp"
#include "stars/oracle.hpp"
#include "stars/problems.hpp"
#include "stars/solvers.hpp"
#include "stars/theory.hpp"

struct stars_problem {
  stars::ProblemSpec spec;
};

struct stars_oracle {
  stars::NoisyOracle oracle;
};

struct stars_trajectory {
  stars::Trajectory trajectory;
};

namespace {

thread_local std::string g_last_error;

stars_status fail(stars_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Maps the library's exception types onto status codes.
template <class Fn>
stars_status guarded(Fn&& fn) {
  try {
    fn();
    return STARS_OK;
  } catch (const stars::InvalidArgument& e) {
    return fail(STARS_E_INVALID_ARGUMENT, e.what());
  } catch (const stars::ConfigRejected& e) {
    return fail(STARS_E_CONFIG_REJECTED, e.what());
  } catch (const stars::SignalDominated& e) {
    return fail(STARS_E_SIGNAL_DOMINATED, e.what());
  } catch (const stars::EstimationFailed& e) {
    return fail(STARS_E_ESTIMATION_FAILED, e.what());
  } catch (const stars::TrialAborted& e) {
    return fail(STARS_E_TRIAL_ABORTED, e.what());
  } catch (const stars::IoError& e) {
    return fail(STARS_E_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(STARS_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(STARS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(STARS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(STARS_E_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw stars::InvalidArgument(message);
}

stars::NoiseKind to_kind(stars_noise_kind kind) {
  switch (kind) {
    case STARS_NOISE_ADDITIVE: return stars::NoiseKind::Additive;
    case STARS_NOISE_MULTIPLICATIVE: return stars::NoiseKind::Multiplicative;
  }
  throw stars::InvalidArgument("unknown noise kind");
}

stars::SolverKind to_kind(stars_solver_kind kind) {
  if (kind < STARS_SOLVER_STARS || kind > STARS_SOLVER_ES) throw stars::InvalidArgument("unknown solver kind");
  return stars::kAllSolvers[kind];
}

stars::Vector to_vector(const double* x, size_t n) {
  require(x != nullptr || n == 0, "null vector");
  return Eigen::Map<const stars::Vector>(x, static_cast<Eigen::Index>(n));
}

stars::SolverConfig to_config(const stars_solver_options& o) {
  stars::SolverConfig c;
  c.kind = to_kind(o.solver);
  if (o.iteration_limit >= 0) c.iteration_limit = o.iteration_limit;
  if (o.eval_budget >= 0) c.eval_budget = o.eval_budget;
  c.record_every = o.record_every;
  c.ss.epsilon = o.ss_epsilon;
  c.es.sigma0 = o.es_sigma0;
  c.rp.span = o.rp_span;
  c.stars.mu_min = o.mu_min;
  return c;
}

stars_estimate to_c(const stars::estimation::EstimateReport& r) {
  return {r.value, r.sample_count, r.dispersion};
}

}  // namespace

extern "C" {

const char* stars_last_error(void) { return g_last_error.c_str(); }

const char* stars_status_name(stars_status status) {
  switch (status) {
    case STARS_OK: return "ok";
    case STARS_E_INVALID_ARGUMENT: return "invalid-argument";
    case STARS_E_CONFIG_REJECTED: return "config-rejected";
    case STARS_E_SIGNAL_DOMINATED: return "signal-dominated";
    case STARS_E_ESTIMATION_FAILED: return "estimation-failed";
    case STARS_E_TRIAL_ABORTED: return "trial-aborted";
    case STARS_E_IO: return "io-error";
    case STARS_E_INTERNAL: return "internal-error";
  }
  return "unknown";
}

stars_status stars_parse_noise_kind(const char* text, stars_noise_kind* out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = stars::parse_noise_kind(text) == stars::NoiseKind::Additive ? STARS_NOISE_ADDITIVE
                                                                       : STARS_NOISE_MULTIPLICATIVE;
  });
}

stars_status stars_parse_solver_kind(const char* text, stars_solver_kind* out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = static_cast<stars_solver_kind>(stars::parse_solver_kind(text));
  });
}

const char* stars_solver_name(stars_solver_kind kind) {
  static const char* const names[] = {"stars", "rg", "ss", "rsgf", "rp", "es"};
  if (kind < STARS_SOLVER_STARS || kind > STARS_SOLVER_ES) return "unknown";
  return names[kind];
}

stars_status stars_problem_create(const char* name, int n, stars_problem** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = nullptr;
    *out = new stars_problem{stars::make_problem(name, n)};
  });
}

void stars_problem_destroy(stars_problem* problem) { delete problem; }

stars_status stars_problem_info_get(const stars_problem* problem, stars_problem_info* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    const auto& p = problem->spec;
    *out = {p.n, p.f_star, p.L0, p.L1, p.R2};
  });
}

stars_status stars_problem_eval(const stars_problem* problem, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    *out = problem->spec.eval(to_vector(x, n));
  });
}

stars_status stars_problem_start(const stars_problem* problem, double* out, size_t n) {
  return guarded([&] {
    require(problem && out, "null argument");
    require(n == static_cast<size_t>(problem->spec.n), "dimension mismatch");
    Eigen::Map<stars::Vector>(out, problem->spec.n) = problem->spec.x0;
  });
}

stars_status stars_oracle_create(const stars_problem* problem, stars_noise_kind kind, double sigma,
                                 uint64_t seed, uint64_t stream, stars_oracle** out) {
  return guarded([&] {
    require(problem && out, "null argument");
    *out = nullptr;
    *out = new stars_oracle{stars::NoisyOracle(problem->spec, stars::NoiseModel{to_kind(kind), sigma},
                                               stars::RngStream(seed, stream))};
  });
}

void stars_oracle_destroy(stars_oracle* oracle) { delete oracle; }

stars_status stars_oracle_eval(stars_oracle* oracle, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(oracle && out, "null argument");
    *out = oracle->oracle.eval(to_vector(x, n));
  });
}

int64_t stars_oracle_eval_count(const stars_oracle* oracle) {
  return oracle ? oracle->oracle.eval_count() : -1;
}

stars_status stars_bounds_compute(const stars_problem* problem, stars_noise_kind kind, double sigma,
                                  stars_bounds* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    const auto b = stars::theory::compute_bounds(problem->spec, {to_kind(kind), sigma});
    *out = {kind, b.n, b.sigma, b.mu_star, b.c4, b.h, b.eps_pred, b.N, b.b, b.M};
  });
}

stars_status stars_bounds_render(const stars_problem* problem, stars_noise_kind kind, double sigma,
                                 stars_bounds_format format, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(problem != nullptr, "null problem");
    require(buf != nullptr || cap == 0, "null buffer");
    const auto b = stars::theory::compute_bounds(problem->spec, {to_kind(kind), sigma});
    const std::string text = format == STARS_BOUNDS_RECORD ? stars::theory::format_record(b)
                                                           : stars::theory::format_text(b);
    if (needed) *needed = text.size();
    if (cap > 0) {
      const size_t count = std::min(cap - 1, text.size());
      text.copy(buf, count);
      buf[count] = '\0';
    }
  });
}

void stars_solver_options_init(stars_solver_options* options) {
  if (!options) return;
  const stars::SolverConfig d;
  *options = {STARS_SOLVER_STARS, -1,          -1, d.record_every, d.ss.epsilon, d.es.sigma0,
              d.rp.span,          d.stars.mu_min};
}

stars_status stars_run(const stars_problem* problem, stars_noise_kind kind, double sigma,
                       const stars_solver_options* options, uint64_t seed, uint64_t stream,
                       stars_trajectory** out) {
  return guarded([&] {
    require(problem && options && out, "null argument");
    *out = nullptr;
    auto t = std::make_unique<stars_trajectory>();
    t->trajectory = stars::run(to_config(*options), problem->spec, {to_kind(kind), sigma}, seed, stream);
    *out = t.release();
  });
}

void stars_trajectory_destroy(stars_trajectory* trajectory) { delete trajectory; }

size_t stars_trajectory_size(const stars_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.records.size() : 0;
}

stars_status stars_trajectory_record(const stars_trajectory* trajectory, size_t index, stars_record* out) {
  return guarded([&] {
    require(trajectory && out, "null argument");
    const auto& recs = trajectory->trajectory.records;
    require(index < recs.size(), "record index out of range");
    const auto& r = recs[index];
    *out = {r.k, r.nevals, r.f_true, r.acc};
  });
}

int stars_trajectory_aborted(const stars_trajectory* trajectory) {
  return trajectory && trajectory->trajectory.aborted ? 1 : 0;
}

int64_t stars_trajectory_evaluations(const stars_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.evaluations : -1;
}

stars_status stars_trajectory_write_csv(const stars_trajectory* trajectory, const char* path) {
  return guarded([&] {
    require(trajectory && path, "null argument");
    stars::harness::write_trial_csv(trajectory->trajectory, path);
  });
}

stars_status stars_experiment_run(const stars_experiment_config* config,
                                  stars_experiment_summary* summary) {
  return guarded([&] {
    require(config != nullptr, "null config");
    require(config->problem != nullptr, "null problem name");
    require(config->sigmas != nullptr || config->sigma_count == 0, "null sigma list");
    require(config->solvers != nullptr || config->solver_count == 0, "null solver list");
    stars::harness::ExperimentConfig cfg;
    cfg.problem = config->problem;
    cfg.n = config->n;
    cfg.noise_kind = to_kind(config->noise);
    cfg.sigmas.assign(config->sigmas, config->sigmas + config->sigma_count);
    for (size_t i = 0; i < config->solver_count; ++i) {
      stars::SolverConfig sc;
      sc.kind = to_kind(config->solvers[i]);
      if (config->eval_budget >= 0) sc.eval_budget = config->eval_budget;
      if (config->iteration_limit >= 0) sc.iteration_limit = config->iteration_limit;
      cfg.solvers.push_back(sc);
    }
    cfg.seeds = config->seeds;
    cfg.seed0 = config->seed0;
    cfg.workers = config->workers < 1 ? 1 : config->workers;
    const auto result = stars::harness::run_experiment(cfg);
    if (config->out_dir) stars::harness::write_experiment(cfg, result, config->out_dir);
    if (summary) *summary = {result.cells.size(), result.warnings};
  });
}

void stars_figure_options_init(stars_figure_options* options) {
  if (options) *options = {nullptr, 0, 1, 0, 0};
}

stars_status stars_figure_run(stars_figure figure, const stars_figure_options* options) {
  return guarded([&] {
    require(options != nullptr, "null options");
    stars::harness::FigureOptions fo;
    if (options->out_dir) fo.out_dir = options->out_dir;
    fo.seed0 = options->seed0;
    fo.workers = options->workers < 1 ? 1 : options->workers;
    fo.seeds = options->seeds;
    fo.budget = options->budget;
    switch (figure) {
      case STARS_FIGURE_1: stars::harness::run_fig1(fo); break;
      case STARS_FIGURE_2: stars::harness::run_fig2(fo); break;
      case STARS_FIGURE_3: stars::harness::run_fig3(fo); break;
      default: throw stars::InvalidArgument("unknown figure");
    }
  });
}

stars_status stars_estimate_sigma(stars_oracle* oracle, stars_noise_kind kind, const double* x,
                                  size_t n, int m, stars_estimate* out) {
  return guarded([&] {
    require(oracle && out, "null argument");
    const auto v = to_vector(x, n);
    *out = to_c(to_kind(kind) == stars::NoiseKind::Additive
                    ? stars::estimation::estimate_sigma_additive(oracle->oracle, v, m)
                    : stars::estimation::estimate_sigma_relative(oracle->oracle, v, m));
  });
}

stars_status stars_estimate_L1(stars_oracle* oracle, const double* x0, size_t n, int samples,
                               double fd_step, stars_estimate* out) {
  return guarded([&] {
    require(oracle && out, "null argument");
    *out = to_c(stars::estimation::estimate_L1_saa(oracle->oracle, to_vector(x0, n), samples, fd_step));
  });
}

stars_status stars_estimate_grad_var(stars_oracle* oracle, const double* points, size_t point_count,
                                     size_t n, double mu, int m, uint64_t seed, stars_estimate* out) {
  return guarded([&] {
    require(oracle && out, "null argument");
    require(points != nullptr || point_count == 0, "null points");
    std::vector<stars::Vector> pts;
    for (size_t i = 0; i < point_count; ++i) pts.push_back(to_vector(points + i * n, n));
    stars::RngStream dirs(seed, 0, stars::Lane::EstimationDirections);
    *out = to_c(stars::estimation::estimate_grad_var(oracle->oracle, pts, mu, m, dirs));
  });
}

int64_t stars_saa_hessian_cost(int n, int samples) {
  return stars::estimation::saa_hessian_cost(n, samples);
}

}  // extern "C"
