// Command-line front end. Talks to the library only through stars_c.h.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stars/stars_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int exit_code(stars_status status) {
  switch (status) {
    case STARS_OK: return kExitOk;
    case STARS_E_INVALID_ARGUMENT:
    case STARS_E_CONFIG_REJECTED: return kExitConfig;
    default: return kExitRuntime;
  }
}

// Thrown out of a subcommand body to stop with the status of a failed call.
struct CallFailed {
  stars_status status;
};

void check(stars_status status) {
  if (status == STARS_OK) return;
  std::cerr << "error (" << stars_status_name(status) << "): " << stars_last_error() << "\n";
  throw CallFailed{status};
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    std::cerr << "error: not a number: '" << text << "'\n";
    throw CallFailed{STARS_E_INVALID_ARGUMENT};
  }
  return v;
}

struct ProblemHandle {
  stars_problem* p = nullptr;
  ~ProblemHandle() { stars_problem_destroy(p); }
};

struct OracleHandle {
  stars_oracle* o = nullptr;
  ~OracleHandle() { stars_oracle_destroy(o); }
};

stars_noise_kind noise_of(const std::string& text) {
  stars_noise_kind kind{};
  check(stars_parse_noise_kind(text.c_str(), &kind));
  return kind;
}

void print_estimate(const char* label, const stars_estimate& e) {
  std::printf("%-10s value=%.10g sample_count=%lld dispersion=%.6g\n", label, e.value,
              static_cast<long long>(e.sample_count), e.dispersion);
}

struct BoundsArgs {
  std::string problem = "f1";
  int n = 8;
  std::string noise = "add";
  double sigma = 1e-3;
};

int cmd_bounds(const BoundsArgs& a) {
  ProblemHandle problem;
  check(stars_problem_create(a.problem.c_str(), a.n, &problem.p));
  const auto kind = noise_of(a.noise);
  for (auto format : {STARS_BOUNDS_TEXT, STARS_BOUNDS_RECORD}) {
    size_t needed = 0;
    check(stars_bounds_render(problem.p, kind, a.sigma, format, nullptr, 0, &needed));
    std::string text(needed + 1, '\0');
    check(stars_bounds_render(problem.p, kind, a.sigma, format, text.data(), text.size(), &needed));
    text.resize(needed);
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  }
  return kExitOk;
}

struct RunArgs {
  std::string problem = "f1";
  int n = 8;
  std::string noise = "add";
  std::string sigmas = "1e-3";
  std::string solvers = "stars";
  int seeds = 1;
  std::uint64_t seed0 = 0;
  std::int64_t budget = -1;
  std::int64_t iters = -1;
  int workers = 1;
  std::string out = "out";
};

int cmd_run(const RunArgs& a) {
  std::vector<double> sigmas;
  for (const auto& s : split_csv(a.sigmas)) sigmas.push_back(to_real(s));
  std::vector<stars_solver_kind> solvers;
  for (const auto& s : split_csv(a.solvers)) {
    stars_solver_kind kind{};
    check(stars_parse_solver_kind(s.c_str(), &kind));
    solvers.push_back(kind);
  }
  stars_experiment_config cfg{};
  cfg.problem = a.problem.c_str();
  cfg.n = a.n;
  cfg.noise = noise_of(a.noise);
  cfg.sigmas = sigmas.data();
  cfg.sigma_count = sigmas.size();
  cfg.solvers = solvers.data();
  cfg.solver_count = solvers.size();
  cfg.seeds = a.seeds;
  cfg.seed0 = a.seed0;
  cfg.eval_budget = a.budget;
  cfg.iteration_limit = a.iters;
  cfg.workers = a.workers;
  cfg.out_dir = a.out.c_str();
  stars_experiment_summary summary{};
  check(stars_experiment_run(&cfg, &summary));
  std::printf("cells=%zu aborted_trials=%d out=%s\n", summary.cells, summary.aborted_trials,
              a.out.c_str());
  return summary.aborted_trials > 0 ? kExitRuntime : kExitOk;
}

struct FigureArgs {
  std::string out = "figures";
  std::uint64_t seed0 = 0;
  int workers = 1;
  int seeds = 0;
  std::int64_t budget = 0;
};

int cmd_figure(stars_figure figure, const FigureArgs& a) {
  stars_figure_options options;
  stars_figure_options_init(&options);
  options.out_dir = a.out.c_str();
  options.seed0 = a.seed0;
  options.workers = a.workers;
  options.seeds = a.seeds;
  options.budget = a.budget;
  check(stars_figure_run(figure, &options));
  std::printf("fig%d written under %s\n", static_cast<int>(figure), a.out.c_str());
  return kExitOk;
}

struct EstimateArgs {
  std::string problem = "f1";
  int n = 8;
  std::string noise = "add";
  double sigma = 1e-3;
  int m = 10000;
  int samples = 200;
  double fd_step = 1e-2;
  double mu = 0.0025;
  int draws = 100;
  std::uint64_t seed = 0;
  std::string what = "all";
};

int cmd_estimate(const EstimateArgs& a) {
  ProblemHandle problem;
  check(stars_problem_create(a.problem.c_str(), a.n, &problem.p));
  const auto kind = noise_of(a.noise);
  std::vector<double> x0(static_cast<size_t>(a.n));
  check(stars_problem_start(problem.p, x0.data(), x0.size()));

  const bool all = a.what == "all";
  if (!all && a.what != "sigma" && a.what != "L1" && a.what != "gradvar") {
    std::cerr << "error: --what must be one of sigma, L1, gradvar, all\n";
    return kExitConfig;
  }
  std::uint64_t stream = 0;
  auto fresh_oracle = [&](OracleHandle& h) {
    check(stars_oracle_create(problem.p, kind, a.sigma, a.seed, stream++, &h.o));
  };
  if (all || a.what == "sigma") {
    OracleHandle oracle;
    fresh_oracle(oracle);
    stars_estimate e{};
    check(stars_estimate_sigma(oracle.o, kind, x0.data(), x0.size(), a.m, &e));
    print_estimate("sigma", e);
  }
  if (all || a.what == "L1") {
    OracleHandle oracle;
    fresh_oracle(oracle);
    stars_estimate e{};
    check(stars_estimate_L1(oracle.o, x0.data(), x0.size(), a.samples, a.fd_step, &e));
    print_estimate("L1", e);
    std::printf("%-10s evaluations=%lld\n", "L1-cost",
                static_cast<long long>(stars_saa_hessian_cost(a.n, a.samples)));
  }
  if (all || a.what == "gradvar") {
    OracleHandle oracle;
    fresh_oracle(oracle);
    stars_estimate e{};
    check(stars_estimate_grad_var(oracle.o, x0.data(), 1, x0.size(), a.mu, a.draws, a.seed, &e));
    print_estimate("grad-var", e);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-aware random search: theory bounds, solver runs and figure protocols"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print the theoretical stepsizes and accuracy floor");
  bounds_cmd->add_option("--problem", bounds.problem, "Problem name (f1, sphere)");
  bounds_cmd->add_option("--n", bounds.n, "Dimension");
  bounds_cmd->add_option("--noise", bounds.noise, "Noise kind (add, mult)");
  bounds_cmd->add_option("--sigma", bounds.sigma, "Noise level");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run solvers over seeds and write CSVs");
  run_cmd->add_option("--problem", run.problem, "Problem name (f1, sphere)");
  run_cmd->add_option("--n", run.n, "Dimension");
  run_cmd->add_option("--noise", run.noise, "Noise kind (add, mult)");
  run_cmd->add_option("--sigma", run.sigmas, "Comma-separated noise levels");
  run_cmd->add_option("--solver", run.solvers, "Comma-separated solvers (stars,rg,ss,rsgf,rp,es)");
  run_cmd->add_option("--seeds", run.seeds, "Number of trials per cell");
  run_cmd->add_option("--seed0", run.seed0, "Base seed");
  auto* budget_opt = run_cmd->add_option("--budget", run.budget, "Evaluation budget per trial");
  auto* iters_opt = run_cmd->add_option("--iters", run.iters, "Iteration limit per trial");
  budget_opt->excludes(iters_opt);
  run_cmd->add_option("--workers", run.workers, "Concurrent trials");
  run_cmd->add_option("--out", run.out, "Output directory");

  FigureArgs fig;
  std::vector<CLI::App*> fig_cmds;
  const char* fig_help[] = {"Noise invariance: STARS vs RG (n = 8)",
                            "Accuracy vs dimension against the theoretical floor",
                            "All solvers compared at three noise levels (n = 8)"};
  for (int i = 1; i <= 3; ++i) {
    auto* cmd = app.add_subcommand("fig" + std::to_string(i), fig_help[i - 1]);
    cmd->add_option("--out", fig.out, "Output directory");
    cmd->add_option("--seed0", fig.seed0, "Base seed");
    cmd->add_option("--workers", fig.workers, "Concurrent trials");
    cmd->add_option("--seeds", fig.seeds, "Trials per cell (0: protocol default)");
    cmd->add_option("--budget", fig.budget, "Evaluations per trial (0: protocol default)");
    fig_cmds.push_back(cmd);
  }

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate noise level, L1 and gradient variance");
  est_cmd->add_option("--problem", est.problem, "Problem name (f1, sphere)");
  est_cmd->add_option("--n", est.n, "Dimension");
  est_cmd->add_option("--noise", est.noise, "Noise kind (add, mult)");
  est_cmd->add_option("--sigma", est.sigma, "True noise level of the oracle");
  est_cmd->add_option("--m", est.m, "Replicates for the noise estimate");
  est_cmd->add_option("--samples", est.samples, "Averaged samples per Hessian probe");
  est_cmd->add_option("--fd-step", est.fd_step, "Hessian finite-difference step");
  est_cmd->add_option("--mu", est.mu, "Smoothing step for the gradient variance");
  est_cmd->add_option("--draws", est.draws, "Directions for the gradient variance");
  est_cmd->add_option("--seed", est.seed, "Seed");
  est_cmd->add_option("--what", est.what, "sigma, L1, gradvar or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(bounds);
    if (run_cmd->parsed()) return cmd_run(run);
    for (int i = 0; i < 3; ++i) {
      if (fig_cmds[i]->parsed()) return cmd_figure(static_cast<stars_figure>(i + 1), fig);
    }
    if (est_cmd->parsed()) return cmd_estimate(est);
  } catch (const CallFailed& failed) {
    return exit_code(failed.status);
  }
  return kExitConfig;
}
