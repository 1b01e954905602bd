#include "stars/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "stars/errors.hpp"
#include "stars/format.hpp"

namespace stars::harness {

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

AggregateSeries aggregate(std::span<const Trajectory> trials) {
  if (trials.empty()) throw InvalidArgument("aggregate: no trials");
  std::vector<std::int64_t> grid;
  for (const auto& t : trials) {
    if (t.records.empty()) throw InvalidArgument("aggregate: trial without records");
    for (const auto& r : t.records) grid.push_back(r.nevals);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::size_t> cursor(trials.size(), 0);
  std::vector<double> values(trials.size());
  AggregateSeries out;
  out.points.reserve(grid.size());
  for (const std::int64_t g : grid) {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const auto& recs = trials[i].records;
      while (cursor[i] + 1 < recs.size() && recs[cursor[i] + 1].nevals <= g) ++cursor[i];
      values[i] = recs[cursor[i]].acc;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    AggregatePoint p;
    p.nevals = g;
    p.mean = sum / static_cast<double>(values.size());
    p.median = quantile(values, 0.5);
    p.q25 = quantile(values, 0.25);
    p.q75 = quantile(values, 0.75);
    p.min = values.front();
    p.max = values.back();
    out.points.push_back(p);
  }
  return out;
}

double mean_final_accuracy(std::span<const Trajectory> trials, std::int64_t N) {
  if (trials.empty()) throw InvalidArgument("mean_final_accuracy: no trials");
  double sum = 0.0;
  for (const auto& t : trials) {
    if (t.records.empty() || t.records.back().k != N)
      throw InvalidArgument("mean_final_accuracy: a trial did not reach iteration " + std::to_string(N));
    sum += t.records.back().acc;
  }
  return sum / static_cast<double>(trials.size());
}

void check_quantile_order(const AggregateSeries& series) {
  for (const auto& p : series.points) {
    if (!(p.min <= p.q25 && p.q25 <= p.median && p.median <= p.q75 && p.q75 <= p.max))
      throw InvalidArgument("aggregate quantiles out of order at nevals=" + std::to_string(p.nevals));
  }
}

void validate(const ExperimentConfig& config) {
  if (config.seeds < 1) throw InvalidArgument("experiment needs at least one seed");
  if (config.sigmas.empty()) throw InvalidArgument("experiment needs at least one sigma");
  if (config.solvers.empty()) throw InvalidArgument("experiment needs at least one solver");
  if (config.workers < 1) throw InvalidArgument("workers must be >= 1");
  for (double s : config.sigmas) validate(NoiseModel{config.noise_kind, s});
  for (const auto& sc : config.solvers) validate(sc);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const ProblemSpec problem = make_problem(config.problem, config.n);

  ExperimentResult result;
  for (double sigma : config.sigmas) {
    for (const auto& sc : config.solvers) {
      CellResult cell;
      cell.solver = sc.kind;
      cell.sigma = sigma;
      cell.trials.resize(static_cast<std::size_t>(config.seeds));
      result.cells.push_back(std::move(cell));
    }
  }

  // Flat job list; each job writes only its own slot.
  const std::size_t per_cell = static_cast<std::size_t>(config.seeds);
  const std::size_t jobs = result.cells.size() * per_cell;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs || failed.load()) return;
      const std::size_t c = j / per_cell;
      const std::size_t trial = j % per_cell;
      auto& cell = result.cells[c];
      const auto& sc = config.solvers[c % config.solvers.size()];
      try {
        cell.trials[trial] =
            run(sc, problem, NoiseModel{config.noise_kind, cell.sigma}, config.seed0, trial);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int width = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs)));
  if (width == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < width; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& cell : result.cells) {
    std::vector<Trajectory> completed;
    for (const auto& t : cell.trials) {
      if (t.aborted)
        ++cell.aborted;
      else
        completed.push_back(t);
    }
    result.warnings += cell.aborted;
    if (!completed.empty()) cell.series = aggregate(completed);
  }
  return result;
}

std::string cell_dir_name(NoiseKind kind, double sigma) {
  return to_string(kind) + "_sigma" + format_double(sigma);
}

void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& dir) {
  for (double sigma : config.sigmas) {
    const auto cell_dir = dir / cell_dir_name(config.noise_kind, sigma);
    PlotPanel panel;
    panel.title = config.problem + " n=" + std::to_string(config.n) + " " +
                  to_string(config.noise_kind) + " sigma=" + format_double(sigma);
    for (const auto& cell : result.cells) {
      if (cell.sigma != sigma) continue;
      const std::string name = to_string(cell.solver);
      write_aggregate_csv(cell.series, cell_dir / (name + ".csv"));
      if (config.write_trials) {
        for (std::size_t i = 0; i < cell.trials.size(); ++i)
          write_trial_csv(cell.trials[i], cell_dir / name / ("trial_" + std::to_string(i) + ".csv"));
      }
      panel.curves.push_back({name, name + ".csv"});
    }
    emit_plot_script(std::span<const PlotPanel>(&panel, 1), 1, cell_dir / "plot.py");
  }
}

}  // namespace stars::harness
