#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stars/oracle.hpp"
#include "stars/solvers.hpp"

namespace stars::harness {

struct AggregatePoint {
  std::int64_t nevals = 0;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Accuracy statistics across trials on a shared evaluation grid.
struct AggregateSeries {
  std::vector<AggregatePoint> points;
};

/// q-quantile of ascending `sorted` by linear interpolation between order
/// statistics at position q (m - 1).
double quantile(std::span<const double> sorted, double q);

/// Aligns trials on the union of their nevals values, carrying each trial's
/// last accuracy forward. The result does not depend on the order of trials.
AggregateSeries aggregate(std::span<const Trajectory> trials);

/// Mean of f(x_N) - f_star over trials that all stopped at iteration N.
double mean_final_accuracy(std::span<const Trajectory> trials, std::int64_t N);

/// Throws InvalidArgument if min <= q25 <= median <= q75 <= max fails anywhere.
void check_quantile_order(const AggregateSeries& series);

void write_trial_csv(const Trajectory& trajectory, const std::filesystem::path& path);
void write_aggregate_csv(const AggregateSeries& series, const std::filesystem::path& path);
std::vector<TrajectoryRecord> read_trial_csv(const std::filesystem::path& path);
AggregateSeries read_aggregate_csv(const std::filesystem::path& path);

// Plot scripts ---------------------------------------------------------------

struct PlotCurve {
  std::string label;
  std::string csv;  ///< relative to the script's directory
};

struct PlotPanel {
  std::string title;
  std::vector<PlotCurve> curves;
  /// Aggregate CSVs (nevals vs accuracy with quartile band) or fig2-style
  /// summaries (n vs eps_pred and eps_actual).
  enum class Kind { Aggregate, Dimension } kind = Kind::Aggregate;
};

/// Writes a self-contained matplotlib script that renders `panels` in a grid
/// with `columns` columns to <script stem>.png next to it.
void emit_plot_script(std::span<const PlotPanel> panels, int columns,
                      const std::filesystem::path& path);

// Experiments ----------------------------------------------------------------

struct ExperimentConfig {
  std::string problem = "f1";
  int n = 8;
  NoiseKind noise_kind = NoiseKind::Additive;
  std::vector<double> sigmas;
  std::vector<SolverConfig> solvers;
  int seeds = 1;
  std::uint64_t seed0 = 0;
  int workers = 1;
  bool write_trials = true;
};

struct CellResult {
  SolverKind solver = SolverKind::Stars;
  double sigma = 0.0;
  std::vector<Trajectory> trials;  ///< index i ran on stream i
  AggregateSeries series;          ///< over trials that did not abort
  int aborted = 0;
};

struct ExperimentResult {
  std::vector<CellResult> cells;  ///< ordered (sigma, solver) as configured
  int warnings = 0;               ///< aborted trials across all cells
};

/// Throws InvalidArgument / ConfigRejected for an unusable configuration.
void validate(const ExperimentConfig& config);

/// Runs every (sigma, solver, seed) trial. Trial i uses stream i of seed0, so
/// a solver's results do not depend on which other solvers are configured.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Directory name of one noise cell, e.g. "add_sigma0.001".
std::string cell_dir_name(NoiseKind kind, double sigma);

/// Layout under `dir`:
///   <cell>/<solver>.csv              aggregate
///   <cell>/<solver>/trial_<i>.csv    when write_trials
///   <cell>/plot.py                   one panel per cell
void write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                      const std::filesystem::path& dir);

// Figure protocols -----------------------------------------------------------

struct FigureOptions {
  std::filesystem::path out_dir;  ///< empty: compute only
  std::uint64_t seed0 = 0;
  int workers = 1;
  int seeds = 0;                 ///< 0: protocol default
  std::int64_t budget = 0;       ///< evaluations; 0: protocol default
};

struct Fig1Row {
  NoiseKind noise = NoiseKind::Additive;
  double sigma = 0.0;
  SolverKind solver = SolverKind::Stars;
  double median_final = 0.0;
  double q25_final = 0.0;
  double q75_final = 0.0;
  double iqr_final() const { return q75_final - q25_final; }
};

struct Fig2Row {
  NoiseKind noise = NoiseKind::Additive;
  double sigma = 0.0;
  int n = 0;
  std::int64_t iterations = 0;
  double eps_pred = 0.0;
  double eps_actual = 0.0;
  double M = 0.0;  ///< multiplicative: post-hoc mean |f(x_k)|
};

struct Fig3Row {
  NoiseKind noise = NoiseKind::Additive;
  double sigma = 0.0;
  SolverKind solver = SolverKind::Stars;
  double mean_final_f = 0.0;
  double mean_final_acc = 0.0;
  int aborted = 0;
};

/// f1, n = 8, 20 seeds, sigma in {1e-6, 1e-3} for both noise kinds, STARS vs
/// RG, 2000 evaluations.
std::vector<Fig1Row> run_fig1(const FigureOptions& options);

/// f1, n in {8, 16, 32}, 15 seeds. Additive sigma in {1e-2, 1e-4} run for the
/// theoretical iteration budget; relative sigma in {1e-4, 1e-6} get the
/// evaluation budget of the paired additive run.
std::vector<Fig2Row> run_fig2(const FigureOptions& options, std::span<const int> dims = {});

/// f1, n = 8, 20 seeds, sigma in {1e-5, 1e-3, 1e-1} for both noise kinds, all
/// six solvers, 10^4 evaluations.
std::vector<Fig3Row> run_fig3(const FigureOptions& options);

}  // namespace stars::harness
