#include <algorithm>
#include <fstream>
#include <limits>

#include "stars/errors.hpp"
#include "stars/format.hpp"
#include "stars/harness.hpp"
#include "stars/theory.hpp"

namespace stars::harness {

namespace {

constexpr NoiseKind kBothKinds[] = {NoiseKind::Additive, NoiseKind::Multiplicative};

SolverConfig budgeted(SolverKind kind, std::int64_t evals) {
  SolverConfig c;
  c.kind = kind;
  c.eval_budget = evals;
  return c;
}

std::vector<double> final_accuracies(const CellResult& cell) {
  std::vector<double> out;
  for (const auto& t : cell.trials)
    if (!t.aborted) out.push_back(t.records.back().acc);
  std::sort(out.begin(), out.end());
  return out;
}

class CsvTable {
 public:
  explicit CsvTable(std::string header) { text_ = std::move(header) + '\n'; }
  template <class... Cells>
  void row(const Cells&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + cell(cells)), ...);
    text_ += line + '\n';
  }
  void write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text_;
    if (!out) throw IoError("write failed: " + path.string());
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  std::string text_;
};

}  // namespace

std::vector<Fig1Row> run_fig1(const FigureOptions& options) {
  const int seeds = options.seeds > 0 ? options.seeds : 20;
  const std::int64_t budget = options.budget > 0 ? options.budget : 2000;
  const std::filesystem::path dir = options.out_dir.empty() ? "" : options.out_dir / "fig1";

  std::vector<Fig1Row> rows;
  std::vector<PlotPanel> panels;
  for (NoiseKind kind : kBothKinds) {
    ExperimentConfig cfg;
    cfg.problem = "f1";
    cfg.n = 8;
    cfg.noise_kind = kind;
    cfg.sigmas = {1e-6, 1e-3};
    cfg.solvers = {budgeted(SolverKind::Stars, budget), budgeted(SolverKind::RG, budget)};
    cfg.seeds = seeds;
    cfg.seed0 = options.seed0;
    cfg.workers = options.workers;
    const auto result = run_experiment(cfg);
    for (const auto& cell : result.cells) {
      const auto finals = final_accuracies(cell);
      Fig1Row row;
      row.noise = kind;
      row.sigma = cell.sigma;
      row.solver = cell.solver;
      if (!finals.empty()) {
        row.median_final = quantile(finals, 0.5);
        row.q25_final = quantile(finals, 0.25);
        row.q75_final = quantile(finals, 0.75);
      }
      rows.push_back(row);
    }
    if (!dir.empty()) {
      write_experiment(cfg, result, dir);
      for (double sigma : cfg.sigmas) {
        const std::string cell_dir = cell_dir_name(kind, sigma);
        panels.push_back({(kind == NoiseKind::Additive ? "sigma_a=" : "sigma_r=") + format_double(sigma),
                          {{"STARS", cell_dir + "/stars.csv"}, {"RG", cell_dir + "/rg.csv"}},
                          PlotPanel::Kind::Aggregate});
      }
    }
  }
  if (!dir.empty()) {
    emit_plot_script(panels, 2, dir / "fig1.py");
    CsvTable table("noise,sigma,solver,median_final,q25_final,q75_final,iqr_final");
    for (const auto& r : rows)
      table.row(to_string(r.noise), r.sigma, to_string(r.solver), r.median_final, r.q25_final,
                r.q75_final, r.iqr_final());
    table.write(dir / "summary.csv");
  }
  return rows;
}

std::vector<Fig2Row> run_fig2(const FigureOptions& options, std::span<const int> dims) {
  static constexpr int kDefaultDims[] = {8, 16, 32};
  if (dims.empty()) dims = kDefaultDims;
  const int seeds = options.seeds > 0 ? options.seeds : 15;
  const std::filesystem::path dir = options.out_dir.empty() ? "" : options.out_dir / "fig2";
  // Relative levels are paired with the additive level at the same position.
  const double additive[] = {1e-2, 1e-4};
  const double relative[] = {1e-4, 1e-6};

  std::vector<Fig2Row> rows;
  std::vector<PlotPanel> panels;
  for (NoiseKind kind : kBothKinds) {
    for (int level = 0; level < 2; ++level) {
      const double sigma = kind == NoiseKind::Additive ? additive[level] : relative[level];
      CsvTable table("n,iterations,eps_pred,eps_actual,M");
      for (int n : dims) {
        const ProblemSpec problem = f1_make(n);
        const std::int64_t n_add = theory::iteration_budget_additive(
            n, problem.L1, problem.R2, theory::eps_pred_additive(additive[level], n));
        SolverConfig sc;
        sc.kind = SolverKind::Stars;
        if (kind == NoiseKind::Additive) {
          sc.iteration_limit = n_add;
        } else {
          sc.eval_budget = 2 * n_add + 1;
        }
        const std::int64_t expected_iters = kind == NoiseKind::Additive ? n_add : (2 * n_add) / 3;
        sc.record_every = static_cast<int>(std::max<std::int64_t>(1, expected_iters / 1000));

        ExperimentConfig cfg;
        cfg.problem = "f1";
        cfg.n = n;
        cfg.noise_kind = kind;
        cfg.sigmas = {sigma};
        cfg.solvers = {sc};
        cfg.seeds = seeds;
        cfg.seed0 = options.seed0;
        cfg.workers = options.workers;
        cfg.write_trials = false;
        const auto result = run_experiment(cfg);
        const auto& cell = result.cells.front();

        Fig2Row row;
        row.noise = kind;
        row.sigma = sigma;
        row.n = n;
        row.iterations = cell.trials.front().iterations;
        row.eps_actual = mean_final_accuracy(cell.trials, row.iterations);
        if (kind == NoiseKind::Additive) {
          row.eps_pred = theory::eps_pred_additive(sigma, n);
        } else {
          double m_sum = 0.0;
          for (const auto& t : cell.trials) m_sum += t.mean_abs_f;
          row.M = m_sum / static_cast<double>(cell.trials.size());
          row.eps_pred = theory::eps_pred_multiplicative(sigma, n, theory::snr_bound_uniform(sigma),
                                                         row.M, problem.L0, problem.L1);
        }
        table.row(n, row.iterations, row.eps_pred, row.eps_actual, row.M);
        rows.push_back(row);
      }
      if (!dir.empty()) {
        const std::string name = cell_dir_name(kind, sigma) + ".csv";
        table.write(dir / name);
        panels.push_back({(kind == NoiseKind::Additive ? "sigma_a=" : "sigma_r=") + format_double(sigma),
                          {{"STARS", name}},
                          PlotPanel::Kind::Dimension});
      }
    }
  }
  if (!dir.empty()) emit_plot_script(panels, 2, dir / "fig2.py");
  return rows;
}

std::vector<Fig3Row> run_fig3(const FigureOptions& options) {
  const int seeds = options.seeds > 0 ? options.seeds : 20;
  const std::int64_t budget = options.budget > 0 ? options.budget : 10000;
  const std::filesystem::path dir = options.out_dir.empty() ? "" : options.out_dir / "fig3";

  std::vector<Fig3Row> rows;
  std::vector<PlotPanel> panels;
  for (double sigma : {1e-5, 1e-3, 1e-1}) {
    for (NoiseKind kind : kBothKinds) {
      ExperimentConfig cfg;
      cfg.problem = "f1";
      cfg.n = 8;
      cfg.noise_kind = kind;
      cfg.sigmas = {sigma};
      for (SolverKind s : kAllSolvers) cfg.solvers.push_back(budgeted(s, budget));
      cfg.seeds = seeds;
      cfg.seed0 = options.seed0;
      cfg.workers = options.workers;
      cfg.write_trials = false;
      const auto result = run_experiment(cfg);
      const double f_star = f1_make(cfg.n).f_star;
      PlotPanel panel;
      panel.title = (kind == NoiseKind::Additive ? "sigma_a=" : "sigma_r=") + format_double(sigma);
      const std::string cell_dir = cell_dir_name(kind, sigma);
      for (const auto& cell : result.cells) {
        Fig3Row row;
        row.noise = kind;
        row.sigma = sigma;
        row.solver = cell.solver;
        row.aborted = cell.aborted;
        double sum = 0.0;
        int count = 0;
        for (const auto& t : cell.trials) {
          if (t.aborted) continue;
          sum += t.records.back().acc;
          ++count;
        }
        row.mean_final_acc = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
        row.mean_final_f = row.mean_final_acc + f_star;
        rows.push_back(row);
        // The comparison figure draws STARS against the four non-RG baselines;
        // RG's aggregate is still written next to them.
        if (cell.solver != SolverKind::RG)
          panel.curves.push_back({to_string(cell.solver), cell_dir + "/" + to_string(cell.solver) + ".csv"});
      }
      if (!dir.empty()) {
        write_experiment(cfg, result, dir);
        panels.push_back(panel);
      }
    }
  }
  if (!dir.empty()) {
    emit_plot_script(panels, 2, dir / "fig3.py");
    CsvTable table("noise,sigma,solver,mean_final_f,mean_final_acc,aborted");
    for (const auto& r : rows)
      table.row(to_string(r.noise), r.sigma, to_string(r.solver), r.mean_final_f, r.mean_final_acc,
                r.aborted);
    table.write(dir / "summary.csv");
  }
  return rows;
}

}  // namespace stars::harness
