#include <fstream>
#include <sstream>

#include "stars/errors.hpp"
#include "stars/harness.hpp"

namespace stars::harness {

namespace {

// Python string literal with minimal escaping.
std::string py_str(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\\' || ch == '\'') out += '\\';
    out += ch;
  }
  return out + "'";
}

constexpr const char* kPrelude = R"(#!/usr/bin/env python3
# Generated plot script. Run from anywhere: paths are relative to this file.
import csv
import math
import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline='') as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) for r in rows] for k in (rows[0].keys() if rows else [])}


def positive(values):
    return [v if v > 0 else float('nan') for v in values]


def aggregate_panel(ax, title, curves):
    for label, name in curves:
        d = load(name)
        if not d:
            continue
        x = d['nevals']
        line, = ax.plot(x, positive(d['median']), label=label)
        ax.fill_between(x, positive(d['min']), positive(d['max']), color=line.get_color(), alpha=0.12)
        ax.fill_between(x, positive(d['q25']), positive(d['q75']), color=line.get_color(), alpha=0.3)
    ax.set_yscale('log')
    ax.set_xlabel('function evaluations')
    ax.set_ylabel('f(x_k) - f*')
    ax.set_title(title)
    ax.legend(fontsize='small')


def dimension_panel(ax, title, curves):
    for label, name in curves:
        d = load(name)
        if not d:
            continue
        ax.plot(d['n'], d['eps_pred'], 'x', label=label + ' eps_pred')
        ax.plot(d['n'], d['eps_actual'], 'o', mfc='none', label=label + ' eps_actual')
    ax.set_yscale('log')
    ax.set_xlabel('dimension n')
    ax.set_ylabel('absolute accuracy')
    ax.set_title(title)
    ax.legend(fontsize='small')

)";

}  // namespace

void emit_plot_script(std::span<const PlotPanel> panels, int columns,
                      const std::filesystem::path& path) {
  if (columns < 1) throw InvalidArgument("emit_plot_script: columns must be >= 1");
  const int count = static_cast<int>(panels.size());
  const int rows = count == 0 ? 1 : (count + columns - 1) / columns;
  const int cols = count == 0 ? 1 : std::min(columns, count);

  std::ostringstream os;
  os << kPrelude;
  os << "PANELS = [\n";
  for (const auto& p : panels) {
    os << "    (" << (p.kind == PlotPanel::Kind::Aggregate ? "aggregate_panel" : "dimension_panel")
       << ", " << py_str(p.title) << ", [";
    for (const auto& c : p.curves) os << "(" << py_str(c.label) << ", " << py_str(c.csv) << "), ";
    os << "]),\n";
  }
  os << "]\n\n";
  os << "fig, axes = plt.subplots(" << rows << ", " << cols << ", figsize=(" << 5 * cols << ", "
     << 4 * rows << "), squeeze=False)\n";
  os << "for i, (draw, title, curves) in enumerate(PANELS):\n";
  os << "    draw(axes[i // " << cols << "][i % " << cols << "], title, curves)\n";
  os << "fig.tight_layout()\n";
  os << "fig.savefig(os.path.join(HERE, " << py_str(path.stem().string() + ".png") << "), dpi=120)\n";

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << os.str();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace stars::harness
