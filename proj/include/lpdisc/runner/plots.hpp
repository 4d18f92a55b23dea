#pragma once

// SVG figures rendered from a results directory's CSV files only:
//
//   fig_metric_vs_noise.svg  per-run values (gray), mean +- sd (red) against eta
//   fig_run_traces.svg       per-run values against run index at five eta levels
//   fig_binary_matrices.svg  binarized discrimination matrices
//
// Data-bearing elements carry class/data-* attributes so tests can read the
// plotted values back.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lpdisc/discrim.hpp"
#include "lpdisc/error.hpp"
#include "lpdisc/runner/csv.hpp"

namespace lpdisc::runner {

/// Noise levels drawn in the run-trace figure.
inline const std::vector<double>& trace_noise_levels() {
  static const std::vector<double> levels{0.1, 0.3, 0.5, 0.7, 0.9};
  return levels;
}

/// At most this many gray per-run points per (metric, eta) in the
/// metric-vs-noise figure; the first ones by sample index are drawn.
inline constexpr std::size_t kMaxScatterPoints = 200;

namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Box {
  double x, y, w, h;
};

/// Linear map from data range to a panel's plotting box (y grows upward).
struct Axes {
  Box box;
  double x0, x1, y0, y1;

  double px(double x) const { return box.x + (x - x0) / (x1 - x0) * box.w; }
  double py(double y) const { return box.y + box.h - (y - y0) / (y1 - y0) * box.h; }
};

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  std::ostringstream& body() { return body_; }

  void text(double x, double y, const std::string& s, int size = 11,
            const char* anchor = "middle") {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
          << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\">" << s
          << "</text>\n";
  }

  void frame(const Axes& a) {
    body_ << "<rect x=\"" << num(a.box.x) << "\" y=\"" << num(a.box.y) << "\" width=\""
          << num(a.box.w) << "\" height=\"" << num(a.box.h)
          << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
    text(a.box.x, a.box.y + a.box.h + 12, num(a.x0), 9, "start");
    text(a.box.x + a.box.w, a.box.y + a.box.h + 12, num(a.x1), 9, "end");
    text(a.box.x - 3, a.box.y + a.box.h, num(a.y0), 9, "end");
    text(a.box.x - 3, a.box.y + 8, num(a.y1), 9, "end");
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\""
        << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    if (!out) throw IoError("error while writing " + path.string());
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

struct Grid {
  std::size_t columns = 4;
  double panel_w = 230, panel_h = 190, margin_l = 45, margin_t = 25, margin_r = 12,
         margin_b = 30;

  double width() const { return columns * panel_w; }
  double height(std::size_t panels) const {
    return ((panels + columns - 1) / columns) * panel_h;
  }
  Box box(std::size_t index) const {
    const double x = static_cast<double>(index % columns) * panel_w;
    const double y = static_cast<double>(index / columns) * panel_h;
    return {x + margin_l, y + margin_t, panel_w - margin_l - margin_r,
            panel_h - margin_t - margin_b};
  }
};

inline std::pair<double, double> padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace svg

struct PlotInputs {
  SampleTable samples;
  std::vector<SummaryRow> summary;
  std::vector<std::string> panel_metrics;
  std::map<std::string, BinaryDiscriminationMatrix> binary;
};

/// Panels are the metrics with a binary matrix on disk, in samples.csv order.
inline PlotInputs load_plot_inputs(const std::filesystem::path& dir) {
  PlotInputs in{read_samples(dir / "samples.csv"), read_summary(dir / "summary.csv"), {}, {}};
  for (const auto& name : in.samples.metric_names()) {
    const auto path = dir / ("binary_" + name + ".csv");
    if (std::filesystem::exists(path)) {
      in.panel_metrics.push_back(name);
      in.binary.emplace(name, read_binary_matrix(path));
    }
  }
  if (in.panel_metrics.empty())
    throw IoError("no binary_<metric>.csv files found in " + dir.string());
  return in;
}

inline void plot_metric_vs_noise(const PlotInputs& in, const std::filesystem::path& path) {
  const svg::Grid grid;
  svg::Document doc(grid.width(), grid.height(in.panel_metrics.size()));
  const auto& etas = in.samples.noise_grid();
  for (std::size_t p = 0; p < in.panel_metrics.size(); ++p) {
    const auto& metric = in.panel_metrics[p];
    const auto mi = in.samples.metric_index(metric);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t e = 0; e < etas.size(); ++e)
      for (double v : in.samples.values(mi, e)) lo = std::min(lo, v), hi = std::max(hi, v);
    const auto [y0, y1] = svg::padded_range(lo, hi);
    const auto [x0, x1] = svg::padded_range(etas.front(), etas.back());
    const svg::Axes ax{grid.box(p), x0, x1, y0, y1};
    doc.frame(ax);
    doc.text(ax.box.x + ax.box.w / 2, ax.box.y - 8, metric, 12);

    auto& b = doc.body();
    for (std::size_t e = 0; e < etas.size(); ++e) {
      const auto v = in.samples.values(mi, e);
      const auto shown = std::min(v.size(), kMaxScatterPoints);
      for (std::size_t s = 0; s < shown; ++s)
        b << "<circle class=\"run\" cx=\"" << svg::num(ax.px(etas[e])) << "\" cy=\""
          << svg::num(ax.py(v[s])) << "\" r=\"1.2\" fill=\"#999999\" fill-opacity=\"0.5\"/>\n";
    }
    for (const auto& row : in.summary) {
      if (row.metric != metric) continue;
      const double cx = ax.px(row.eta);
      b << "<line class=\"errbar\" data-metric=\"" << metric << "\" data-eta=\""
        << format_value(row.eta) << "\" data-half=\"" << format_value(row.sd) << "\" x1=\""
        << svg::num(cx) << "\" x2=\"" << svg::num(cx) << "\" y1=\""
        << svg::num(ax.py(row.mean - row.sd)) << "\" y2=\"" << svg::num(ax.py(row.mean + row.sd))
        << "\" stroke=\"#cc0000\" stroke-width=\"1.2\"/>\n";
      b << "<circle class=\"mean\" cx=\"" << svg::num(cx) << "\" cy=\"" << svg::num(ax.py(row.mean))
        << "\" r=\"2.5\" fill=\"#cc0000\"/>\n";
    }
  }
  doc.save(path);
}

inline void plot_run_traces(const PlotInputs& in, const std::filesystem::path& path) {
  static const char* colors[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#d62728", "#9467bd"};
  const auto& etas = in.samples.noise_grid();
  std::vector<std::size_t> chosen;
  for (double level : trace_noise_levels()) {
    for (std::size_t e = 0; e < etas.size(); ++e)
      if (std::abs(etas[e] - level) < 1e-9) chosen.push_back(e);
  }

  const svg::Grid grid;
  svg::Document doc(grid.width(), grid.height(in.panel_metrics.size()));
  const auto X = in.samples.sample_count();
  for (std::size_t p = 0; p < in.panel_metrics.size(); ++p) {
    const auto& metric = in.panel_metrics[p];
    const auto mi = in.samples.metric_index(metric);
    double lo = INFINITY, hi = -INFINITY;
    for (auto e : chosen)
      for (double v : in.samples.values(mi, e)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (chosen.empty()) lo = 0, hi = 1;
    const auto [y0, y1] = svg::padded_range(lo, hi);
    const svg::Axes ax{grid.box(p), 0.0, static_cast<double>(std::max<std::size_t>(X, 2) - 1),
                       y0, y1};
    doc.frame(ax);
    doc.text(ax.box.x + ax.box.w / 2, ax.box.y - 8, metric, 12);
    auto& b = doc.body();
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      const auto e = chosen[c];
      const auto v = in.samples.values(mi, e);
      b << "<polyline class=\"trace\" data-eta=\"" << format_value(etas[e])
        << "\" fill=\"none\" stroke=\"" << colors[c % 5] << "\" stroke-width=\"0.7\" points=\"";
      for (std::size_t s = 0; s < v.size(); ++s)
        b << (s ? " " : "") << svg::num(ax.px(static_cast<double>(s))) << ','
          << svg::num(ax.py(v[s]));
      b << "\"/>\n";
    }
  }
  doc.save(path);
}

inline void plot_binary_matrices(const PlotInputs& in, const std::filesystem::path& path) {
  const svg::Grid grid;
  svg::Document doc(grid.width(), grid.height(in.panel_metrics.size()));
  for (std::size_t p = 0; p < in.panel_metrics.size(); ++p) {
    const auto& metric = in.panel_metrics[p];
    const auto& m = in.binary.at(metric);
    const auto g = m.size();
    auto box = grid.box(p);
    const double side = std::min(box.w, box.h);
    box.w = box.h = side;
    const double cell = side / static_cast<double>(g);
    doc.text(box.x + side / 2, box.y - 8, metric, 12);
    auto& b = doc.body();
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        if (!m.at(i, j)) continue;
        // Row i (eta_i) is drawn from the bottom up, column j left to right.
        b << "<rect class=\"cell-on\" data-i=\"" << i << "\" data-j=\"" << j << "\" x=\""
          << svg::num(box.x + static_cast<double>(j) * cell) << "\" y=\""
          << svg::num(box.y + side - static_cast<double>(i + 1) * cell) << "\" width=\""
          << svg::num(cell) << "\" height=\"" << svg::num(cell) << "\" fill=\"#3b6fb6\"/>\n";
      }
    }
    const svg::Axes ax{box, m.noise_grid.front(), m.noise_grid.back(), m.noise_grid.front(),
                       m.noise_grid.back()};
    doc.frame(ax);
  }
  doc.save(path);
}

inline std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir) {
  const auto in = load_plot_inputs(dir);
  std::vector<std::filesystem::path> files{dir / "fig_metric_vs_noise.svg",
                                           dir / "fig_run_traces.svg",
                                           dir / "fig_binary_matrices.svg"};
  plot_metric_vs_noise(in, files[0]);
  plot_run_traces(in, files[1]);
  plot_binary_matrices(in, files[2]);
  return files;
}

}  // namespace lpdisc::runner
