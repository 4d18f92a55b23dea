#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "lpdisc/discrim.hpp"
#include "lpdisc/error.hpp"
#include "lpdisc/metrics.hpp"
#include "lpdisc/runner/config.hpp"
#include "lpdisc/runner/csv.hpp"
#include "lpdisc/runner/manifest.hpp"
#include "lpdisc/runner/plots.hpp"

namespace lpdisc::runner {

namespace fs = std::filesystem;

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "LPDISC_OUTPUT_DIR";

inline fs::path resolve_output_dir(const std::string& configured) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return configured;
}

inline void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("output directory " + dir.string() + " cannot be created: " + ec.message());
  const auto probe = dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

struct MatrixOutputs {
  std::vector<std::string> files;
  std::vector<std::pair<std::string, double>> areas;
};

/// pvalues_/binary_ files for each metric plus areas.csv. Returns the file
/// names written (relative to `dir`).
inline MatrixOutputs emit_matrices(const SampleTable& table, const std::vector<std::string>& metrics,
                                   double p_star, const fs::path& dir) {
  MatrixOutputs out;
  for (const auto& metric : metrics) {
    const auto p = discrimination_matrix(table, metric);
    const auto b = binarize(p, p_star);
    write_matrix(dir / ("pvalues_" + metric + ".csv"), p);
    write_matrix(dir / ("binary_" + metric + ".csv"), b);
    out.files.push_back("pvalues_" + metric + ".csv");
    out.files.push_back("binary_" + metric + ".csv");
    out.areas.emplace_back(metric, distinguishable_area(b));
  }
  CsvFile f(dir / "areas.csv");
  f.stream() << "metric,distinguishable_area\n";
  for (const auto& [metric, area] : out.areas) f.stream() << metric << ',' << format_value(area) << '\n';
  f.close();
  out.files.push_back("areas.csv");
  return out;
}

struct RunResult {
  RunManifest manifest;
  fs::path output_dir;
  SampleTable samples;
};

/// Sweep, matrices, plots and manifest for one configuration.
inline RunResult run_config(const RunConfig& cfg,
                            std::function<void(std::size_t, std::size_t)> progress = {}) {
  cfg.sweep.validate();
  const auto dir = resolve_output_dir(cfg.output_dir);
  prepare_output_dir(dir);

  RunManifest manifest;
  manifest.config = to_key_values(cfg);
  manifest.master_seed = cfg.sweep.master_seed;
  manifest.started_at = utc_timestamp();

  SweepOptions opts;
  opts.workers = cfg.resolved_workers();
  opts.progress = std::move(progress);
  auto table = sweep(cfg.sweep, opts);

  std::vector<std::string> files;
  {
    std::ofstream out(dir / "config.txt", std::ios::binary);
    out << render_config(cfg);
    if (!out) throw IoError("error while writing " + (dir / "config.txt").string());
    files.push_back("config.txt");
  }
  write_samples(dir / "samples.csv", table);
  write_summary(dir / "summary.csv", table);
  files.insert(files.end(), {"samples.csv", "summary.csv"});
  const auto matrices = emit_matrices(table, panel_metric_names(cfg.sweep.threshold_multipliers),
                                      cfg.sweep.p_star, dir);
  files.insert(files.end(), matrices.files.begin(), matrices.files.end());
  if (cfg.plots) {
    for (const auto& p : emit_plots(dir)) files.push_back(p.filename().string());
  }

  for (const auto& name : files)
    manifest.outputs.push_back({name, sha256_file(dir / name), fs::file_size(dir / name)});
  manifest.finished_at = utc_timestamp();
  write_manifest(dir / "manifest.json", manifest);
  return {std::move(manifest), dir, std::move(table)};
}

}  // namespace lpdisc::runner
