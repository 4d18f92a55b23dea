// lpdisc: simulate noisy link predictors and compare how well evaluation
// metrics tell them apart.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpdisc/lpdisc.hpp"
#include "lpdisc/runner/config.hpp"
#include "lpdisc/runner/csv.hpp"
#include "lpdisc/runner/manifest.hpp"
#include "lpdisc/runner/plots.hpp"
#include "lpdisc/runner/run.hpp"
#include "lpdisc/runner/scores.hpp"

namespace fs = std::filesystem;
using namespace lpdisc;

namespace {

bool looks_like_manifest(const std::string& path) {
  std::ifstream in(path);
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  return c == '{';
}

runner::RunConfig load_any_config(const std::string& path) {
  if (looks_like_manifest(path))
    return runner::config_from_manifest(runner::load_manifest(path), path);
  return runner::load_config(path);
}

/// Network `network` of a configuration with its (per-network) split.
struct BuiltNetwork {
  LikelihoodModel model;
  EdgeSplit split;
};

BuiltNetwork build_network(const SweepConfig& cfg, std::uint64_t network, std::uint64_t run) {
  if (cfg.pairing != Pairing::paired)
    throw InvalidParameter("network export follows the paired layout; set pairing = paired");
  auto lik = derive_stream(cfg.master_seed, StreamTag::likelihoods, {network});
  auto model = generate_likelihoods(cfg.n_nodes, cfg.q_max, lik);
  auto real = derive_stream(cfg.master_seed, StreamTag::realization, {network});
  const auto edges = realize_graph(model, real);
  auto split_rng = cfg.split_policy == SplitPolicy::per_network
                       ? derive_stream(cfg.master_seed, StreamTag::split, {network})
                       : derive_stream(cfg.master_seed, StreamTag::split, {network, run});
  auto split = split_edges(cfg.n_nodes, edges, cfg.test_fraction, split_rng);
  return {std::move(model), std::move(split)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminating ability of link-prediction evaluation metrics"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers = 0;
  bool quiet = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a noise sweep and write all outputs");
  sweep_cmd->add_option("config", config_path, "Config file or manifest.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--workers", workers, "Worker threads (overrides the config)");
  sweep_cmd->add_flag("--quiet", quiet, "No progress output");

  std::string samples_path, matrix_out;
  double p_star = 0.01;
  std::vector<std::string> matrix_metrics;
  bool all_metrics = false;
  auto* matrix_cmd =
      app.add_subcommand("matrix", "Discrimination matrices from an existing samples.csv");
  matrix_cmd->add_option("samples", samples_path, "samples.csv")->required()->check(CLI::ExistingFile);
  matrix_cmd->add_option("--p-star", p_star, "Significance level")->required();
  matrix_cmd->add_option("--out", matrix_out, "Output directory (default: next to samples.csv)");
  matrix_cmd->add_option("--metrics", matrix_metrics, "Metrics to process")->delimiter(',');
  matrix_cmd->add_flag("--all", all_metrics, "Include bp and auc_approx");

  std::string plot_dir;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG figures from a results directory");
  plot_cmd->add_option("results", plot_dir, "Results directory")->required()->check(CLI::ExistingDirectory);

  std::string score_path;
  std::vector<double> multipliers{0.5, 1.0, 2.0};
  auto* eval_cmd = app.add_subcommand("eval-scores", "Evaluate an id,score,label CSV file");
  eval_cmd->add_option("file", score_path, "Score file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--k", multipliers, "Threshold multipliers of the positive count")
      ->delimiter(',');

  std::string export_config, export_out;
  std::uint64_t export_network = 0, export_run = 0, export_eta = 0;
  auto* export_cmd =
      app.add_subcommand("export-network", "Write one network's edge list with its split");
  export_cmd->add_option("config", export_config, "Config file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--network", export_network, "Network index");
  export_cmd->add_option("--run", export_run, "Run index (matters with split_policy = per_run)");
  export_cmd->add_option("--out", export_out, "Output file")->required();

  std::string dump_config, dump_out;
  auto* dump_cmd =
      app.add_subcommand("dump-scores", "Write the oracle's scores for one trial as a score file");
  dump_cmd->add_option("config", dump_config, "Config file")->required()->check(CLI::ExistingFile);
  dump_cmd->add_option("--network", export_network, "Network index");
  dump_cmd->add_option("--run", export_run, "Run index");
  dump_cmd->add_option("--eta-index", export_eta, "Index into noise_grid");
  dump_cmd->add_option("--out", dump_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep_cmd) {
      auto cfg = load_any_config(config_path);
      if (workers) cfg.workers = workers;
      std::function<void(std::size_t, std::size_t)> progress;
      if (!quiet) {
        progress = [](std::size_t done, std::size_t total) {
          if (done == total || done % std::max<std::size_t>(1, total / 20) == 0)
            std::cerr << "  " << done << "/" << total << " work items\n";
        };
      }
      const auto result = runner::run_config(cfg, progress);
      std::cout << "wrote " << result.manifest.outputs.size() << " files and manifest.json to "
                << result.output_dir.string() << "\n";
    } else if (*matrix_cmd) {
      const auto table = runner::read_samples(samples_path);
      fs::path out = matrix_out.empty()
                         ? runner::resolve_output_dir(fs::path(samples_path).parent_path().string())
                         : fs::path(matrix_out);
      if (out.empty()) out = ".";
      runner::prepare_output_dir(out);
      std::vector<std::string> metrics = matrix_metrics;
      if (metrics.empty()) {
        for (const auto& m : table.metric_names())
          if (all_metrics || (m != "bp" && m != "auc_approx")) metrics.push_back(m);
      }
      const auto res = runner::emit_matrices(table, metrics, p_star, out);
      for (const auto& [metric, area] : res.areas)
        std::cout << metric << "," << runner::format_value(area) << "\n";
    } else if (*plot_cmd) {
      for (const auto& f : runner::emit_plots(plot_dir)) std::cout << f.string() << "\n";
    } else if (*eval_cmd) {
      const auto set = runner::load_score_file(score_path);
      runner::write_report_csv(std::cout, runner::evaluate_scores(set, multipliers), multipliers);
    } else if (*export_cmd) {
      const auto cfg = load_any_config(export_config);
      const auto net = build_network(cfg.sweep, export_network, export_run);
      std::ofstream out(export_out, std::ios::binary);
      if (!out) throw IoError("cannot open " + export_out + " for writing");
      write_edge_list(out, net.split);
    } else if (*dump_cmd) {
      const auto cfg = load_any_config(dump_config);
      if (export_eta >= cfg.sweep.noise_grid.size())
        throw InvalidParameter("--eta-index outside the noise grid");
      const auto net = build_network(cfg.sweep, export_network, export_run);
      auto noise = derive_stream(cfg.sweep.master_seed, StreamTag::noise,
                                 {export_network, export_run, export_eta});
      const auto scored =
          score_candidates(net.model, net.split, cfg.sweep.noise_grid[export_eta], noise);
      std::ofstream out(dump_out, std::ios::binary);
      if (!out) throw IoError("cannot open " + dump_out + " for writing");
      runner::write_score_file(out, scored);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
