#pragma once

// Noise sweeps over the oracle predictor and the p-value discrimination
// matrices built from them.
//
// For eta_1 < eta_2 and X paired comparisons, p(eta_1, eta_2) = x / X where x
// counts comparisons in which the metric fails to prefer the less noisy
// predictor, i.e. M(eta_1) <= M(eta_2). The matrix is mirrored across the
// diagonal and its diagonal is fixed at 0.5.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpdisc/error.hpp"
#include "lpdisc/metrics.hpp"
#include "lpdisc/oracle.hpp"
#include "lpdisc/parallel.hpp"
#include "lpdisc/random.hpp"
#include "lpdisc/synthnet.hpp"

namespace lpdisc {

/// How samples at different noise levels are matched for comparison.
enum class Pairing {
  /// Same network, split and run index for every eta; only the noise differs.
  paired,
  /// Every eta gets its own independently generated networks.
  unpaired,
};

enum class SplitPolicy {
  /// One train/test split per network, reused by all runs.
  per_network,
  /// A fresh split for every run.
  per_run,
};

inline std::vector<double> default_noise_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

struct SweepConfig {
  std::int64_t n_nodes = 1000;
  double q_max = 0.5;
  double test_fraction = 0.1;
  std::vector<double> noise_grid = default_noise_grid();
  std::int64_t n_networks = 10;
  std::int64_t runs_per_network = 100;
  std::vector<double> threshold_multipliers{0.5, 1.0, 2.0};
  double p_star = 0.01;
  std::uint64_t master_seed = 1;
  Pairing pairing = Pairing::paired;
  SplitPolicy split_policy = SplitPolicy::per_network;

  void validate() const {
    if (n_nodes < 3) throw InvalidParameter("n_nodes must be at least 3");
    if (!(q_max > 0.0 && q_max <= 1.0)) throw InvalidParameter("q_max must lie in (0, 1]");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
      throw InvalidParameter("test_fraction must lie in (0, 1)");
    if (noise_grid.empty()) throw InvalidParameter("noise_grid is empty");
    for (std::size_t i = 0; i < noise_grid.size(); ++i) {
      if (!(noise_grid[i] >= 0.0) || !std::isfinite(noise_grid[i]))
        throw InvalidParameter("noise levels must be finite and non-negative");
      if (i > 0 && !(noise_grid[i - 1] < noise_grid[i]))
        throw InvalidParameter("noise_grid must be strictly ascending");
    }
    if (n_networks < 1) throw InvalidParameter("n_networks must be at least 1");
    if (runs_per_network < 1) throw InvalidParameter("runs_per_network must be at least 1");
    if (threshold_multipliers.empty())
      throw InvalidParameter("threshold_multipliers is empty");
    for (double m : threshold_multipliers)
      if (!(m > 0.0) || !std::isfinite(m))
        throw InvalidParameter("threshold multipliers must be positive");
    if (!(p_star > 0.0 && p_star < 1.0)) throw InvalidParameter("p_star must lie in (0, 1)");
  }
};

/// Metric samples indexed by (metric, eta, network, run). Within one metric
/// and eta the X = n_networks * runs_per_network samples are stored at
/// network * runs_per_network + run, so the same index means the same
/// (network, run) at every eta.
class SampleTable {
 public:
  SampleTable(std::vector<std::string> metric_names, std::vector<double> noise_grid,
              std::int64_t n_networks, std::int64_t runs_per_network)
      : metrics_(std::move(metric_names)),
        grid_(std::move(noise_grid)),
        n_networks_(n_networks),
        runs_(runs_per_network),
        data_(metrics_.size() * grid_.size() * static_cast<std::size_t>(n_networks * runs_per_network),
              0.0) {
    if (n_networks < 1 || runs_per_network < 1)
      throw InvalidParameter("sample table needs at least one network and one run");
  }

  const std::vector<std::string>& metric_names() const noexcept { return metrics_; }
  const std::vector<double>& noise_grid() const noexcept { return grid_; }
  std::int64_t n_networks() const noexcept { return n_networks_; }
  std::int64_t runs_per_network() const noexcept { return runs_; }
  std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(n_networks_ * runs_);
  }

  std::size_t metric_index(const std::string& name) const {
    auto it = std::find(metrics_.begin(), metrics_.end(), name);
    if (it == metrics_.end()) throw UnknownMetric("unknown metric '" + name + "'");
    return static_cast<std::size_t>(it - metrics_.begin());
  }

  std::span<const double> values(std::size_t metric, std::size_t eta) const {
    return {data_.data() + offset(metric, eta), sample_count()};
  }
  std::span<double> values(std::size_t metric, std::size_t eta) {
    return {data_.data() + offset(metric, eta), sample_count()};
  }
  std::span<const double> values(const std::string& metric, std::size_t eta) const {
    return values(metric_index(metric), eta);
  }

  double& at(std::size_t metric, std::size_t eta, std::int64_t network, std::int64_t run) {
    return data_[offset(metric, eta) + static_cast<std::size_t>(network * runs_ + run)];
  }
  double at(std::size_t metric, std::size_t eta, std::int64_t network, std::int64_t run) const {
    return data_[offset(metric, eta) + static_cast<std::size_t>(network * runs_ + run)];
  }

  friend bool operator==(const SampleTable&, const SampleTable&) = default;

 private:
  std::size_t offset(std::size_t metric, std::size_t eta) const {
    if (metric >= metrics_.size() || eta >= grid_.size())
      throw InvalidParameter("sample table index out of range");
    return (metric * grid_.size() + eta) * sample_count();
  }

  std::vector<std::string> metrics_;
  std::vector<double> grid_;
  std::int64_t n_networks_;
  std::int64_t runs_;
  std::vector<double> data_;
};

/// Square matrix over a noise grid, row-major.
template <class T>
struct NoiseMatrix {
  std::vector<double> noise_grid;
  std::vector<T> entries;

  std::size_t size() const noexcept { return noise_grid.size(); }
  T at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
};

struct DiscriminationMatrix : NoiseMatrix<double> {};

struct BinaryDiscriminationMatrix : NoiseMatrix<std::uint8_t> {
  double p_star = 0.0;
};

// ---------------------------------------------------------------------------
// Trials

/// Score, rank and evaluate one trial of the noisy oracle.
inline MetricReport run_trial(std::shared_ptr<const CandidateSet> candidates, double noise_level,
                              std::span<const double> multipliers, Stream& noise_rng,
                              Stream& tie_rng) {
  const auto scored = score_candidates(std::move(candidates), noise_level, noise_rng);
  return compute_report(rank_candidates(scored, tie_rng), multipliers);
}

inline MetricReport run_trial(const LikelihoodModel& model, const EdgeSplit& split,
                              double noise_level, std::span<const double> multipliers,
                              Stream& noise_rng, Stream& tie_rng) {
  return run_trial(std::make_shared<const CandidateSet>(make_candidates(model, split)),
                   noise_level, multipliers, noise_rng, tie_rng);
}

struct SweepOptions {
  unsigned workers = default_worker_count();
  /// Called after each finished work item with (done, total); may be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

namespace detail {

struct Network {
  std::optional<LikelihoodModel> model;
  EdgeSet edges;
  std::shared_ptr<const CandidateSet> fixed_candidates;
};

/// `coords` identifies the network: {n} when paired, {n, eta} when unpaired.
inline Network build_network(const SweepConfig& cfg, std::initializer_list<std::uint64_t> coords) {
  Network net;
  auto lik_rng = derive_stream(cfg.master_seed, StreamTag::likelihoods, coords);
  net.model.emplace(generate_likelihoods(cfg.n_nodes, cfg.q_max, lik_rng));
  auto real_rng = derive_stream(cfg.master_seed, StreamTag::realization, coords);
  net.edges = realize_graph(*net.model, real_rng);
  if (cfg.split_policy == SplitPolicy::per_network) {
    auto split_rng = derive_stream(cfg.master_seed, StreamTag::split, coords);
    const auto split = split_edges(cfg.n_nodes, net.edges, cfg.test_fraction, split_rng);
    net.fixed_candidates = std::make_shared<const CandidateSet>(make_candidates(*net.model, split));
  }
  return net;
}

inline std::shared_ptr<const CandidateSet> candidates_for_run(
    const SweepConfig& cfg, const Network& net, std::initializer_list<std::uint64_t> coords) {
  if (net.fixed_candidates) return net.fixed_candidates;
  auto split_rng = derive_stream(cfg.master_seed, StreamTag::split, coords);
  const auto split = split_edges(cfg.n_nodes, net.edges, cfg.test_fraction, split_rng);
  return std::make_shared<const CandidateSet>(make_candidates(*net.model, split));
}

inline void store(SampleTable& table, std::size_t eta, std::int64_t network, std::int64_t run,
                  const MetricReport& rep) {
  const auto v = rep.values();
  for (std::size_t m = 0; m < v.size(); ++m) table.at(m, eta, network, run) = v[m];
}

}  // namespace detail

/// Run every (network, run, eta) trial of the configuration. Each trial draws
/// from streams keyed by its coordinates, so the table does not depend on
/// the number of workers or on scheduling.
inline SampleTable sweep(const SweepConfig& cfg, const SweepOptions& opts = {}) {
  cfg.validate();
  SampleTable table(metric_names(cfg.threshold_multipliers), cfg.noise_grid, cfg.n_networks,
                    cfg.runs_per_network);
  const auto n_eta = cfg.noise_grid.size();
  const auto runs = cfg.runs_per_network;
  const std::span<const double> mults = cfg.threshold_multipliers;

  auto with_context = [](std::int64_t network, auto&& fn) {
    try {
      fn();
    } catch (const TooFewEdges& e) {
      throw TooFewEdges("network " + std::to_string(network) + ": " + e.what());
    }
  };

  auto trial = [&](std::size_t e, std::uint64_t n, std::uint64_t t,
                   std::shared_ptr<const CandidateSet> cands) {
    auto noise_rng = derive_stream(cfg.master_seed, StreamTag::noise, {n, t, e});
    auto tie_rng = derive_stream(cfg.master_seed, StreamTag::ties, {n, t, e});
    return run_trial(std::move(cands), cfg.noise_grid[e], mults, noise_rng, tie_rng);
  };

  if (cfg.pairing == Pairing::paired) {
    std::vector<detail::Network> networks(static_cast<std::size_t>(cfg.n_networks));
    parallel_for(networks.size(), opts.workers, [&](std::size_t n) {
      with_context(static_cast<std::int64_t>(n),
                   [&] { networks[n] = detail::build_network(cfg, {n}); });
    });

    const auto items = static_cast<std::size_t>(cfg.n_networks * runs);
    std::atomic<std::size_t> done{0};
    parallel_for(items, opts.workers, [&](std::size_t item) {
      const auto n = item / static_cast<std::size_t>(runs);
      const auto t = item % static_cast<std::size_t>(runs);
      with_context(static_cast<std::int64_t>(n), [&] {
        const auto cands = detail::candidates_for_run(cfg, networks[n], {n, t});
        for (std::size_t e = 0; e < n_eta; ++e)
          detail::store(table, e, static_cast<std::int64_t>(n), static_cast<std::int64_t>(t),
                        trial(e, n, t, cands));
      });
      if (opts.progress) opts.progress(++done, items);
    });
  } else {
    const auto items = static_cast<std::size_t>(cfg.n_networks) * n_eta;
    std::atomic<std::size_t> done{0};
    parallel_for(items, opts.workers, [&](std::size_t item) {
      const auto n = item / n_eta;
      const auto e = item % n_eta;
      with_context(static_cast<std::int64_t>(n), [&] {
        const auto net = detail::build_network(cfg, {n, e});
        for (std::int64_t t = 0; t < runs; ++t) {
          const auto cands =
              detail::candidates_for_run(cfg, net, {n, static_cast<std::uint64_t>(t), e});
          detail::store(table, e, static_cast<std::int64_t>(n), t,
                        trial(e, n, static_cast<std::uint64_t>(t), cands));
        }
      });
      if (opts.progress) opts.progress(++done, items);
    });
  }
  return table;
}

// ---------------------------------------------------------------------------
// Discrimination matrices

/// samples[e] holds the X paired metric values at noise_grid[e].
inline DiscriminationMatrix discrimination_matrix(std::span<const double> noise_grid,
                                                  std::span<const std::span<const double>> samples) {
  const auto g = noise_grid.size();
  if (samples.size() != g) throw DimensionMismatch("one sample list per noise level expected");
  if (g == 0) throw InvalidParameter("empty noise grid");
  const auto X = samples[0].size();
  if (X == 0) throw InvalidParameter("no samples to compare");
  for (const auto& s : samples)
    if (s.size() != X) throw DimensionMismatch("sample lists differ in length");

  DiscriminationMatrix dm;
  dm.noise_grid.assign(noise_grid.begin(), noise_grid.end());
  dm.entries.assign(g * g, 0.5);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = a + 1; b < g; ++b) {
      // noise_grid is ascending, so a is the less noisy level.
      std::size_t failures = 0;
      for (std::size_t s = 0; s < X; ++s)
        if (samples[a][s] <= samples[b][s]) ++failures;
      const double p = static_cast<double>(failures) / static_cast<double>(X);
      dm.entries[a * g + b] = p;
      dm.entries[b * g + a] = p;
    }
  }
  return dm;
}

inline DiscriminationMatrix discrimination_matrix(const SampleTable& table,
                                                  const std::string& metric) {
  const auto idx = table.metric_index(metric);
  std::vector<std::span<const double>> samples;
  for (std::size_t e = 0; e < table.noise_grid().size(); ++e)
    samples.push_back(table.values(idx, e));
  return discrimination_matrix(table.noise_grid(), samples);
}

/// distinguishable[i][j] = p(i, j) < p_star.
inline BinaryDiscriminationMatrix binarize(const DiscriminationMatrix& m, double p_star) {
  if (!(p_star > 0.0 && p_star < 1.0)) throw InvalidParameter("p_star must lie in (0, 1)");
  BinaryDiscriminationMatrix b;
  b.noise_grid = m.noise_grid;
  b.p_star = p_star;
  b.entries.resize(m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) b.entries[i] = m.entries[i] < p_star ? 1 : 0;
  return b;
}

/// Fraction of off-diagonal cells marked distinguishable; 0 for a 1x1 grid.
inline double distinguishable_area(const BinaryDiscriminationMatrix& b) {
  const auto g = b.size();
  if (g < 2) return 0.0;
  std::size_t on = 0;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j)
      if (i != j && b.at(i, j)) ++on;
  return static_cast<double>(on) / static_cast<double>(g * (g - 1));
}

}  // namespace lpdisc
