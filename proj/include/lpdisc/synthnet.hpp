#pragma once

// Synthetic networks with known pairwise link likelihoods.
//
// Nodes are 0..N-1 and every pair is stored canonically as (i, j) with i < j.
// Likelihoods live in a dense strictly-upper-triangular array laid out row by
// row, so pair (i, j) sits at i*(2N-i-1)/2 + (j-i-1).

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lpdisc/error.hpp"
#include "lpdisc/random.hpp"

namespace lpdisc {

using NodeId = std::int32_t;

struct NodePair {
  NodeId i = 0;
  NodeId j = 0;

  friend constexpr auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Sorted, duplicate-free list of canonical pairs.
using EdgeSet = std::vector<NodePair>;

constexpr std::int64_t pair_count(std::int64_t n_nodes) noexcept {
  return n_nodes * (n_nodes - 1) / 2;
}

constexpr std::int64_t pair_index(std::int64_t n_nodes, NodeId i, NodeId j) noexcept {
  return static_cast<std::int64_t>(i) * (2 * n_nodes - i - 1) / 2 + (j - i - 1);
}

/// Hidden ground truth of the generator: q_ij for every unordered pair.
class LikelihoodModel {
 public:
  LikelihoodModel(std::int64_t n_nodes, double q_max, std::vector<double> likelihoods)
      : n_nodes_(n_nodes), q_max_(q_max), q_(std::move(likelihoods)) {
    if (n_nodes < 2) throw InvalidParameter("likelihood model needs at least 2 nodes");
    if (!(q_max > 0.0 && q_max <= 1.0))
      throw InvalidParameter("q_max must lie in (0, 1], got " + std::to_string(q_max));
    if (static_cast<std::int64_t>(q_.size()) != pair_count(n_nodes))
      throw InvalidParameter("likelihood model expects N(N-1)/2 = " +
                             std::to_string(pair_count(n_nodes)) + " entries, got " +
                             std::to_string(q_.size()));
    for (double q : q_) {
      if (!(q >= 0.0 && q <= q_max))
        throw InvalidParameter("likelihood " + std::to_string(q) + " outside [0, q_max]");
    }
  }

  std::int64_t n_nodes() const noexcept { return n_nodes_; }
  double q_max() const noexcept { return q_max_; }
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(q_.size()); }

  double at(NodeId i, NodeId j) const {
    if (!(0 <= i && i < j && j < n_nodes_))
      throw InvalidParameter("pair (" + std::to_string(i) + "," + std::to_string(j) +
                             ") is not a canonical pair of this model");
    return q_[pair_index(n_nodes_, i, j)];
  }

  /// Row-major triangular storage, one entry per canonical pair.
  const std::vector<double>& values() const noexcept { return q_; }

 private:
  std::int64_t n_nodes_;
  double q_max_;
  std::vector<double> q_;
};

/// Realized edges partitioned into training and test sets.
class EdgeSplit {
 public:
  EdgeSplit(std::int64_t n_nodes, EdgeSet train, EdgeSet test)
      : n_nodes_(n_nodes), train_(std::move(train)), test_(std::move(test)) {
    auto check = [&](const EdgeSet& s, const char* what) {
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto& e = s[k];
        if (!(0 <= e.i && e.i < e.j && e.j < n_nodes_))
          throw InvalidParameter(std::string(what) + " edge out of range or not canonical");
        if (k > 0 && !(s[k - 1] < e))
          throw InvalidParameter(std::string(what) + " edges must be sorted and unique");
      }
    };
    check(train_, "train");
    check(test_, "test");
    if (test_.empty()) throw TooFewEdges("test set is empty");
    std::vector<NodePair> common;
    std::set_intersection(train_.begin(), train_.end(), test_.begin(), test_.end(),
                          std::back_inserter(common));
    if (!common.empty()) throw InvalidParameter("train and test edges overlap");
  }

  std::int64_t n_nodes() const noexcept { return n_nodes_; }
  const EdgeSet& train_edges() const noexcept { return train_; }
  const EdgeSet& test_edges() const noexcept { return test_; }

  /// |U - E^T|: every pair the predictor has to score.
  std::int64_t candidate_count() const noexcept {
    return pair_count(n_nodes_) - static_cast<std::int64_t>(train_.size());
  }

 private:
  std::int64_t n_nodes_;
  EdgeSet train_;
  EdgeSet test_;
};

/// q_ij ~ U(0, q_max) i.i.d. for every pair.
inline LikelihoodModel generate_likelihoods(std::int64_t n_nodes, double q_max, Stream& rng) {
  if (n_nodes < 3)
    throw InvalidParameter("n_nodes must be at least 3, got " + std::to_string(n_nodes));
  if (!(q_max > 0.0 && q_max <= 1.0))
    throw InvalidParameter("q_max must lie in (0, 1], got " + std::to_string(q_max));
  std::uniform_real_distribution<double> uniform(0.0, q_max);
  std::vector<double> q(static_cast<std::size_t>(pair_count(n_nodes)));
  for (auto& v : q) v = uniform(rng);
  return LikelihoodModel(n_nodes, q_max, std::move(q));
}

/// Each pair becomes an edge independently with probability q_ij.
inline EdgeSet realize_graph(const LikelihoodModel& model, Stream& rng) {
  EdgeSet edges;
  const auto n = model.n_nodes();
  const auto& q = model.values();
  std::size_t idx = 0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j, ++idx) {
      if (std::bernoulli_distribution(q[idx])(rng)) edges.push_back({i, j});
    }
  }
  return edges;
}

/// Number of test edges for a given split fraction. Ties at .5 round to even.
inline std::int64_t test_edge_count(std::int64_t n_edges, double test_fraction) {
  return static_cast<std::int64_t>(std::nearbyint(test_fraction * static_cast<double>(n_edges)));
}

/// Uniformly random test subset of size round(test_fraction * |E|).
inline EdgeSplit split_edges(std::int64_t n_nodes, const EdgeSet& edges, double test_fraction,
                             Stream& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw InvalidParameter("test_fraction must lie in (0, 1), got " +
                           std::to_string(test_fraction));
  const auto n_edges = static_cast<std::int64_t>(edges.size());
  const auto n_test = test_edge_count(n_edges, test_fraction);
  if (n_edges < 2 || n_test < 1 || n_test >= n_edges)
    throw TooFewEdges("cannot split " + std::to_string(n_edges) + " edges with test fraction " +
                      std::to_string(test_fraction) + ": test set would have " +
                      std::to_string(n_test) + " edges and training set " +
                      std::to_string(n_edges - n_test));

  EdgeSet shuffled = edges;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EdgeSet test(shuffled.begin(), shuffled.begin() + n_test);
  EdgeSet train(shuffled.begin() + n_test, shuffled.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return EdgeSplit(n_nodes, std::move(train), std::move(test));
}

/// Plain-text edge list: "i j train|test" per line, sorted by (i, j).
inline void write_edge_list(std::ostream& out, const EdgeSplit& split) {
  const auto& train = split.train_edges();
  const auto& test = split.test_edges();
  std::size_t a = 0, b = 0;
  while (a < train.size() || b < test.size()) {
    const bool take_train = b == test.size() || (a < train.size() && train[a] < test[b]);
    const auto& e = take_train ? train[a++] : test[b++];
    out << e.i << ' ' << e.j << ' ' << (take_train ? "train" : "test") << '\n';
  }
}

}  // namespace lpdisc
