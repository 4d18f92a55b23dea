#pragma once

// The noisy oracle predictor: score every candidate pair with its true
// likelihood plus U(-eta, eta) noise, then rank.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lpdisc/error.hpp"
#include "lpdisc/outcome.hpp"
#include "lpdisc/random.hpp"
#include "lpdisc/synthnet.hpp"

namespace lpdisc {

/// U - E^T in canonical pair order, with each pair's true likelihood and
/// whether it is a held-out test edge. Built once per split and shared by
/// every trial on it.
struct CandidateSet {
  std::int64_t n_nodes = 0;
  std::vector<NodePair> pairs;
  std::vector<double> likelihood;
  std::vector<std::uint8_t> positive;
  std::int64_t positive_count = 0;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(pairs.size()); }
};

inline CandidateSet make_candidates(const LikelihoodModel& model, const EdgeSplit& split) {
  if (model.n_nodes() != split.n_nodes())
    throw DimensionMismatch("model has " + std::to_string(model.n_nodes()) +
                            " nodes but split has " + std::to_string(split.n_nodes()));
  CandidateSet c;
  c.n_nodes = model.n_nodes();
  const auto n_c = static_cast<std::size_t>(split.candidate_count());
  c.pairs.reserve(n_c);
  c.likelihood.reserve(n_c);
  c.positive.reserve(n_c);

  const auto& train = split.train_edges();
  const auto& test = split.test_edges();
  const auto& q = model.values();
  std::size_t ti = 0, pi = 0, idx = 0;
  for (NodeId i = 0; i < model.n_nodes(); ++i) {
    for (NodeId j = i + 1; j < model.n_nodes(); ++j, ++idx) {
      const NodePair p{i, j};
      if (ti < train.size() && train[ti] == p) {
        ++ti;
        continue;
      }
      const bool is_test = pi < test.size() && test[pi] == p;
      if (is_test) ++pi;
      c.pairs.push_back(p);
      c.likelihood.push_back(q[idx]);
      c.positive.push_back(is_test ? 1 : 0);
    }
  }
  c.positive_count = static_cast<std::int64_t>(pi);
  return c;
}

/// One score per candidate, aligned with candidates->pairs.
struct ScoredCandidates {
  std::shared_ptr<const CandidateSet> candidates;
  std::vector<double> scores;
  double noise_level = 0.0;
};

/// s_ij = q_ij + n_ij with n_ij ~ U(-eta, eta); scores are left unclamped.
inline ScoredCandidates score_candidates(std::shared_ptr<const CandidateSet> candidates,
                                         double noise_level, Stream& rng) {
  if (!(noise_level >= 0.0)) throw InvalidParameter("noise level must be non-negative");
  ScoredCandidates out;
  out.noise_level = noise_level;
  out.scores = candidates->likelihood;
  if (noise_level > 0.0) {
    std::uniform_real_distribution<double> noise(-noise_level, noise_level);
    for (auto& s : out.scores) s += noise(rng);
  }
  out.candidates = std::move(candidates);
  return out;
}

inline ScoredCandidates score_candidates(const LikelihoodModel& model, const EdgeSplit& split,
                                         double noise_level, Stream& rng) {
  return score_candidates(std::make_shared<const CandidateSet>(make_candidates(model, split)),
                          noise_level, rng);
}

/// Rank positions of positives when candidates are sorted by descending score.
/// Ties are resolved by a uniform random permutation drawn from `rng`.
template <class ScoreRange, class LabelRange>
RankedOutcome rank_by_score(const ScoreRange& scores, const LabelRange& positive, Stream& rng) {
  const auto n = static_cast<std::size_t>(std::size(scores));
  if (std::size(positive) != n) throw DimensionMismatch("scores and labels differ in length");

  struct Item {
    double score;
    std::uint32_t index;
  };
  std::vector<Item> items(n);
  for (std::size_t k = 0; k < n; ++k)
    items[k] = {static_cast<double>(scores[k]), static_cast<std::uint32_t>(k)};
  std::shuffle(items.begin(), items.end(), rng);
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.score > b.score; });

  std::vector<std::int64_t> positions;
  for (std::size_t r = 0; r < n; ++r) {
    if (positive[items[r].index]) positions.push_back(static_cast<std::int64_t>(r + 1));
  }
  return RankedOutcome(std::move(positions), static_cast<std::int64_t>(n));
}

inline RankedOutcome rank_candidates(const ScoredCandidates& scored, Stream& rng) {
  return rank_by_score(scored.scores, scored.candidates->positive, rng);
}

inline RankedOutcome rank_candidates(const ScoredCandidates& scored, const EdgeSplit& split,
                                     Stream& rng) {
  if (scored.candidates->n_nodes != split.n_nodes() ||
      scored.candidates->size() != split.candidate_count() ||
      scored.candidates->positive_count != static_cast<std::int64_t>(split.test_edges().size()))
    throw DimensionMismatch("scored candidates were not built from this split");
  return rank_candidates(scored, rng);
}

}  // namespace lpdisc
