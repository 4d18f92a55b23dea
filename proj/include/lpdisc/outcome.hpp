#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpdisc/error.hpp"

namespace lpdisc {

/// Where the positives (test edges) landed in the descending-score candidate
/// list. This is all any of the metrics need.
class RankedOutcome {
 public:
  /// `positions` are 1-based ranks, strictly increasing, each in [1, candidate_count].
  RankedOutcome(std::vector<std::int64_t> positions, std::int64_t candidate_count)
      : positions_(std::move(positions)), candidate_count_(candidate_count) {
    if (candidate_count_ < 1) throw InvalidParameter("candidate list is empty");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      const auto r = positions_[i];
      if (r < 1 || r > candidate_count_)
        throw InvalidParameter("rank " + std::to_string(r) + " outside [1, " +
                               std::to_string(candidate_count_) + "]");
      if (i > 0 && positions_[i - 1] >= r)
        throw InvalidParameter("ranks must be strictly increasing");
    }
  }

  /// Positives occupying ranks 1..m.
  static RankedOutcome perfect(std::int64_t positive_count, std::int64_t candidate_count) {
    std::vector<std::int64_t> p(static_cast<std::size_t>(positive_count));
    for (std::int64_t i = 0; i < positive_count; ++i) p[i] = i + 1;
    return RankedOutcome(std::move(p), candidate_count);
  }

  /// Positives occupying the last m ranks.
  static RankedOutcome worst(std::int64_t positive_count, std::int64_t candidate_count) {
    std::vector<std::int64_t> p(static_cast<std::size_t>(positive_count));
    for (std::int64_t i = 0; i < positive_count; ++i)
      p[i] = candidate_count - positive_count + i + 1;
    return RankedOutcome(std::move(p), candidate_count);
  }

  std::span<const std::int64_t> positions() const noexcept { return positions_; }
  std::int64_t candidate_count() const noexcept { return candidate_count_; }
  std::int64_t positive_count() const noexcept {
    return static_cast<std::int64_t>(positions_.size());
  }
  std::int64_t negative_count() const noexcept { return candidate_count_ - positive_count(); }

  friend bool operator==(const RankedOutcome&, const RankedOutcome&) = default;

 private:
  std::vector<std::int64_t> positions_;
  std::int64_t candidate_count_;
};

}  // namespace lpdisc
