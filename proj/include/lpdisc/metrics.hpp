#pragma once

// Link-prediction evaluation metrics computed exactly from a RankedOutcome.
//
// Notation used below: m positives at ranks r_1 < ... < r_m in a list of n_c
// candidates, n_neg = n_c - m negatives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpdisc/error.hpp"
#include "lpdisc/outcome.hpp"

namespace lpdisc {

struct ConfusionAtK {
  std::int64_t k = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  friend bool operator==(const ConfusionAtK&, const ConfusionAtK&) = default;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct ThresholdScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
};

namespace detail {

inline void require_positive(const RankedOutcome& o, const char* metric) {
  if (o.positive_count() < 1)
    throw DegenerateClasses(std::string(metric) + " needs at least one positive");
}

inline void require_both_classes(const RankedOutcome& o, const char* metric) {
  require_positive(o, metric);
  if (o.negative_count() < 1)
    throw DegenerateClasses(std::string(metric) + " needs at least one negative");
}

}  // namespace detail

/// Counts with the top-k candidates predicted positive.
inline ConfusionAtK confusion_at_k(const RankedOutcome& o, std::int64_t k) {
  const auto n_c = o.candidate_count();
  if (k < 1 || k > n_c)
    throw InvalidParameter("threshold k=" + std::to_string(k) + " outside [1, " +
                           std::to_string(n_c) + "]");
  const auto pos = o.positions();
  const auto tp = static_cast<std::int64_t>(std::upper_bound(pos.begin(), pos.end(), k) -
                                            pos.begin());
  ConfusionAtK c;
  c.k = k;
  c.tp = tp;
  c.fp = k - tp;
  c.fn = o.positive_count() - tp;
  c.tn = n_c - k - c.fn;
  return c;
}

/// Precision, recall, F1 and MCC of one confusion matrix. F1 is 0 when
/// tp = 0; MCC is 0 when any factor of its denominator is 0.
inline ThresholdScores precision_recall_f1_mcc(const ConfusionAtK& c) {
  ThresholdScores s;
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);
  s.precision = c.k > 0 ? tp / static_cast<double>(c.k) : 0.0;
  s.recall = (c.tp + c.fn) > 0 ? tp / (tp + fn) : 0.0;
  s.f1 = c.tp > 0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  s.mcc = denom > 0.0 ? (tp * tn - fp * fn) / std::sqrt(denom) : 0.0;
  return s;
}

/// Precision at k = m, where the precision and recall curves cross.
inline double balanced_precision(const RankedOutcome& o) {
  detail::require_positive(o, "balanced precision");
  const auto m = o.positive_count();
  return static_cast<double>(confusion_at_k(o, m).tp) / static_cast<double>(m);
}

/// Mean over positives of the fraction of negatives ranked below it.
inline double auc_exact(const RankedOutcome& o) {
  detail::require_both_classes(o, "AUC");
  const auto pos = o.positions();
  const double n_neg = static_cast<double>(o.negative_count());
  double sum = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const auto negatives_above = pos[i] - static_cast<std::int64_t>(i + 1);
    sum += 1.0 - static_cast<double>(negatives_above) / n_neg;
  }
  return sum / static_cast<double>(pos.size());
}

/// Ranking-score approximation 1 - <r>/n_c; close to auc_exact only when
/// m is negligible against n_c.
inline double auc_approx(const RankedOutcome& o) {
  detail::require_positive(o, "approximate AUC");
  double sum = 0.0;
  for (auto r : o.positions()) sum += static_cast<double>(r);
  const double mean_rank = sum / static_cast<double>(o.positive_count());
  return 1.0 - mean_rank / static_cast<double>(o.candidate_count());
}

/// Closed-form PR area: (1/2m) (sum i/r_i + sum i/(r_{i+1}-1)) with
/// r_{m+1} = n_c + 1. A perfect ranking scores 1 - 1/(2m) + 1/(2n_c), not 1.
inline double aupr(const RankedOutcome& o) {
  detail::require_positive(o, "AUPR");
  const auto pos = o.positions();
  const auto m = pos.size();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < m; ++idx) {
    const double i = static_cast<double>(idx + 1);
    const auto next = idx + 1 < m ? pos[idx + 1] : o.candidate_count() + 1;
    sum += i / static_cast<double>(pos[idx]);
    sum += i / static_cast<double>(next - 1);
  }
  return sum / (2.0 * static_cast<double>(m));
}

inline double dcg(std::span<const std::int64_t> positions) {
  double sum = 0.0;
  for (auto r : positions) sum += 1.0 / std::log2(1.0 + static_cast<double>(r));
  return sum;
}

inline double ndcg(const RankedOutcome& o) {
  detail::require_positive(o, "NDCG");
  double ideal = 0.0;
  for (std::int64_t r = 1; r <= o.positive_count(); ++r)
    ideal += 1.0 / std::log2(1.0 + static_cast<double>(r));
  return dcg(o.positions()) / ideal;
}

/// ROC staircase with n_c + 1 points from (0,0) to (1,1).
inline std::vector<CurvePoint> roc_curve(const RankedOutcome& o) {
  detail::require_both_classes(o, "ROC curve");
  const double m = static_cast<double>(o.positive_count());
  const double n_neg = static_cast<double>(o.negative_count());
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(o.candidate_count()) + 1);
  curve.push_back({0.0, 0.0});
  const auto pos = o.positions();
  std::size_t next = 0;
  std::int64_t tp = 0, fp = 0;
  for (std::int64_t r = 1; r <= o.candidate_count(); ++r) {
    if (next < pos.size() && pos[next] == r) {
      ++tp;
      ++next;
    } else {
      ++fp;
    }
    curve.push_back({static_cast<double>(fp) / n_neg, static_cast<double>(tp) / m});
  }
  return curve;
}

/// (recall@k, precision@k) for k = 1..n_c.
inline std::vector<CurvePoint> pr_curve(const RankedOutcome& o) {
  detail::require_positive(o, "PR curve");
  const double m = static_cast<double>(o.positive_count());
  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(o.candidate_count()));
  const auto pos = o.positions();
  std::size_t next = 0;
  std::int64_t tp = 0;
  for (std::int64_t k = 1; k <= o.candidate_count(); ++k) {
    if (next < pos.size() && pos[next] == k) {
      ++tp;
      ++next;
    }
    curve.push_back({static_cast<double>(tp) / m,
                     static_cast<double>(tp) / static_cast<double>(k)});
  }
  return curve;
}

/// Area under the ROC curve after mapping FP -> log_{1+n_neg}(1+FP) and
/// TP -> log_{1+m}(1+TP). The transformed curve is still a staircase, so the
/// area is exact: mTPR is constant between consecutive positives and the
/// mFPR increments over that stretch telescope.
inline double auc_mroc(const RankedOutcome& o) {
  detail::require_both_classes(o, "AUC-mROC");
  const auto pos = o.positions();
  const auto m = o.positive_count();
  const auto n_neg = o.negative_count();
  const double log_m = std::log1p(static_cast<double>(m));
  const double log_neg = std::log1p(static_cast<double>(n_neg));
  auto mfpr = [&](std::int64_t fp) { return std::log1p(static_cast<double>(fp)) / log_neg; };

  double area = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) {
    // After the i-th positive, negatives seen so far = r_i - i; the stretch
    // ends just before the next positive (or the end of the list).
    const auto fp_start = pos[i - 1] - i;
    const auto fp_end = i < m ? pos[i] - (i + 1) : n_neg;
    if (fp_end == fp_start) continue;
    const double mtpr = std::log1p(static_cast<double>(i)) / log_m;
    area += mtpr * (mfpr(fp_end) - mfpr(fp_start));
  }
  return area;
}

// ---------------------------------------------------------------------------
// Aggregate report

/// k for a threshold given as a multiple of m: floor(multiplier * m), at least 1.
inline std::int64_t threshold_from_multiplier(double multiplier, std::int64_t positive_count) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier))
    throw InvalidParameter("threshold multiplier must be positive");
  const auto k = static_cast<std::int64_t>(
      std::floor(multiplier * static_cast<double>(positive_count) + 1e-9));
  return std::max<std::int64_t>(1, k);
}

/// Compact rendering of a multiplier for metric names ("0.5", "1", "2").
inline std::string format_multiplier(double multiplier) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", multiplier);
  return buf;
}

inline const std::vector<std::string>& threshold_metric_kinds() {
  static const std::vector<std::string> kinds{"precision", "recall", "f1", "mcc"};
  return kinds;
}

inline std::string threshold_metric_name(const std::string& kind, double multiplier) {
  return kind + "_k" + format_multiplier(multiplier);
}

struct ThresholdEntry {
  double multiplier = 0.0;
  std::int64_t k = 0;
  ThresholdScores scores;
};

struct MetricReport {
  std::vector<ThresholdEntry> thresholds;
  double bp = 0.0;
  double auc_exact = 0.0;
  double auc_approx = 0.0;
  double aupr = 0.0;
  double ndcg = 0.0;
  double auc_mroc = 0.0;

  /// Metric values in canonical order; see metric_names().
  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(thresholds.size() * 4 + 6);
    for (const auto& t : thresholds) {
      v.push_back(t.scores.precision);
      v.push_back(t.scores.recall);
      v.push_back(t.scores.f1);
      v.push_back(t.scores.mcc);
    }
    v.insert(v.end(), {bp, auc_exact, auc_approx, aupr, ndcg, auc_mroc});
    return v;
  }
};

/// Names matching MetricReport::values() for the given multipliers.
inline std::vector<std::string> metric_names(std::span<const double> multipliers) {
  std::vector<std::string> names;
  for (double mult : multipliers)
    for (const auto& kind : threshold_metric_kinds())
      names.push_back(threshold_metric_name(kind, mult));
  names.insert(names.end(), {"bp", "auc", "auc_approx", "aupr", "ndcg", "auc_mroc"});
  return names;
}

/// The sixteen metrics shown as discrimination-matrix panels: the four
/// threshold metrics at each multiplier, then AUC, AUPR, NDCG, AUC-mROC.
inline std::vector<std::string> panel_metric_names(std::span<const double> multipliers) {
  std::vector<std::string> names;
  for (double mult : multipliers)
    for (const auto& kind : threshold_metric_kinds())
      names.push_back(threshold_metric_name(kind, mult));
  names.insert(names.end(), {"auc", "aupr", "ndcg", "auc_mroc"});
  return names;
}

inline MetricReport compute_report(const RankedOutcome& o, std::span<const double> multipliers) {
  detail::require_both_classes(o, "metric report");
  MetricReport rep;
  for (double mult : multipliers) {
    ThresholdEntry e;
    e.multiplier = mult;
    e.k = std::min(threshold_from_multiplier(mult, o.positive_count()), o.candidate_count());
    e.scores = precision_recall_f1_mcc(confusion_at_k(o, e.k));
    rep.thresholds.push_back(e);
  }
  rep.bp = balanced_precision(o);
  rep.auc_exact = auc_exact(o);
  rep.auc_approx = auc_approx(o);
  rep.aupr = aupr(o);
  rep.ndcg = ndcg(o);
  rep.auc_mroc = auc_mroc(o);
  return rep;
}

}  // namespace lpdisc
