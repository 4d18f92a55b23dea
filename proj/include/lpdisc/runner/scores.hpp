#pragma once

// External score files: CSV with header `id,score,label`, label being
// `positive` or `negative`. Lets the metrics run on predictions made
// outside the harness.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lpdisc/error.hpp"
#include "lpdisc/metrics.hpp"
#include "lpdisc/oracle.hpp"
#include "lpdisc/random.hpp"
#include "lpdisc/runner/csv.hpp"

namespace lpdisc::runner {

/// Fixed seed of the tie-break stream used when ranking external scores.
inline constexpr std::uint64_t kExternalTieSeed = 0x5eed5c0e5ULL;

struct ExternalScoreSet {
  std::vector<std::string> ids;
  std::vector<double> scores;
  std::vector<std::uint8_t> positive;
};

inline ExternalScoreSet parse_score_file(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty score file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,score,label") throw ParseError(source + ":1: expected header id,score,label");

  ExternalScoreSet set;
  std::unordered_set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw ParseError(where + ": expected 3 columns (id,score,label)");
    if (cells[0].empty()) throw ParseError(where + ": empty id");
    if (!seen.insert(cells[0]).second)
      throw ParseError(where + ": duplicate id '" + cells[0] + "'");
    const double score = detail::parse_cell(cells[1], where);
    if (!std::isfinite(score)) throw ParseError(where + ": score must be finite");
    std::uint8_t label;
    if (cells[2] == "positive") label = 1;
    else if (cells[2] == "negative") label = 0;
    else throw ParseError(where + ": label must be positive or negative, got '" + cells[2] + "'");
    set.ids.push_back(cells[0]);
    set.scores.push_back(score);
    set.positive.push_back(label);
  }
  std::size_t n_pos = 0;
  for (auto p : set.positive) n_pos += p;
  if (n_pos == 0 || n_pos == set.positive.size())
    throw DegenerateClasses(source + ": score file needs at least one positive and one negative "
                            "row (all rows share one class)");
  return set;
}

inline ExternalScoreSet load_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read score file " + path);
  return parse_score_file(in, path);
}

inline RankedOutcome rank_external(const ExternalScoreSet& set) {
  auto rng = make_stream(kExternalTieSeed);
  return rank_by_score(set.scores, set.positive, rng);
}

inline MetricReport evaluate_scores(const ExternalScoreSet& set,
                                    std::span<const double> multipliers) {
  return compute_report(rank_external(set), multipliers);
}

/// Write one trial's scores as a score file; ids are "i-j" and scores keep
/// full precision so re-ranking them reproduces the trial.
inline void write_score_file(std::ostream& out, const ScoredCandidates& scored) {
  const auto& c = *scored.candidates;
  out << "id,score,label\n";
  char buf[40];
  for (std::size_t k = 0; k < c.pairs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", scored.scores[k]);
    out << c.pairs[k].i << '-' << c.pairs[k].j << ',' << buf << ','
        << (c.positive[k] ? "positive" : "negative") << '\n';
  }
}

inline void write_report_csv(std::ostream& out, const MetricReport& rep,
                             std::span<const double> multipliers) {
  const auto names = metric_names(multipliers);
  const auto values = rep.values();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_value(values[i]);
  out << '\n';
}

}  // namespace lpdisc::runner
