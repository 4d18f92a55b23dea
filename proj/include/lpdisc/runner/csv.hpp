#pragma once

// CSV outputs of a sweep. Numbers carry 6 significant digits; files are
// comma-separated with LF line endings.
//
//   samples.csv          metric,eta,network,run,value
//   summary.csv          metric,eta,mean,sd,n   (sd is the sample standard deviation)
//   pvalues_<metric>.csv header row of eta values, then the square matrix
//   binary_<metric>.csv  same shape, 0/1
//   areas.csv            metric,distinguishable_area

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "lpdisc/discrim.hpp"
#include "lpdisc/error.hpp"

namespace lpdisc::runner {

namespace fs = std::filesystem;

inline std::string format_value(double v) {
  if (!std::isfinite(v)) throw InvalidParameter("refusing to write a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  }
  std::ofstream& stream() { return out_; }
  void close() {
    out_.close();
    if (!out_) throw IoError("error while writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

inline void write_samples(const fs::path& path, const SampleTable& t) {
  CsvFile f(path);
  auto& out = f.stream();
  out << "metric,eta,network,run,value\n";
  for (std::size_t m = 0; m < t.metric_names().size(); ++m)
    for (std::size_t e = 0; e < t.noise_grid().size(); ++e)
      for (std::int64_t n = 0; n < t.n_networks(); ++n)
        for (std::int64_t r = 0; r < t.runs_per_network(); ++r)
          out << t.metric_names()[m] << ',' << format_value(t.noise_grid()[e]) << ',' << n << ','
              << r << ',' << format_value(t.at(m, e, n, r)) << '\n';
  f.close();
}

struct SummaryRow {
  std::string metric;
  double eta = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

inline std::vector<SummaryRow> summarize(const SampleTable& t) {
  std::vector<SummaryRow> rows;
  for (std::size_t m = 0; m < t.metric_names().size(); ++m) {
    for (std::size_t e = 0; e < t.noise_grid().size(); ++e) {
      const auto v = t.values(m, e);
      double sum = 0.0;
      for (double x : v) sum += x;
      const double mean = sum / static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
      rows.push_back({t.metric_names()[m], t.noise_grid()[e], mean, sd, v.size()});
    }
  }
  return rows;
}

inline void write_summary(const fs::path& path, const SampleTable& t) {
  CsvFile f(path);
  auto& out = f.stream();
  out << "metric,eta,mean,sd,n\n";
  for (const auto& r : summarize(t))
    out << r.metric << ',' << format_value(r.eta) << ',' << format_value(r.mean) << ','
        << format_value(r.sd) << ',' << r.n << '\n';
  f.close();
}

template <class T>
void write_matrix(const fs::path& path, const NoiseMatrix<T>& m) {
  CsvFile f(path);
  auto& out = f.stream();
  const auto g = m.size();
  for (std::size_t j = 0; j < g; ++j) out << (j ? "," : "") << format_value(m.noise_grid[j]);
  out << '\n';
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      out << (j ? "," : "");
      if constexpr (std::is_same_v<T, std::uint8_t>)
        out << (m.at(i, j) ? '1' : '0');
      else
        out << format_value(static_cast<double>(m.at(i, j)));
    }
    out << '\n';
  }
  f.close();
}

// ---------------------------------------------------------------------------
// Readers for the subcommands that start from files

namespace detail {

inline double parse_cell(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": cannot parse '" + cell + "' as a number");
  }
}

}  // namespace detail

/// Rebuild a SampleTable from samples.csv. Metrics keep their file order;
/// noise levels are sorted ascending.
inline SampleTable read_samples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "metric,eta,network,run,value")
    throw ParseError(path.string() + ":1: expected header metric,eta,network,run,value");

  struct Row {
    std::size_t metric;
    double eta;
    long long network, run;
    double value;
  };
  std::vector<std::string> metrics;
  std::map<std::string, std::size_t> metric_idx;
  std::vector<double> etas;
  std::vector<Row> rows;
  long long max_net = -1, max_run = -1;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) throw ParseError(where + ": expected 5 columns");
    auto [it, fresh] = metric_idx.emplace(cells[0], metrics.size());
    if (fresh) metrics.push_back(cells[0]);
    Row r{it->second, detail::parse_cell(cells[1], where),
          static_cast<long long>(detail::parse_cell(cells[2], where)),
          static_cast<long long>(detail::parse_cell(cells[3], where)),
          detail::parse_cell(cells[4], where)};
    if (r.network < 0 || r.run < 0) throw ParseError(where + ": negative index");
    max_net = std::max(max_net, r.network);
    max_run = std::max(max_run, r.run);
    etas.push_back(r.eta);
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError(path.string() + ": no samples");
  std::sort(etas.begin(), etas.end());
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());

  SampleTable table(metrics, etas, max_net + 1, max_run + 1);
  const auto expected = metrics.size() * etas.size() * table.sample_count();
  if (rows.size() != expected)
    throw ParseError(path.string() + ": expected " + std::to_string(expected) +
                     " rows for a complete table, found " + std::to_string(rows.size()));
  std::vector<std::uint8_t> filled(expected, 0);
  for (const auto& r : rows) {
    const auto e = static_cast<std::size_t>(
        std::lower_bound(etas.begin(), etas.end(), r.eta) - etas.begin());
    const auto slot = (r.metric * etas.size() + e) * table.sample_count() +
                      static_cast<std::size_t>(r.network * (max_run + 1) + r.run);
    if (filled[slot]++) throw ParseError(path.string() + ": duplicate sample");
    table.at(r.metric, e, r.network, r.run) = r.value;
  }
  return table;
}

inline std::vector<SummaryRow> read_summary(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "metric,eta,mean,sd,n")
    throw ParseError(path.string() + ":1: expected header metric,eta,mean,sd,n");
  std::vector<SummaryRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto c = split_csv_line(line);
    if (c.size() != 5) throw ParseError(where + ": expected 5 columns");
    rows.push_back({c[0], detail::parse_cell(c[1], where), detail::parse_cell(c[2], where),
                    detail::parse_cell(c[3], where),
                    static_cast<std::size_t>(detail::parse_cell(c[4], where))});
  }
  return rows;
}

inline BinaryDiscriminationMatrix read_binary_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  BinaryDiscriminationMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  for (const auto& c : split_csv_line(line))
    m.noise_grid.push_back(detail::parse_cell(c, path.string() + ":1"));
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != m.noise_grid.size())
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": row is not square");
    for (const auto& c : cells) {
      if (c != "0" && c != "1")
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 0 or 1");
      m.entries.push_back(c == "1" ? 1 : 0);
    }
  }
  if (m.entries.size() != m.noise_grid.size() * m.noise_grid.size())
    throw ParseError(path.string() + ": matrix is not square");
  return m;
}

}  // namespace lpdisc::runner
