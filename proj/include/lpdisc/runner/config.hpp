#pragma once

// Flat key-value run configuration:
//
//   # comment
//   n_nodes = 200
//   noise_grid = 0.1, 0.3, 0.5
//
// Keys are the SweepConfig field names plus the runner's own settings.
// Unknown or repeated keys are errors; missing keys keep their defaults.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpdisc/discrim.hpp"
#include "lpdisc/error.hpp"

namespace lpdisc::runner {

struct RunConfig {
  SweepConfig sweep;
  /// 0 means one worker per hardware thread.
  unsigned workers = 0;
  std::string output_dir = "results";
  bool plots = true;

  unsigned resolved_workers() const { return workers == 0 ? default_worker_count() : workers; }
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_exact(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_exact(v[i]);
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ParseError(where + ": cannot parse '" + text + "' as a number");
  return value;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(trim(item), where));
  if (out.empty()) throw ParseError(where + ": empty list");
  return out;
}

inline bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError(where + ": expected true or false, got '" + text + "'");
}

}  // namespace detail

/// Apply one key to the config. `where` prefixes error messages.
inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      const std::string& where) {
  using detail::parse_number;
  auto& s = cfg.sweep;
  const std::string at = where + ": key '" + key + "'";
  if (key == "n_nodes") s.n_nodes = parse_number<std::int64_t>(value, at);
  else if (key == "q_max") s.q_max = parse_number<double>(value, at);
  else if (key == "test_fraction") s.test_fraction = parse_number<double>(value, at);
  else if (key == "noise_grid") s.noise_grid = detail::parse_list(value, at);
  else if (key == "n_networks") s.n_networks = parse_number<std::int64_t>(value, at);
  else if (key == "runs_per_network") s.runs_per_network = parse_number<std::int64_t>(value, at);
  else if (key == "threshold_multipliers") s.threshold_multipliers = detail::parse_list(value, at);
  else if (key == "p_star") s.p_star = parse_number<double>(value, at);
  else if (key == "master_seed") s.master_seed = parse_number<std::uint64_t>(value, at);
  else if (key == "pairing") {
    if (value == "paired") s.pairing = Pairing::paired;
    else if (value == "unpaired") s.pairing = Pairing::unpaired;
    else throw ParseError(at + ": expected paired or unpaired, got '" + value + "'");
  } else if (key == "split_policy") {
    if (value == "per_network") s.split_policy = SplitPolicy::per_network;
    else if (value == "per_run") s.split_policy = SplitPolicy::per_run;
    else throw ParseError(at + ": expected per_network or per_run, got '" + value + "'");
  } else if (key == "workers") cfg.workers = parse_number<unsigned>(value, at);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "plots") cfg.plots = detail::parse_bool(value, at);
  else throw ParseError(where + ": unknown key '" + key + "'");
}

inline RunConfig parse_config(std::istream& in, const std::string& source = "config") {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const auto key = detail::trim(std::string_view(text).substr(0, eq));
    const auto value = detail::trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": missing key");
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh)
      throw ParseError(where + ": key '" + key + "' already set on line " +
                       std::to_string(it->second));
    apply_key(cfg, key, value, where);
  }
  try {
    cfg.sweep.validate();
  } catch (const InvalidParameter& e) {
    throw ParseError(source + ": " + e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  return parse_config(in, path);
}

/// Every key with its value, at full precision. Parsing the rendered text
/// gives back an identical configuration.
inline KeyValues to_key_values(const RunConfig& cfg) {
  const auto& s = cfg.sweep;
  return {
      {"n_nodes", std::to_string(s.n_nodes)},
      {"q_max", detail::format_exact(s.q_max)},
      {"test_fraction", detail::format_exact(s.test_fraction)},
      {"noise_grid", detail::join_exact(s.noise_grid)},
      {"n_networks", std::to_string(s.n_networks)},
      {"runs_per_network", std::to_string(s.runs_per_network)},
      {"threshold_multipliers", detail::join_exact(s.threshold_multipliers)},
      {"p_star", detail::format_exact(s.p_star)},
      {"master_seed", std::to_string(s.master_seed)},
      {"pairing", s.pairing == Pairing::paired ? "paired" : "unpaired"},
      {"split_policy", s.split_policy == SplitPolicy::per_network ? "per_network" : "per_run"},
      {"workers", std::to_string(cfg.workers)},
      {"output_dir", cfg.output_dir},
      {"plots", cfg.plots ? "true" : "false"},
  };
}

inline std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : to_key_values(cfg)) out += k + " = " + v + "\n";
  return out;
}

}  // namespace lpdisc::runner
