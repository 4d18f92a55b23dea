// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lpdisc/lpdisc.hpp"
#include "lpdisc/runner/run.hpp"
#include "lpdisc/runner/scores.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace lpdisc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v) {
  std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

SweepConfig desk_config() {
  SweepConfig c;
  c.n_nodes = 200;
  c.q_max = 0.5;
  c.test_fraction = 0.1;
  c.noise_grid = default_noise_grid();
  c.n_networks = 5;
  c.runs_per_network = 40;
  c.p_star = 0.01;
  c.master_seed = 1;
  return c;
}

Verdict formula_oracles() {
  const auto t0 = Clock::now();
  const auto r = props::formula_oracles(2024, 2000, 200);
  const double dt = seconds_since(t0);
  Verdict v;
  v.pass = r.ok() && r.cases >= 1000 && dt < 30.0;
  v.detail = fmt("%zu outcomes, %.2f s", r.cases, dt) + (r.ok() ? "" : "; " + r.failure);
  return v;
}

Verdict worked_values() {
  const RankedOutcome o({1, 3}, 5);
  const auto c = precision_recall_f1_mcc(confusion_at_k(o, 2));
  const struct {
    const char* name;
    double got, want;
  } pins[] = {
      {"auc", auc_exact(o), 5.0 / 6.0},
      {"aupr", aupr(o), 77.0 / 120.0},
      {"ndcg", ndcg(o), 0.91972},
      {"auc_mroc", auc_mroc(o), 0.81546},
      {"bp", balanced_precision(o), 0.5},
      {"mcc@2", c.mcc, 1.0 / 6.0},
  };
  Verdict v;
  std::ostringstream s;
  for (const auto& p : pins) {
    const bool ok = std::abs(p.got - p.want) <= 1e-4;
    v.pass &= ok;
    s << p.name << "=" << fmt("%.6f", p.got) << (ok ? "" : "(!)") << " ";
  }
  v.detail = s.str();
  return v;
}

Verdict rank_contributions() {
  // approximate AUC is 1 - <r>/n_c, so one positive at rank r contributes 1 - r/n_c
  const RankedOutcome o({5000}, 10000);
  const double auc_part = auc_approx(o);
  const double dcg_part = dcg(o.positions());
  Verdict v;
  v.pass = std::abs(auc_part - 0.5) <= 1e-3 && std::abs(dcg_part - 1.0 / std::log2(5001.0)) <= 1e-3 &&
           std::abs(dcg_part - 0.0814) <= 1e-3;
  v.detail = fmt("auc contribution %.6f, dcg contribution %.6f", auc_part, dcg_part);
  return v;
}

Verdict random_baseline() {
  const int trials = 100;
  double sum = 0;
  for (int t = 0; t < trials; ++t) {
    const auto u = static_cast<std::uint64_t>(t);
    auto lik = derive_stream(77, StreamTag::likelihoods, {u});
    auto real = derive_stream(77, StreamTag::realization, {u});
    auto spl = derive_stream(77, StreamTag::split, {u});
    auto noise = derive_stream(77, StreamTag::noise, {u});
    auto ties = derive_stream(77, StreamTag::ties, {u});
    const auto model = generate_likelihoods(200, 0.5, lik);
    const auto split = split_edges(200, realize_graph(model, real), 0.1, spl);
    ScoredCandidates scored{std::make_shared<const CandidateSet>(make_candidates(model, split)), {}, 0};
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    scored.scores.resize(scored.candidates->size());
    for (auto& s : scored.scores) s = uni(noise);
    sum += auc_exact(rank_candidates(scored, split, ties));
  }
  const double mean = sum / trials;
  Verdict v;
  v.pass = std::abs(mean - 0.5) <= 0.01;
  v.detail = fmt("mean AUC %.5f over %d trials", mean, trials);
  return v;
}

std::vector<double> means_over_eta(const SampleTable& t, const std::string& metric) {
  std::vector<double> out;
  for (std::size_t e = 0; e < t.noise_grid().size(); ++e) {
    const auto v = t.values(metric, e);
    out.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
  }
  return out;
}

Verdict monotonicity(const SampleTable& t, double dt) {
  Verdict v;
  std::ostringstream s;
  for (const char* metric : {"auc", "aupr", "ndcg"}) {
    const double rho = spearman(t.noise_grid(), means_over_eta(t, metric));
    v.pass &= rho == -1.0;
    s << metric << " rho=" << fmt("%.4f", rho) << " ";
  }
  v.pass &= dt < 600.0;
  s << fmt("sweep %.1f s", dt);
  v.detail = s.str();
  return v;
}

// Wall time of a full-scale sweep (N=1000, 10 networks x 100 runs, 20 noise
// levels) on 8 threads, extrapolated from one network and a few of its runs.
double estimate_full_scale_hours() {
  SweepConfig cfg;
  const int sampled_runs = 3;
  const auto t0 = Clock::now();
  const auto net = detail::build_network(cfg, {0});
  const double build = seconds_since(t0);
  const auto t1 = Clock::now();
  for (std::uint64_t t = 0; t < sampled_runs; ++t) {
    const auto cands = detail::candidates_for_run(cfg, net, {0, t});
    for (std::size_t e = 0; e < cfg.noise_grid.size(); ++e) {
      auto nr = derive_stream(cfg.master_seed, StreamTag::noise, {0, t, e});
      auto tr = derive_stream(cfg.master_seed, StreamTag::ties, {0, t, e});
      run_trial(cands, cfg.noise_grid[e], cfg.threshold_multipliers, nr, tr);
    }
  }
  const double per_run = seconds_since(t1) / sampled_runs;
  const double serial = build * cfg.n_networks + per_run * cfg.n_networks * cfg.runs_per_network;
  return serial / 8.0 / 3600.0;
}

Verdict ordering(const SampleTable& t) {
  const auto area = [&](const std::string& m) {
    return distinguishable_area(binarize(discrimination_matrix(t, m), 0.01));
  };
  std::vector<std::string> weak{"auc_mroc"};
  for (const auto& kind : threshold_metric_kinds()) weak.push_back(threshold_metric_name(kind, 0.5));
  Verdict v;
  std::ostringstream s;
  double weakest_strong = 1.0;
  for (const char* m : {"auc", "aupr", "ndcg"}) {
    const double a = area(m);
    weakest_strong = std::min(weakest_strong, a);
    s << m << "=" << fmt("%.3f", a) << " ";
  }
  s << "| ";
  for (const auto& m : weak) {
    const double a = area(m);
    v.pass &= a < weakest_strong;
    s << m << "=" << fmt("%.3f", a) << " ";
  }
  const double hours = estimate_full_scale_hours();
  v.pass &= hours < 4.0;
  s << fmt("| X=%zu, full-scale estimate %.2f h on 8 threads", t.sample_count(), hours);
  v.detail = s.str();
  return v;
}

Verdict property_suite() {
  props::Result r;
  r += props::formula_oracles(31, 2000);
  r += props::pr_curve_area(32, 1000);
  r += props::bp_triple_equality(33, 3000);
  r += props::recall_monotone(34, 1000);
  r += props::mcc_class_swap(35, 1000);
  r += props::rank_transform_invariance(36, 1000);
  r += props::swap_strictly_decreases(37, 300);
  r += props::sweep_determinism(38, 4);
  Verdict v;
  v.pass = r.ok() && r.cases >= 10000;
  v.detail = fmt("%zu cases", r.cases) + (r.ok() ? "" : "; " + r.failure);
  return v;
}

bool file_has_non_finite(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::transform(line.begin(), line.end(), line.begin(), [](unsigned char c) { return std::tolower(c); });
    if (line.find("nan") != std::string::npos || line.find("inf") != std::string::npos) return true;
  }
  return false;
}

Verdict degenerate_inputs() {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  const double mults[] = {0.5, 1.0, 2.0};

  // single positive
  const RankedOutcome one({3}, 10);
  const auto rep1 = compute_report(one, mults);
  check(rep1.thresholds[0].k == 1, "single positive: k for multiplier 0.5 is 1");
  check(rep1.bp == 0.0, "single positive at rank 3: BP 0");
  check(std::abs(rep1.auc_exact - 7.0 / 9.0) < 1e-12, "single positive: AUC 7/9");
  check(std::abs(rep1.aupr - (1.0 / 3.0 + 1.0 / 10.0) / 2.0) < 1e-12, "single positive: AUPR");
  check(std::abs(rep1.ndcg - 0.5) < 1e-12, "single positive: NDCG 1/log2(4)");
  for (double x : rep1.values()) check(std::isfinite(x), "single positive: finite values");

  // all ties: every ordering is equally likely and each metric stays finite
  {
    const std::vector<double> scores(50, 0.3);
    std::vector<std::uint8_t> labels(50, 0);
    labels[0] = labels[10] = labels[20] = 1;
    auto rng = make_stream(5);
    double mean_auc = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
      const auto rep = compute_report(rank_by_score(scores, labels, rng), mults);
      for (double x : rep.values()) check(std::isfinite(x), "all ties: finite values");
      mean_auc += rep.auc_exact / reps;
    }
    check(std::abs(mean_auc - 0.5) < 0.02, fmt("all ties: mean AUC %.4f near 0.5", mean_auc));
  }

  // all one class
  auto throws_degenerate = [](auto&& fn) {
    try {
      fn();
    } catch (const DegenerateClasses&) {
      return true;
    } catch (...) {
      return false;
    }
    return false;
  };
  check(throws_degenerate([&] { compute_report(RankedOutcome({}, 5), mults); }), "no positives: error");
  check(throws_degenerate([&] { compute_report(RankedOutcome({1, 2, 3}, 3), mults); }),
        "no negatives: error");
  {
    std::istringstream in("id,score,label\na,0.1,positive\nb,0.2,positive\n");
    check(throws_degenerate([&] { runner::parse_score_file(in, "x"); }), "one-class score file: error");
  }

  // k = n_c: everything predicted positive
  {
    const RankedOutcome o({2, 4}, 6);
    const auto c = confusion_at_k(o, 6);
    const auto s = precision_recall_f1_mcc(c);
    check(c.tp == 2 && c.fp == 4 && c.tn == 0 && c.fn == 0, "k=n_c: counts");
    check(s.recall == 1.0 && std::abs(s.precision - 1.0 / 3.0) < 1e-15, "k=n_c: precision and recall");
    check(std::abs(s.f1 - 0.5) < 1e-15, "k=n_c: F1 0.5");
    check(s.mcc == 0.0, "k=n_c: MCC 0 on degenerate denominator");
    check(threshold_from_multiplier(10.0, 2) == 20, "multiplier beyond n_c");
  }
  // a multiplier large enough to reach n_c in a report
  {
    const double big[] = {5.0};
    const auto rep = compute_report(RankedOutcome({1, 2}, 6), big);
    check(rep.thresholds[0].scores.mcc == 0.0 && std::isfinite(rep.thresholds[0].scores.f1),
          "report with k >= n_c");
  }

  // emitted CSVs from a small run contain no NaN or inf
  {
    const auto dir = fs::temp_directory_path() / "lpdisc_acceptance_degenerate";
    fs::remove_all(dir);
    runner::RunConfig cfg;
    cfg.sweep.n_nodes = 30;
    cfg.sweep.noise_grid = {0.0, 0.5, 1.0};
    cfg.sweep.n_networks = 2;
    cfg.sweep.runs_per_network = 3;
    cfg.workers = 1;
    cfg.output_dir = dir.string();
    cfg.plots = false;
    ::unsetenv(runner::kOutputDirEnv);
    runner::run_config(cfg);
    {
      std::ofstream out(dir / "report.csv");
      runner::write_report_csv(out, compute_report(one, mults), mults);
    }
    int csvs = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".csv") continue;
      ++csvs;
      check(!file_has_non_finite(entry.path()), "non-finite value in " + entry.path().filename().string());
    }
    check(csvs >= 35, fmt("expected at least 35 CSV files, found %d", csvs));
    fs::remove_all(dir);
  }

  Verdict v;
  v.pass = problems.empty();
  v.detail = problems.empty() ? "single positive, all ties, one class, k=n_c, emitted CSVs finite"
                              : problems.front() + fmt(" (+%zu more)", problems.size() - 1);
  return v;
}

}  // namespace

int main() {
  auto guarded = [](int id, const std::string& title, const std::function<Verdict()>& fn) {
    try {
      report(id, title, fn());
    } catch (const std::exception& e) {
      report(id, title, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, "formula oracles", formula_oracles);
  guarded(2, "worked-value pins", worked_values);
  guarded(3, "rank 5000 of 10000 contributions", rank_contributions);
  guarded(4, "random-score baseline", random_baseline);

  std::optional<SampleTable> desk;
  double desk_seconds = 0;
  try {
    const auto t0 = Clock::now();
    desk.emplace(sweep(desk_config(), {.workers = default_worker_count()}));
    desk_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    report(5, "monotonicity (desk config)", {false, std::string("exception: ") + e.what()});
    report(6, "discrimination ordering (desk config)", {false, "desk sweep failed"});
  }
  if (desk) {
    guarded(5, "monotonicity (desk config)", [&] { return monotonicity(*desk, desk_seconds); });
    guarded(6, "discrimination ordering (desk config)", [&] { return ordering(*desk); });
  }

  guarded(7, "property suite", property_suite);
  guarded(8, "degenerate inputs", degenerate_inputs);

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
