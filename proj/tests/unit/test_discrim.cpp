#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpdisc/discrim.hpp"

using namespace lpdisc;

namespace {

SweepConfig tiny_config() {
  SweepConfig c;
  c.n_nodes = 40;
  c.noise_grid = {0.1, 0.4, 0.7, 1.0};
  c.n_networks = 2;
  c.runs_per_network = 3;
  c.master_seed = 123;
  return c;
}

DiscriminationMatrix matrix_of(std::vector<std::vector<double>> columns) {
  std::vector<double> grid;
  std::vector<std::span<const double>> spans;
  for (std::size_t i = 0; i < columns.size(); ++i) grid.push_back(0.1 * static_cast<double>(i + 1));
  for (const auto& c : columns) spans.emplace_back(c);
  return discrimination_matrix(grid, spans);
}

}  // namespace

TEST(SweepConfig, Validation) {
  auto c = tiny_config();
  EXPECT_NO_THROW(c.validate());
  c.noise_grid = {0.1, 0.1};
  EXPECT_THROW(c.validate(), InvalidParameter);
  c = tiny_config();
  c.noise_grid = {0.5, 0.2};
  EXPECT_THROW(c.validate(), InvalidParameter);
  c = tiny_config();
  c.p_star = 1.0;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c = tiny_config();
  c.runs_per_network = 0;
  EXPECT_THROW(c.validate(), InvalidParameter);
}

TEST(RunTrial, DeterministicAtZeroNoise) {
  auto rng = make_stream(1);
  const auto model = generate_likelihoods(50, 0.5, rng);
  const auto split = split_edges(50, realize_graph(model, rng), 0.1, rng);
  const double mults[] = {0.5, 1, 2};
  auto n1 = make_stream(5), t1 = make_stream(6), n2 = make_stream(5), t2 = make_stream(6);
  EXPECT_EQ(run_trial(model, split, 0.0, mults, n1, t1).values(),
            run_trial(model, split, 0.0, mults, n2, t2).values());
}

TEST(RunTrial, ReportRangesOnRandomTrials) {
  auto rng = make_stream(2);
  const auto model = generate_likelihoods(30, 0.5, rng);
  const auto split = split_edges(30, realize_graph(model, rng), 0.1, rng);
  const auto cands = std::make_shared<const CandidateSet>(make_candidates(model, split));
  const double mults[] = {0.5, 1, 2};
  std::uniform_real_distribution<double> eta(0.0, 1.5);
  for (int t = 0; t < 1000; ++t) {
    auto nr = make_stream(1000 + t), tr = make_stream(5000 + t);
    const auto rep = run_trial(cands, eta(rng), mults, nr, tr);
    for (const auto& th : rep.thresholds) {
      for (double v : {th.scores.precision, th.scores.recall, th.scores.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_GE(th.scores.mcc, -1.0);
      EXPECT_LE(th.scores.mcc, 1.0);
    }
    for (double v : {rep.bp, rep.auc_exact, rep.auc_approx, rep.aupr, rep.ndcg, rep.auc_mroc}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Sweep, TableShape) {
  const auto cfg = tiny_config();
  const auto t = sweep(cfg, {.workers = 1});
  EXPECT_EQ(t.sample_count(), 6u);
  EXPECT_EQ(t.noise_grid().size(), 4u);
  EXPECT_EQ(t.metric_names().size(), 18u);
  for (std::size_t m = 0; m < t.metric_names().size(); ++m)
    for (std::size_t e = 0; e < 4; ++e) EXPECT_EQ(t.values(m, e).size(), 6u);
}

TEST(Sweep, SchedulingInvariant) {
  auto cfg = tiny_config();
  const auto one = sweep(cfg, {.workers = 1});
  EXPECT_EQ(one, sweep(cfg, {.workers = 3}));
  EXPECT_EQ(one, sweep(cfg, {.workers = 8}));
  cfg.master_seed = 124;
  EXPECT_NE(one, sweep(cfg, {.workers = 1}));
}

TEST(Sweep, UnpairedAndPerRunVariantsRun) {
  auto cfg = tiny_config();
  cfg.pairing = Pairing::unpaired;
  const auto u = sweep(cfg, {.workers = 2});
  EXPECT_EQ(u, sweep(cfg, {.workers = 1}));
  cfg.pairing = Pairing::paired;
  cfg.split_policy = SplitPolicy::per_run;
  const auto r = sweep(cfg, {.workers = 2});
  EXPECT_EQ(r, sweep(cfg, {.workers = 1}));
  EXPECT_NE(u, r);
}

TEST(Sweep, SplitIsFixedPerNetwork) {
  // At eta = 0 a trial is fully determined by its network and split, so all
  // runs of one network agree and different networks do not.
  auto cfg = tiny_config();
  cfg.noise_grid = {0.0, 0.5};
  const auto t = sweep(cfg, {.workers = 1});
  const auto auc = t.metric_index("auc");
  for (std::int64_t n = 0; n < t.n_networks(); ++n)
    for (std::int64_t r = 1; r < t.runs_per_network(); ++r)
      EXPECT_EQ(t.at(auc, 0, n, r), t.at(auc, 0, n, 0));
  EXPECT_NE(t.at(auc, 0, 0, 0), t.at(auc, 0, 1, 0));
  // eta > 0 draws fresh noise per run
  EXPECT_NE(t.at(auc, 1, 0, 0), t.at(auc, 1, 0, 1));

  cfg.split_policy = SplitPolicy::per_run;
  const auto u = sweep(cfg, {.workers = 1});
  EXPECT_NE(u.at(auc, 0, 0, 0), u.at(auc, 0, 0, 1));
}

TEST(Sweep, TooFewEdgesAbortsWithNetworkIndex) {
  auto cfg = tiny_config();
  cfg.n_nodes = 3;
  cfg.q_max = 0.01;
  try {
    sweep(cfg, {.workers = 1});
    FAIL() << "expected TooFewEdges";
  } catch (const TooFewEdges& e) {
    EXPECT_NE(std::string(e.what()).find("network 0"), std::string::npos);
  }
}

TEST(SampleTable, UnknownMetric) {
  const SampleTable t({"auc"}, {0.1, 0.2}, 1, 2);
  EXPECT_THROW(t.metric_index("nope"), UnknownMetric);
  EXPECT_THROW(discrimination_matrix(t, "nope"), UnknownMetric);
}

TEST(DiscriminationMatrix, FullySeparated) {
  const auto m = matrix_of({{0.9, 0.8, 0.95}, {0.5, 0.4, 0.6}});
  EXPECT_EQ(m.at(0, 1), 0.0);
  EXPECT_EQ(m.at(1, 0), 0.0);
  EXPECT_EQ(m.at(0, 0), 0.5);
  EXPECT_EQ(m.at(1, 1), 0.5);
}

TEST(DiscriminationMatrix, TiesCountAsFailures) {
  const auto m = matrix_of({{0.3, 0.4, 0.5}, {0.3, 0.4, 0.5}});
  EXPECT_EQ(m.at(0, 1), 1.0);
}

TEST(DiscriminationMatrix, CountsPairedFailures) {
  // two of four comparisons have M(eta_1) <= M(eta_2)
  const auto m = matrix_of({{0.5, 0.5, 0.7, 0.2}, {0.4, 0.5, 0.6, 0.3}, {0.1, 0.1, 0.1, 0.1}});
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(m.at(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(m.at(1, 2), 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.at(i, j), m.at(j, i));
}

TEST(DiscriminationMatrix, RejectsRaggedSamples) {
  const std::vector<double> a{1, 2}, b{1};
  const std::vector<std::span<const double>> s{a, b};
  const std::vector<double> grid{0.1, 0.2};
  EXPECT_THROW(discrimination_matrix(grid, s), DimensionMismatch);
}

TEST(DiscriminationMatrix, MonotoneRescalingGivesSameMatrix) {
  const auto t = sweep(tiny_config(), {.workers = 1});
  SampleTable scaled({"auc", "auc_scaled"}, t.noise_grid(), t.n_networks(), t.runs_per_network());
  for (std::size_t e = 0; e < t.noise_grid().size(); ++e) {
    const auto src = t.values("auc", e);
    for (std::size_t s = 0; s < src.size(); ++s) {
      scaled.values(0, e)[s] = src[s];
      scaled.values(1, e)[s] = std::exp(3 * src[s]) - 2;
    }
  }
  EXPECT_EQ(discrimination_matrix(scaled, "auc").entries,
            discrimination_matrix(scaled, "auc_scaled").entries);
}

TEST(DiscriminationMatrix, InvariantUnderJointPermutation) {
  const std::vector<std::vector<double>> cols{{0.9, 0.3, 0.6, 0.2, 0.8}, {0.5, 0.4, 0.6, 0.1, 0.7}};
  const auto base = matrix_of(cols);
  std::vector<std::size_t> perm{4, 2, 0, 3, 1};
  std::vector<std::vector<double>> permuted(2, std::vector<double>(5));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t s = 0; s < 5; ++s) permuted[c][s] = cols[c][perm[s]];
  EXPECT_EQ(matrix_of(permuted).entries, base.entries);
}

TEST(Binarize, StrictThreshold) {
  DiscriminationMatrix m;
  m.noise_grid = {0.1, 0.2, 0.3};
  m.entries = {0.5, 0.005, 0.01, 0.005, 0.5, 0.2, 0.01, 0.2, 0.5};
  const auto b = binarize(m, 0.01);
  EXPECT_EQ(b.at(0, 1), 1);
  EXPECT_EQ(b.at(0, 2), 0);
  EXPECT_EQ(b.at(1, 2), 0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.at(i, i), 0);
  EXPECT_THROW(binarize(m, 0.0), InvalidParameter);
  EXPECT_DOUBLE_EQ(distinguishable_area(b), 2.0 / 6.0);
}

TEST(DistinguishableArea, Extremes) {
  BinaryDiscriminationMatrix b;
  b.noise_grid = {0.1, 0.2, 0.3};
  b.entries = {0, 1, 1, 1, 0, 1, 1, 1, 0};
  EXPECT_DOUBLE_EQ(distinguishable_area(b), 1.0);
  b.entries.assign(9, 0);
  EXPECT_DOUBLE_EQ(distinguishable_area(b), 0.0);
  b.noise_grid = {0.1};
  b.entries = {0};
  EXPECT_DOUBLE_EQ(distinguishable_area(b), 0.0);
}
