#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "boolbias/training.hpp"
#include "oracles.hpp"

using namespace boolbias;

namespace {

const BooleanFunction kParity4 = BooleanFunction::from_string("0110100110010110");

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out(hi - lo);
  std::iota(out.begin(), out.end(), lo);
  return out;
}

}  // namespace

TEST(Dataset, Splits) {
  const auto f = generate({ParityFamily{2}, 0}, 7);
  for (std::size_t m : {16u, 32u, 64u, 96u}) {
    const Dataset d = make_dataset(f, m, 3);
    EXPECT_EQ(d.train_idx.size(), m);
    EXPECT_EQ(d.test_idx.size(), 128 - m);
    std::set<std::size_t> all(d.train_idx.begin(), d.train_idx.end());
    all.insert(d.test_idx.begin(), d.test_idx.end());
    EXPECT_EQ(all.size(), 128u);
    const Dataset again = make_dataset(f, m, 3);
    EXPECT_EQ(d.train_idx, again.train_idx);
  }
  EXPECT_EQ(make_dataset(f, 127, 1).test_idx.size(), 1u);
  EXPECT_NE(make_dataset(f, 64, 1).train_idx, make_dataset(f, 64, 2).train_idx);
  // Smaller m takes a prefix of the same shuffle.
  const auto small = make_dataset(f, 16, 5).train_idx;
  const auto large = make_dataset(f, 64, 5).train_idx;
  EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  EXPECT_THROW(make_dataset(f, 0, 1), InvalidArgument);
  EXPECT_THROW(make_dataset(f, 128, 1), InvalidArgument);
  EXPECT_THROW(make_dataset(f, std::vector<std::size_t>{1, 1}), InvalidArgument);
  EXPECT_THROW(make_dataset(f, std::vector<std::size_t>{128}), InvalidArgument);
}

TEST(Dataset, LossAndAccuracy) {
  const auto balanced = BooleanFunction::from_string("0110");
  const Dataset d = make_dataset(balanced, range(0, 4));
  const auto all = d.train_idx;
  const DfcnParams perfect = dnf_to_dfcn(canonical_expansion(balanced), 2);
  EXPECT_DOUBLE_EQ(loss(perfect, d, all), 0.0);
  EXPECT_DOUBLE_EQ(loss(DfcnParams::zeros(2, 2), d, all), 0.5);
  DfcnParams wrong = perfect;
  wrong.beta = -1;
  EXPECT_DOUBLE_EQ(loss(wrong, d, all), 1.0);
  EXPECT_THROW(loss(perfect, d, std::vector<std::size_t>{}), InvalidArgument);

  EXPECT_DOUBLE_EQ(accuracy(kParity4, kParity4, range(0, 16)), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(kParity4.complement(), kParity4, range(0, 16)), 0.0);
  EXPECT_DOUBLE_EQ(accuracy(BooleanFunction::from_string("0110011001100110"), kParity4,
                            range(4, 16)),
                   4.0 / 12.0);
  EXPECT_THROW(accuracy(kParity4, kParity4, std::vector<std::size_t>{}), InvalidArgument);
}

TEST(Oracle, ReproducesWorkedExample) {
  const OracleResult a = oracle_train(make_dataset(kParity4, range(0, 4)));
  EXPECT_EQ(a.prediction.to_string(), "0110011001100110");
  EXPECT_DOUBLE_EQ(a.test_acc, 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(a.train_acc, 1.0);
  const OracleResult b = oracle_train(make_dataset(kParity4, range(0, 8)));
  EXPECT_EQ(b.prediction.to_string(), "0110100101101001");
  EXPECT_DOUBLE_EQ(b.test_acc, 0.0);
}

TEST(Oracle, FullTrainingSetReproducesTarget) {
  CounterRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = BooleanFunction::tabulate(4, [&](std::size_t) { return rng.coin(); });
    const OracleResult r = oracle_train(make_dataset(f, range(0, 16)));
    EXPECT_EQ(r.prediction, f);
    EXPECT_TRUE(std::isnan(r.test_acc));
    EXPECT_EQ(r.dnf.beta, 1);
  }
  const auto ones = BooleanFunction::constant(3, true);
  EXPECT_EQ(oracle_train(make_dataset(ones, range(0, 8))).prediction, ones);
}

TEST(Oracle, LiteralCountIsMinimalAmongConsistentDnfsAtN3) {
  const auto costs = oracle::dnf_costs(3, [](int l) { return l; });
  CounterRng rng(4);
  for (int trial = 0; trial < 400; ++trial) {
    const auto f = BooleanFunction::tabulate(3, [&](std::size_t) { return rng.coin(); });
    const std::size_t m = 1 + rng.below(7);
    const Dataset d = make_dataset(f, m, trial);
    int best = 1 << 20;
    for (std::uint32_t g = 0; g < 256; ++g) {
      bool ok = true;
      for (auto i : d.train_idx) ok = ok && (((g >> i) & 1) == f[i]);
      if (ok) best = std::min(best, costs[g]);
    }
    const OracleResult r = oracle_train(d);
    EXPECT_EQ(dnf_length(r.dnf), best);
    EXPECT_DOUBLE_EQ(r.train_acc, 1.0);
  }
}

TEST(Mcmc, DeterministicWithTraceShape) {
  const auto f = generate({ParityFamily{1}, 0}, 4);
  const Dataset d = make_dataset(f, 10, 1);
  McmcConfig cfg;
  cfg.steps = 500;
  cfg.seed = 9;
  cfg.snapshot_steps = {0, 100, 500};
  const TrainResult a = mcmc_train(d, 1, cfg);
  const TrainResult b = mcmc_train(d, 1, cfg);
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.trace.records.size(), 500u);
  EXPECT_EQ(a.steps_run, 500u);
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    EXPECT_EQ(a.trace.records[i].step, i + 1);
    EXPECT_EQ(a.trace.records[i].loss, b.trace.records[i].loss);
    EXPECT_GE(a.trace.records[i].train_acc, 0.0);
    EXPECT_LE(a.trace.records[i].test_acc, 1.0);
  }
  ASSERT_EQ(a.trace.snapshots.size(), 3u);
  EXPECT_EQ(a.trace.snapshots[1].step, 100u);
  EXPECT_EQ(a.trace.snapshots[2].params, a.params);
  EXPECT_EQ(a.prediction, truth_table(a.params));
  EXPECT_EQ(a.norm.total, weight_norm(a.params).total);
  EXPECT_EQ(a.params.beta, b.params.beta);
  cfg.seed = 10;
  EXPECT_NE(mcmc_train(d, 1, cfg).params, a.params);
}

TEST(Mcmc, InfiniteKappaNeverAcceptsWorseLoss) {
  const auto f = generate({ParityFamily{2}, 0}, 4);
  const Dataset d = make_dataset(f, 12, 2);
  McmcConfig cfg;
  cfg.kappa = 1e300;
  cfg.steps = 3000;
  cfg.seed = 1;
  const TrainResult r = mcmc_train(d, 1, cfg);
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    EXPECT_LE(r.trace.records[i].loss, r.trace.records[i - 1].loss);
  }
}

TEST(Mcmc, BetaFrozenUnlessIncluded) {
  const Dataset d = make_dataset(generate({ParityFamily{1}, 0}, 3), 5, 1);
  McmcConfig cfg;
  cfg.steps = 2000;
  cfg.kappa = 1;
  cfg.initial_beta = -1;
  EXPECT_EQ(mcmc_train(d, 1, cfg).params.beta, -1);
  cfg.include_beta = true;
  int flips = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    cfg.seed = s;
    const auto r = mcmc_train(d, 1, cfg);
    flips += r.params.beta == 1;
  }
  EXPECT_GT(flips, 0);
}

TEST(Mcmc, EarlyStopAndTraceStride) {
  const Dataset d = make_dataset(BooleanFunction::constant(3, false), 6, 1);
  McmcConfig cfg;
  cfg.steps = 100000;
  cfg.early_stop_window = 50;
  cfg.trace_every = 10;
  cfg.seed = 2;
  const TrainResult r = mcmc_train(d, 1, cfg);
  EXPECT_LT(r.steps_run, cfg.steps);
  EXPECT_DOUBLE_EQ(r.train_acc, 1.0);
  ASSERT_FALSE(r.trace.records.empty());
  EXPECT_EQ(r.trace.records.back().step, r.steps_run);
  for (std::size_t i = 0; i + 1 < r.trace.records.size(); ++i) {
    EXPECT_EQ(r.trace.records[i].step % 10, 0u);
  }
}

TEST(Mcmc, SnapshotOnTestAccuracy) {
  const Dataset d = make_dataset(generate({ParityFamily{1}, 0}, 4), 12, 3);
  McmcConfig cfg;
  cfg.steps = 5000;
  cfg.seed = 3;
  cfg.snapshot_test_acc = {0.5};
  const TrainResult r = mcmc_train(d, 1, cfg);
  ASSERT_LE(r.trace.snapshots.size(), 1u);
  if (!r.trace.snapshots.empty()) EXPECT_GE(r.trace.snapshots[0].test_acc, 0.5);
}

TEST(Greedy, KeepCurrentGivesMonotoneAccuracy) {
  const auto f = generate({ParityFamily{2}, 0}, 5);
  const Dataset d = make_dataset(f, 20, 4);
  GreedyConfig cfg;
  cfg.steps = 300;
  cfg.keep_current = true;
  cfg.seed = 5;
  const TrainResult r = greedy_train(d, 1, cfg);
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    EXPECT_GE(r.trace.records[i].train_acc, r.trace.records[i - 1].train_acc);
  }
  EXPECT_EQ(greedy_train(d, 1, cfg).params, r.params);
}

TEST(Greedy, PEqualsOneAlwaysTakesAMinimumNormBestNeighbor) {
  const auto f = generate({ParityFamily{1}, 0}, 3);
  const Dataset d = make_dataset(f, 5, 6);
  GreedyConfig cfg;
  cfg.p = 1.0;
  cfg.steps = 1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    GreedyConfig zero = cfg;
    zero.steps = 0;
    const DfcnParams start = greedy_train(d, 1, zero).params;
    const TrainResult r = greedy_train(d, 1, cfg);
    double best_acc = -1;
    int best_norm = 1 << 20;
    for (const Move& m : neighbor_moves(start)) {
      const DfcnParams q = apply_move(start, m);
      const double acc = 1.0 - loss(q, d, d.train_idx);
      if (acc > best_acc + 1e-12) {
        best_acc = acc;
        best_norm = weight_norm(q).total;
      } else if (std::abs(acc - best_acc) <= 1e-12) {
        best_norm = std::min(best_norm, weight_norm(q).total);
      }
    }
    EXPECT_DOUBLE_EQ(1.0 - loss(r.params, d, d.train_idx), best_acc);
    EXPECT_EQ(weight_norm(r.params).total, best_norm);
  }
}

TEST(Tilt, ZeroLambdaIsIdentityAndPosteriorNormalises) {
  const Dataset d = make_dataset(generate({ParityFamily{2}, 0}, 3), 4, 1);
  const TiltReport flat = posterior_tilt_check(d, 1, 0.0);
  ASSERT_FALSE(flat.rows.empty());
  double sum0 = 0, sum1 = 0;
  for (const auto& row : flat.rows) {
    EXPECT_NEAR(row.log_ratio, 0.0, 1e-12);
    sum0 += row.p_prior;
    sum1 += row.p_tilted;
  }
  EXPECT_NEAR(sum0, 1.0, 1e-12);
  EXPECT_NEAR(sum1, 1.0, 1e-12);

  const TiltReport tilted = posterior_tilt_check(d, 1, 0.1);
  double total = 0;
  for (const auto& row : tilted.rows) {
    total += row.p_tilted;
    for (auto i : d.train_idx) EXPECT_EQ(row.f[i], d.target[i]);
    EXPECT_EQ(row.k_dnf, k_dnf(row.f));
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(tilted.spearman, 0.0);
  EXPECT_THROW(posterior_tilt_check(make_dataset(generate({ParityFamily{1}, 0}, 5), 4, 1), 1, 0.1),
               BudgetExceeded);
}

TEST(Tilt, Spearman) {
  const std::vector<double> a{1, 2, 3, 4}, b{10, 20, 30, 40}, c{4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(a, b), 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, c), -1.0);
  const std::vector<double> ties{1, 1, 2, 2};
  EXPECT_NEAR(spearman(ties, a), 0.894427190999916, 1e-12);
}
