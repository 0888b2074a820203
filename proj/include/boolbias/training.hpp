#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "boolbias/boolean_function.hpp"
#include "boolbias/dfcn.hpp"
#include "boolbias/dnf.hpp"

namespace boolbias {

struct Dataset {
  BooleanFunction target;
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  std::uint64_t seed = 0;
};

/// The first m inputs of a seeded shuffle of [0, 2^n) form the training
/// set. Requires 0 < m < 2^n.
Dataset make_dataset(const BooleanFunction& target, std::size_t m, std::uint64_t seed);
/// Explicit training inputs; everything else is test data.
Dataset make_dataset(const BooleanFunction& target, std::vector<std::size_t> train_idx);

/// Mean squared error on {0,1} outputs, i.e. the error rate on `subset`.
double loss(const DfcnParams& p, const Dataset& d, std::span<const std::size_t> subset);
double accuracy(const BooleanFunction& pred, const BooleanFunction& target,
                std::span<const std::size_t> subset);

/// Every field that changes the trajectory is part of the config, so equal
/// configs give bit-identical results.
struct McmcConfig {
  double kappa = 1000.0;
  double lambda = 0.0;
  std::uint64_t steps = 200'000;
  std::size_t batch = 0;  // 0 = full training set
  std::uint64_t seed = 0;
  bool include_beta = false;
  int initial_beta = 0;  // 0 = drawn at random
  /// Stop once training error has been zero for this many consecutive
  /// steps; 0 disables early stopping.
  std::uint64_t early_stop_window = 0;
  std::uint64_t trace_every = 1;
  std::vector<double> snapshot_test_acc;
  std::vector<std::uint64_t> snapshot_steps;
  /// Called with the chain state after every step (accepted or not).
  /// Read-only; does not affect the trajectory.
  std::function<void(const DfcnParams&)> observer;
};

struct GreedyConfig {
  double p = 0.3;
  std::uint64_t steps = 2'000;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  bool include_beta = false;
  int initial_beta = 1;
  /// Also consider staying put; makes full-batch accuracy monotone.
  bool keep_current = false;
  std::uint64_t early_stop_window = 0;
  std::uint64_t trace_every = 1;
  std::vector<double> snapshot_test_acc;
  std::vector<std::uint64_t> snapshot_steps;
};

struct TraceRecord {
  std::uint64_t step = 0;
  double loss = 0.0;  // on the step's batch
  double train_acc = 0.0;
  double test_acc = 0.0;
  int norm_w1 = 0;
  int norm_w2 = 0;
};

struct Snapshot {
  std::uint64_t step = 0;
  double test_acc = 0.0;
  DfcnParams params;
};

struct TrainTrace {
  std::vector<TraceRecord> records;
  std::vector<Snapshot> snapshots;
};

struct TrainResult {
  DfcnParams params;
  BooleanFunction prediction;
  TrainTrace trace;
  std::uint64_t steps_run = 0;
  std::uint64_t accepted = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  WeightNorm norm;
};

/// The structured initial state: uniform ternary W1, uniform w2 in {0, 1},
/// beta fixed or drawn at random when initial_beta is 0.
DfcnParams initial_params(int n, int width, int initial_beta, CounterRng& rng);

/// Metropolis-Hastings over single-coordinate moves; returns the last state.
TrainResult mcmc_train(const Dataset& d, int alpha_w, const McmcConfig& cfg);
/// Best-accuracy neighbor selection with a min-norm preference.
TrainResult greedy_train(const Dataset& d, int alpha_w, const GreedyConfig& cfg);

struct OracleResult {
  Dnf dnf;
  BooleanFunction prediction;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

/// Literal-minimal beta = +1 DNF consistent with the training labels, with
/// test inputs as don't-cares.
OracleResult oracle_train(const Dataset& d);

struct TiltRow {
  BooleanFunction f;
  double p_prior = 0.0;      // P_0(f | S)
  double p_tilted = 0.0;     // P_lambda(f | S)
  double log_ratio = 0.0;
  int k_dnf = 0;
};

struct TiltReport {
  std::vector<TiltRow> rows;  // interpolating functions with nonzero mass
  double spearman = 0.0;      // log_ratio vs -lambda k_dnf; NaN if undefined
};

/// Exact weight-decay posterior over functions consistent with the
/// training data, compared with the untilted posterior.
TiltReport posterior_tilt_check(const Dataset& d, int alpha_w, double lambda);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace boolbias
