#include "boolbias/training.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "network_state.hpp"

namespace boolbias {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::uint64_t> index_mask(int n, std::span<const std::size_t> idx) {
  std::vector<std::uint64_t> mask(table_words(n), 0);
  for (std::size_t i : idx) mask[i / 64] |= 1ull << (i % 64);
  return mask;
}

int count_correct(std::span<const std::uint64_t> out, std::span<const std::uint64_t> target,
                  std::span<const std::uint64_t> mask) {
  int total = 0;
  for (std::size_t w = 0; w < mask.size(); ++w) {
    total += std::popcount(~(out[w] ^ target[w]) & mask[w]);
  }
  return total;
}

// Shared per-run bookkeeping: data masks, batch draws, trace, snapshots and
// early stopping.
class Run {
 public:
  template <class Config>
  Run(const Dataset& d, const Config& cfg, detail::NetworkState& state)
      : data_(d),
        state_(state),
        target_(d.target.words().begin(), d.target.words().end()),
        train_(index_mask(d.target.n(), d.train_idx)),
        test_(index_mask(d.target.n(), d.test_idx)),
        batch_(train_),
        order_(d.train_idx),
        batch_size_(cfg.batch == 0 || cfg.batch >= d.train_idx.size() ? 0 : cfg.batch),
        trace_every_(std::max<std::uint64_t>(cfg.trace_every, 1)),
        steps_(cfg.steps),
        early_window_(cfg.early_stop_window),
        thresholds_(cfg.snapshot_test_acc),
        snapshot_steps_(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end()) {
    std::sort(thresholds_.begin(), thresholds_.end());
    if (d.train_idx.empty()) throw InvalidArgument("training set is empty");
  }

  /// Batch mask for the next step (the training mask for full batch).
  std::span<const std::uint64_t> next_batch(CounterRng& rng) {
    if (batch_size_ == 0) return train_;
    std::fill(batch_.begin(), batch_.end(), 0);
    for (std::size_t i = 0; i < batch_size_; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(order_.size() - i));
      std::swap(order_[i], order_[j]);
      batch_[order_[i] / 64] |= 1ull << (order_[i] % 64);
    }
    return batch_;
  }

  int correct(std::span<const std::uint64_t> out, std::span<const std::uint64_t> mask) const {
    return count_correct(out, target_, mask);
  }

  double train_acc() const {
    return static_cast<double>(correct(state_.output(), train_)) /
           static_cast<double>(data_.train_idx.size());
  }

  double test_acc() const {
    if (data_.test_idx.empty()) return kNaN;
    return static_cast<double>(correct(state_.output(), test_)) /
           static_cast<double>(data_.test_idx.size());
  }

  void begin(TrainResult& result) {
    if (snapshot_steps_.count(0)) snap(result, 0, test_acc());
  }

  /// Records step `step`; returns false when training should stop.
  bool record(TrainResult& result, std::uint64_t step, double batch_loss) {
    const double train = train_acc();
    const double test = test_acc();
    if (step % trace_every_ == 0 || step == steps_) {
      const WeightNorm& norm = state_.norm();
      result.trace.records.push_back(
          {step, batch_loss, train, test, norm.norm_w1, norm.norm_w2});
    }
    if (snapshot_steps_.count(step)) snap(result, step, test);
    while (next_threshold_ < thresholds_.size() && !std::isnan(test) &&
           test >= thresholds_[next_threshold_]) {
      snap(result, step, test);
      ++next_threshold_;
    }
    result.steps_run = step;
    if (early_window_ > 0) {
      perfect_run_ = train == 1.0 ? perfect_run_ + 1 : 0;
      if (perfect_run_ >= early_window_) {
        if (result.trace.records.empty() || result.trace.records.back().step != step) {
          const WeightNorm& norm = state_.norm();
          result.trace.records.push_back(
              {step, batch_loss, train, test, norm.norm_w1, norm.norm_w2});
        }
        return false;
      }
    }
    return true;
  }

  void finish(TrainResult& result) const {
    result.params = state_.params();
    result.prediction = BooleanFunction::from_words(data_.target.n(), state_.output());
    result.train_acc = train_acc();
    result.test_acc = test_acc();
    result.norm = state_.norm();
  }

 private:
  void snap(TrainResult& result, std::uint64_t step, double test) {
    if (!result.trace.snapshots.empty() && result.trace.snapshots.back().step == step) return;
    result.trace.snapshots.push_back({step, test, state_.params()});
  }

  const Dataset& data_;
  detail::NetworkState& state_;
  std::vector<std::uint64_t> target_;
  std::vector<std::uint64_t> train_;
  std::vector<std::uint64_t> test_;
  std::vector<std::uint64_t> batch_;
  std::vector<std::size_t> order_;
  std::size_t batch_size_;
  std::uint64_t trace_every_;
  std::uint64_t steps_;
  std::uint64_t early_window_;
  std::vector<double> thresholds_;
  std::size_t next_threshold_ = 0;
  std::set<std::uint64_t> snapshot_steps_;
  std::uint64_t perfect_run_ = 0;
};

void check_dataset(const Dataset& d) {
  const std::size_t size = d.target.size();
  std::vector<char> seen(size, 0);
  for (auto list : {&d.train_idx, &d.test_idx}) {
    for (std::size_t i : *list) {
      if (i >= size || seen[i]) throw InvalidArgument("dataset indices must partition [0, 2^n)");
      seen[i] = 1;
    }
  }
  if (d.train_idx.size() + d.test_idx.size() != size) {
    throw InvalidArgument("dataset indices must partition [0, 2^n)");
  }
}

void check_beta(int beta) {
  if (beta != 0 && beta != 1 && beta != -1) throw InvalidArgument("initial beta must be -1, 0 or 1");
}

}  // namespace

Dataset make_dataset(const BooleanFunction& target, std::size_t m, std::uint64_t seed) {
  const std::size_t size = target.size();
  if (m == 0 || m >= size) throw InvalidArgument("m must satisfy 0 < m < 2^n");
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(derive_seed(seed, 0x44415441ull));
  for (std::size_t i = 0; i + 1 < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(order[i], order[j]);
  }
  Dataset d;
  d.target = target;
  d.seed = seed;
  d.train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  d.test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(m), order.end());
  std::sort(d.train_idx.begin(), d.train_idx.end());
  std::sort(d.test_idx.begin(), d.test_idx.end());
  return d;
}

Dataset make_dataset(const BooleanFunction& target, std::vector<std::size_t> train_idx) {
  std::sort(train_idx.begin(), train_idx.end());
  if (train_idx.empty()) throw InvalidArgument("training set is empty");
  if (std::adjacent_find(train_idx.begin(), train_idx.end()) != train_idx.end() ||
      train_idx.back() >= target.size()) {
    throw InvalidArgument("training indices must be distinct and below 2^n");
  }
  Dataset d;
  d.target = target;
  std::size_t next = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (next < train_idx.size() && train_idx[next] == i) {
      ++next;
    } else {
      d.test_idx.push_back(i);
    }
  }
  d.train_idx = std::move(train_idx);
  return d;
}

double accuracy(const BooleanFunction& pred, const BooleanFunction& target,
                std::span<const std::size_t> subset) {
  if (subset.empty()) throw InvalidArgument("accuracy needs a non-empty subset");
  if (pred.n() != target.n()) throw InvalidArgument("dimension mismatch");
  std::size_t match = 0;
  for (std::size_t i : subset) {
    if (i >= target.size()) throw InvalidArgument("index out of range");
    match += pred[i] == target[i];
  }
  return static_cast<double>(match) / static_cast<double>(subset.size());
}

double loss(const DfcnParams& p, const Dataset& d, std::span<const std::size_t> subset) {
  if (subset.empty()) throw InvalidArgument("loss needs a non-empty subset");
  return 1.0 - accuracy(truth_table(p), d.target, subset);
}

DfcnParams initial_params(int n, int width, int initial_beta, CounterRng& rng) {
  check_beta(initial_beta);
  DfcnParams p = DfcnParams::zeros(n, width);
  for (auto& w : p.w1) w = static_cast<std::int8_t>(rng.ternary());
  for (auto& w : p.w2) w = rng.coin() ? 1 : 0;
  p.beta = initial_beta != 0 ? initial_beta : (rng.coin() ? 1 : -1);
  return p;
}

TrainResult mcmc_train(const Dataset& d, int alpha_w, const McmcConfig& cfg) {
  check_dataset(d);
  if (!(cfg.kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!(cfg.lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  const int n = d.target.n();
  CounterRng rng(derive_seed(cfg.seed, 0x4D434D43ull));
  detail::NetworkState state(initial_params(n, default_width(n, alpha_w), cfg.initial_beta, rng));
  Run run(d, cfg, state);
  TrainResult result;
  run.begin(result);

  const std::size_t neighbors = neighbor_count(state.params(), cfg.include_beta);
  std::vector<std::uint64_t> proposal(state.words());
  for (std::uint64_t step = 1; step <= cfg.steps; ++step) {
    const auto batch = run.next_batch(rng);
    int batch_size = 0;
    for (auto w : batch) batch_size += std::popcount(w);
    const int old_correct = run.correct(state.output(), batch);

    const Move move = neighbor_move(state.params(), static_cast<std::size_t>(rng.below(neighbors)));
    state.output_after(move, proposal.data());
    const int new_correct = run.correct(proposal, batch);

    const double delta_loss = static_cast<double>(old_correct - new_correct) / batch_size;
    const double log_alpha = -cfg.kappa * delta_loss - cfg.lambda * state.norm_delta(move);
    int current_correct = old_correct;
    if (log_alpha >= 0.0 || rng.uniform01() < std::exp(log_alpha)) {
      state.apply(move);
      ++result.accepted;
      current_correct = new_correct;
    }
    const double batch_loss = 1.0 - static_cast<double>(current_correct) / batch_size;
    if (cfg.observer) cfg.observer(state.params());
    if (!run.record(result, step, batch_loss)) break;
  }
  run.finish(result);
  return result;
}

TrainResult greedy_train(const Dataset& d, int alpha_w, const GreedyConfig& cfg) {
  check_dataset(d);
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw InvalidArgument("p must be in [0, 1]");
  const int n = d.target.n();
  CounterRng rng(derive_seed(cfg.seed, 0x47524459ull));
  detail::NetworkState state(initial_params(n, default_width(n, alpha_w), cfg.initial_beta, rng));
  Run run(d, cfg, state);
  TrainResult result;
  run.begin(result);

  const std::size_t neighbors = neighbor_count(state.params(), cfg.include_beta);
  const std::size_t stay = neighbors;  // pseudo-index for keeping the state
  std::vector<std::uint64_t> proposal(state.words());
  std::vector<std::size_t> best;
  std::vector<int> best_norms;
  for (std::uint64_t step = 1; step <= cfg.steps; ++step) {
    const auto batch = run.next_batch(rng);
    int batch_size = 0;
    for (auto w : batch) batch_size += std::popcount(w);

    best.clear();
    best_norms.clear();
    int best_correct = -1;
    auto consider = [&](std::size_t index, int correct, int norm) {
      if (correct < best_correct) return;
      if (correct > best_correct) {
        best_correct = correct;
        best.clear();
        best_norms.clear();
      }
      best.push_back(index);
      best_norms.push_back(norm);
    };
    const int current_norm = state.norm().total;
    for (std::size_t i = 0; i < neighbors; ++i) {
      const Move move = neighbor_move(state.params(), i);
      state.output_after(move, proposal.data());
      consider(i, run.correct(proposal, batch), current_norm + state.norm_delta(move));
    }
    if (cfg.keep_current) consider(stay, run.correct(state.output(), batch), current_norm);

    std::size_t pick;
    if (rng.uniform01() < cfg.p) {
      const int min_norm = *std::min_element(best_norms.begin(), best_norms.end());
      std::vector<std::size_t> lightest;
      for (std::size_t j = 0; j < best.size(); ++j) {
        if (best_norms[j] == min_norm) lightest.push_back(best[j]);
      }
      pick = lightest[static_cast<std::size_t>(rng.below(lightest.size()))];
    } else {
      pick = best[static_cast<std::size_t>(rng.below(best.size()))];
    }
    if (pick != stay) {
      state.apply(neighbor_move(state.params(), pick));
      ++result.accepted;
    }
    const double batch_loss = 1.0 - static_cast<double>(best_correct) / batch_size;
    if (!run.record(result, step, batch_loss)) break;
  }
  run.finish(result);
  return result;
}

OracleResult oracle_train(const Dataset& d) {
  check_dataset(d);
  MinDnfRequest req;
  req.n = d.target.n();
  req.dc_set = d.test_idx;
  for (std::size_t i : d.train_idx) {
    if (d.target[i]) req.on_set.push_back(i);
  }
  req.allow_negation = false;
  OracleResult out;
  out.dnf = min_dnf(req, Objective::Literals);
  out.prediction = truth_table(out.dnf);
  out.train_acc = accuracy(out.prediction, d.target, d.train_idx);
  out.test_acc = d.test_idx.empty() ? kNaN : accuracy(out.prediction, d.target, d.test_idx);
  return out;
}

}  // namespace boolbias
