#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "boolbias/boolean_function.hpp"
#include "boolbias/complexity.hpp"

namespace boolbias {

inline constexpr int kMaxSampledInputs = 7;

/// Occurrences of one function, split by the sign of beta that produced it.
struct PriorEntry {
  BooleanFunction f;
  std::uint64_t count_pos = 0;
  std::uint64_t count_neg = 0;

  std::uint64_t count() const { return count_pos + count_neg; }
};

/// Function counts from sampling (total = draws) or exact enumeration
/// (total = 2 * 3^(n * width) parameter states). Entries are sorted by
/// function and hold only functions that occurred.
struct PriorEstimate {
  int n = 0;
  int alpha_w = 1;
  bool exact = false;
  std::uint64_t total = 0;
  std::vector<PriorEntry> entries;

  const PriorEntry* find(const BooleanFunction& f) const;
  std::uint64_t count(const BooleanFunction& f) const;
  double probability(const BooleanFunction& f) const;
  /// Conditional on the sign of beta; each sign has total / 2 expected
  /// (exact) states.
  double probability_given_beta(const BooleanFunction& f, int beta) const;
};

struct SampleOptions {
  std::uint64_t seed = 0;
  /// Draw i uses RNG stream first_draw + i, so ranges can be sampled
  /// separately and merged.
  std::uint64_t first_draw = 0;
  unsigned threads = 1;
  /// Abort with BudgetExceeded when more distinct functions are seen.
  std::size_t max_distinct = 50'000'000;
};

/// Monte Carlo over the parameter prior. Counts depend only on the seed
/// and the draw range, never on the thread count.
PriorEstimate sample_prior(int n, int alpha_w, std::uint64_t draws,
                           const SampleOptions& options = {});

/// Exact counts over every (w1, beta) state via a row-by-row convolution.
/// Needs a dense function index (n <= 4) and 3^(n * width) < 2^63.
PriorEstimate exact_prior(int n, int alpha_w);

/// Adds b's counts into a; both must describe the same (n, alpha_w).
void merge(PriorEstimate& a, const PriorEstimate& b);

/// 1 / (2^n ln2 R).
double zipf_reference(int n, std::uint64_t rank);

struct RankRow {
  std::uint64_t rank = 0;
  BooleanFunction f;
  std::uint64_t count = 0;
  double p_hat = 0.0;
  double zipf_ref = 0.0;
  std::optional<ComplexityReport> complexity;
};

/// Descending count, ties by function string; ranks 1..#entries.
std::vector<RankRow> rank_table(const PriorEstimate& est, bool with_complexity = false);

}  // namespace boolbias
