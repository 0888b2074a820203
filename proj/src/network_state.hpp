#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boolbias/dfcn.hpp"

namespace boolbias::detail {

/// A DFCN with cached per-row truth tables and per-input coverage counts,
/// so the output table after a single move costs O(2^n / 64) words.
class NetworkState {
 public:
  explicit NetworkState(const DfcnParams& p);

  const DfcnParams& params() const { return p_; }
  std::span<const std::uint64_t> output() const { return output_; }
  const WeightNorm& norm() const { return norm_; }
  std::size_t words() const { return words_; }

  int norm_delta(const Move& m) const;
  /// Writes the output table the network would have after `m`.
  void output_after(const Move& m, std::uint64_t* out) const;
  void apply(const Move& m);

 private:
  void compute_row(int row, int col, std::int8_t value, std::uint64_t* out) const;
  void rebuild_output();

  DfcnParams p_;
  std::size_t words_;
  std::uint64_t mask_;
  std::vector<std::uint64_t> vars_;  // n x words, x_{c+1} per column c
  std::vector<std::uint64_t> rows_;  // width x words, clause table per row
  std::vector<std::uint32_t> count_; // active rows covering each input
  std::vector<std::uint64_t> covered_;
  std::vector<std::uint64_t> single_;
  std::vector<std::uint64_t> output_;
  mutable std::vector<std::uint64_t> scratch_;
  WeightNorm norm_;
};

}  // namespace boolbias::detail
