#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "boolbias/boolean_function.hpp"
#include "boolbias/dnf.hpp"
#include "boolbias/rng.hpp"

namespace boolbias {

/// Depth-2 discrete network. w1 is width x n, row-major, entries in
/// {-1, 0, +1}; column j holds the weight of variable x_{j+1}. w2 is stored
/// unsigned in {0, 1}; the signed second-layer weight is beta * w2.
///
/// Biases are derived, never stored: b1_i = 1 - #(+1 entries in row i) and
/// b2 = (1 - beta) / 2.
struct DfcnParams {
  int n = 1;
  int width = 1;
  std::vector<std::int8_t> w1;
  std::vector<std::uint8_t> w2;
  int beta = 1;

  static DfcnParams zeros(int n, int width, int beta = 1);

  std::int8_t weight(int row, int col) const {
    return w1[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(col)];
  }
  std::int8_t& weight(int row, int col) {
    return w1[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(col)];
  }
  std::span<const std::int8_t> row(int r) const {
    return {w1.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(n),
            static_cast<std::size_t>(n)};
  }
  int bias1(int row) const;
  int bias2() const { return (1 - beta) / 2; }

  friend bool operator==(const DfcnParams&, const DfcnParams&) = default;
};

/// alpha_w * 2^(n-1).
int default_width(int n, int alpha_w);

struct WeightNorm {
  int norm_w1 = 0;
  int norm_w2 = 0;
  int total = 0;
};

/// Exact integer forward pass, literally as the network is defined.
bool forward(const DfcnParams& p, std::span<const std::uint8_t> v);

/// Hidden unit i as a clause: (pos_mask, neg_mask) over input-index bits.
/// A zero row compiles to the tautology clause (it fires everywhere).
Clause row_clause(const DfcnParams& p, int row);

/// Truth table over all 2^n inputs, evaluated row-batched with word-level
/// bit operations.
BooleanFunction truth_table(const DfcnParams& p);

/// Row i encodes clause i, rows beyond the clause count are zero with
/// w2 = 0. Inactive clauses become zero rows with w2 = 0 and the tautology
/// marker becomes a zero row with w2 = 1.
DfcnParams dnf_to_dfcn(const Dnf& d, int width);

/// One clause per row with w2 = 1, in row order.
Dnf dfcn_to_dnf(const DfcnParams& p);

WeightNorm weight_norm(const DfcnParams& p);

/// Draw from the parameter-space prior: i.i.d. uniform ternary w1, fair
/// coin for beta, w2_i = 1 exactly when row i is nonzero.
DfcnParams sample_prior_params(int n, int alpha_w, CounterRng& rng);

/// A single-coordinate change.
struct Move {
  enum class Kind : std::uint8_t { W1, W2, Beta };
  Kind kind = Kind::W1;
  int row = 0;
  int col = 0;
  std::int8_t value = 0;  // new w1 entry or new w2 value

  friend bool operator==(const Move&, const Move&) = default;
};

/// 2 * width * n + width, plus one when beta flips are included.
std::size_t neighbor_count(const DfcnParams& p, bool include_beta = false);
/// The i-th move in the canonical neighbor order: for each w1 entry
/// (row-major) its two alternative values in ascending order, then each
/// w2 toggle, then (optionally) the beta flip.
Move neighbor_move(const DfcnParams& p, std::size_t i);
std::vector<Move> neighbor_moves(const DfcnParams& p, bool include_beta = false);
DfcnParams apply_move(DfcnParams p, const Move& m);
void for_each_neighbor(const DfcnParams& p, bool include_beta,
                       const std::function<void(const DfcnParams&)>& visit);

/// Heatmap export: `path` gets width rows of n signed integers (CSV with a
/// header x1..xn); `path` + ".json" gets {beta, w2, step, test_accuracy}.
void write_heatmap(const DfcnParams& p, const std::filesystem::path& path,
                   std::int64_t step, double test_accuracy);

}  // namespace boolbias
