#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "boolbias/boolean_function.hpp"
#include "boolbias/dnf.hpp"

namespace boolbias::detail {

/// Truth table of every ternary weight row, indexed by sum_j (w_j + 1) 3^j
/// over columns j. The zero row maps to the empty table: under the prior
/// its output weight is zero.
class RowTables {
 public:
  explicit RowTables(int n) : words_(table_words(n)) {
    std::size_t rows = 1;
    for (int j = 0; j < n; ++j) rows *= 3;
    tables_.assign(rows * words_, 0);
    nonzeros_.assign(rows, 0);
    for (std::size_t id = 0; id < rows; ++id) {
      Clause c;
      std::size_t rest = id;
      for (int j = 0; j < n; ++j) {
        const int w = static_cast<int>(rest % 3) - 1;
        rest /= 3;
        const std::uint32_t bit = 1u << (n - 1 - j);
        if (w > 0) c.pos_mask |= bit;
        if (w < 0) c.neg_mask |= bit;
      }
      if (c.inactive()) continue;
      nonzeros_[id] = static_cast<std::uint8_t>(c.literal_count());
      const auto t = clause_table(c, n);
      std::copy(t.begin(), t.end(), tables_.begin() + static_cast<std::ptrdiff_t>(id * words_));
    }
  }

  std::size_t rows() const { return nonzeros_.size(); }
  std::size_t words() const { return words_; }
  const std::uint64_t* table(std::size_t id) const { return tables_.data() + id * words_; }
  /// Nonzero entries of the row (its clause's literal count).
  int nonzeros(std::size_t id) const { return nonzeros_[id]; }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> tables_;
  std::vector<std::uint8_t> nonzeros_;
};

}  // namespace boolbias::detail
