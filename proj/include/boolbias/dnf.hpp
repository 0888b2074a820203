#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "boolbias/boolean_function.hpp"

namespace boolbias {

/// A conjunction of literals stored as two masks over the bits of an input
/// index: bit (n - i) of pos_mask means x_i appears positively, the same bit
/// of neg_mask means !x_i appears. Masks are therefore tied to n.
///
/// Both masks zero is the inactive clause, which is False everywhere.
/// `always_true` marks the tautology clause produced by a DFCN hidden unit
/// whose weight row is zero but whose output weight is active.
struct Clause {
  std::uint32_t pos_mask = 0;
  std::uint32_t neg_mask = 0;
  bool always_true = false;

  static Clause tautology() { return Clause{0, 0, true}; }
  /// The clause that is true exactly on input `index`.
  static Clause minterm(std::size_t index, int n);

  bool inactive() const { return !always_true && pos_mask == 0 && neg_mask == 0; }
  int literal_count() const;

  bool covers(std::size_t index) const {
    if (always_true) return true;
    if (pos_mask == 0 && neg_mask == 0) return false;
    return (index & pos_mask) == pos_mask && (index & neg_mask) == 0;
  }

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Deterministic clause order: (literal count, pos_mask, neg_mask).
bool clause_less(const Clause& a, const Clause& b);

bool clause_eval(const Clause& c, std::span<const std::uint8_t> v);

/// beta * [C_1 | C_2 | ...]; beta = -1 complements the disjunction.
struct Dnf {
  int n = 1;
  int beta = 1;
  std::vector<Clause> clauses;

  bool eval_index(std::size_t index) const;
  friend bool operator==(const Dnf&, const Dnf&) = default;
};

bool dnf_eval(const Dnf& d, std::span<const std::uint8_t> v);
BooleanFunction truth_table(const Dnf& d);

/// Total literal count; inactive and tautology clauses contribute 0.
int dnf_length(const Dnf& d);
/// Clause truth table (words) for a clause over n inputs.
std::vector<std::uint64_t> clause_table(const Clause& c, int n);

/// One full-length clause per minority-output row, ascending input order.
/// Ties (exactly 2^(n-1) ones) resolve to beta = +1.
Dnf canonical_expansion(const BooleanFunction& f);

/// Drops inactive clauses, sorts by clause_less and removes duplicates.
Dnf normalize(const Dnf& d);

/// Text form `[-](l&l&...)|(...)` with literals `xi` / `!xi`; a leading
/// `-` means beta = -1. `()` is the inactive clause and `(1)` the
/// tautology clause. A DNF without clauses prints as the empty string
/// (or `-`).
std::string to_text(const Dnf& d);
Dnf parse_dnf(std::string_view text, int n);

}  // namespace boolbias
