#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "boolbias/boolean_function.hpp"
#include "boolbias/dnf.hpp"

namespace boolbias {

inline constexpr int kMaxExactInputs = 12;

enum class Objective { Literals, Clauses, LiteralsPlusClauses };

/// Indices not listed in on_set or dc_set form the off-set.
struct MinDnfRequest {
  int n = 1;
  std::vector<std::size_t> on_set;
  std::vector<std::size_t> dc_set;
  bool allow_negation = false;
};

/// Certified-minimal DNF for the objective. Among equal-cost answers the
/// clause list is the lexicographically smallest under clause_less; with
/// allow_negation, ties between polarities go to the one with fewer
/// literals, then fewer clauses, then beta = +1.
/// Throws BudgetExceeded for n > kMaxExactInputs.
Dnf min_dnf(const MinDnfRequest& req, Objective objective);
Dnf min_dnf(const BooleanFunction& f, Objective objective, bool allow_negation = true);

/// Cost of a DNF under an objective. Inactive clauses are not counted.
int objective_value(const Dnf& d, Objective objective);

int k_dnf(const BooleanFunction& f);
int k_theta(const BooleanFunction& f);
int k_clause(const BooleanFunction& f);

/// Number of words in the LZ76 exhaustive-history parse of s. The final
/// word is counted even when it already occurred.
int lz76_word_count(std::string_view s);
/// (log2 |s| / 2) * (words(s) + words(reverse s)).
double k_lz(std::string_view s);
double k_lz(const BooleanFunction& f);

struct ComplexityReport {
  int n = 0;
  int k_dnf = 0;
  int k_theta = 0;
  int k_clause = 0;
  double k_lz = 0.0;
};

/// Checks k_dnf + ceil(k_dnf/n) <= k_theta <= k_dnf + 2^ceil(log2 k_dnf)
/// and ceil(k_dnf/n) <= k_clause/2 (trivially true when k_dnf = 0).
bool sandwich_holds(const ComplexityReport& r);

ComplexityReport complexity_report(const BooleanFunction& f);

}  // namespace boolbias
