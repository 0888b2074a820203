#include <algorithm>
#include <string>
#include <tuple>

#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "set_cover.hpp"

namespace boolbias {

namespace {

enum : std::uint8_t { kOff = 0, kOn = 1, kDontCare = 2 };

int clause_cost(const Clause& c, Objective objective) {
  switch (objective) {
    case Objective::Literals: return c.literal_count();
    case Objective::Clauses: return 1;
    case Objective::LiteralsPlusClauses: return c.literal_count() + 1;
  }
  return 0;
}

// Cubes are base-3 numbers with one digit per index bit: 0 and 1 fix the
// bit, 2 leaves it free.
std::vector<Clause> prime_implicants(int n, const std::vector<std::uint8_t>& label) {
  std::size_t cubes = 1;
  std::vector<std::size_t> pow3(n + 1, 1);
  for (int j = 0; j < n; ++j) {
    pow3[j + 1] = pow3[j] * 3;
  }
  cubes = pow3[n];

  std::vector<std::uint8_t> ok(cubes), has_on(cubes);
  for (std::size_t c = 0; c < cubes; ++c) {
    std::size_t rest = c;
    int free_digit = -1;
    std::size_t point = 0;
    for (int j = 0; j < n; ++j) {
      const std::size_t d = rest % 3;
      rest /= 3;
      if (d == 2) {
        free_digit = j;
        break;
      }
      point |= d << j;
    }
    if (free_digit < 0) {
      ok[c] = label[point] != kOff;
      has_on[c] = label[point] == kOn;
    } else {
      const std::size_t zero = c - 2 * pow3[free_digit];
      const std::size_t one = c - pow3[free_digit];
      ok[c] = ok[zero] && ok[one];
      has_on[c] = has_on[zero] || has_on[one];
    }
  }

  std::vector<Clause> primes;
  for (std::size_t c = 0; c < cubes; ++c) {
    if (!ok[c] || !has_on[c]) continue;
    bool prime = true;
    Clause clause;
    std::size_t rest = c;
    for (int j = 0; j < n; ++j) {
      const std::size_t d = rest % 3;
      rest /= 3;
      if (d == 2) continue;
      if (ok[c + (2 - d) * pow3[j]]) {
        prime = false;
        break;
      }
      (d == 1 ? clause.pos_mask : clause.neg_mask) |= 1u << j;
    }
    if (prime) primes.push_back(clause);
  }
  std::sort(primes.begin(), primes.end(), clause_less);
  return primes;
}

struct Candidate {
  Dnf dnf;
  int cost = 0;
  int literals = 0;
  int clauses = 0;
};

Candidate minimize_one(int n, int beta, const std::vector<std::uint8_t>& label,
                       Objective objective) {
  Candidate out;
  out.dnf.n = n;
  out.dnf.beta = beta;

  std::vector<std::size_t> on_points;
  bool any_off = false;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] == kOn) on_points.push_back(i);
    if (label[i] == kOff) any_off = true;
  }
  if (on_points.empty()) return out;
  if (!any_off) {
    out.dnf.clauses.push_back(Clause::tautology());
    out.cost = objective == Objective::Literals ? 0 : 1;
    out.clauses = 1;
    return out;
  }

  const std::vector<Clause> primes = prime_implicants(n, label);
  std::vector<std::uint32_t> element_of(label.size(), 0);
  for (std::size_t e = 0; e < on_points.size(); ++e) {
    element_of[on_points[e]] = static_cast<std::uint32_t>(e);
  }

  const std::uint32_t full = (1u << n) - 1;
  std::vector<detail::CoverCandidate> sets(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const Clause& p = primes[i];
    const std::uint32_t free_bits = full & ~(p.pos_mask | p.neg_mask);
    std::uint32_t sub = 0;
    do {
      const std::size_t point = p.pos_mask | sub;
      if (label[point] == kOn) sets[i].elements.push_back(element_of[point]);
      sub = (sub - free_bits) & free_bits;
    } while (sub != 0);
    sets[i].cost = clause_cost(p, objective);
  }

  for (std::size_t i : detail::solve_min_cover(on_points.size(), sets)) {
    out.dnf.clauses.push_back(primes[i]);
  }
  out.literals = dnf_length(out.dnf);
  out.clauses = static_cast<int>(out.dnf.clauses.size());
  out.cost = objective_value(out.dnf, objective);
  return out;
}

void check_inputs(int n) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (n > kMaxExactInputs) {
    throw BudgetExceeded("exact minimization supports n <= " +
                         std::to_string(kMaxExactInputs) + ", got " + std::to_string(n));
  }
}

Dnf minimize_labels(int n, const std::vector<std::uint8_t>& label, bool allow_negation,
                    Objective objective) {
  Candidate best = minimize_one(n, 1, label, objective);
  if (allow_negation) {
    std::vector<std::uint8_t> swapped(label);
    for (auto& l : swapped) {
      if (l != kDontCare) l = l == kOn ? kOff : kOn;
    }
    Candidate neg = minimize_one(n, -1, swapped, objective);
    if (std::tie(neg.cost, neg.literals, neg.clauses) <
        std::tie(best.cost, best.literals, best.clauses)) {
      best = std::move(neg);
    }
  }
  return best.dnf;
}

}  // namespace

int objective_value(const Dnf& d, Objective objective) {
  int total = 0;
  for (const Clause& c : d.clauses) {
    if (!c.inactive()) total += clause_cost(c, objective);
  }
  return total;
}

Dnf min_dnf(const MinDnfRequest& req, Objective objective) {
  check_inputs(req.n);
  const std::size_t size = std::size_t{1} << req.n;
  std::vector<std::uint8_t> label(size, kOff);
  for (std::size_t i : req.dc_set) {
    if (i >= size) throw InvalidArgument("don't-care index out of range");
    label[i] = kDontCare;
  }
  for (std::size_t i : req.on_set) {
    if (i >= size) throw InvalidArgument("on-set index out of range");
    if (label[i] == kDontCare) throw InvalidArgument("on-set and don't-care set overlap");
    label[i] = kOn;
  }
  return minimize_labels(req.n, label, req.allow_negation, objective);
}

Dnf min_dnf(const BooleanFunction& f, Objective objective, bool allow_negation) {
  check_inputs(f.n());
  std::vector<std::uint8_t> label(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) label[i] = f[i] ? kOn : kOff;
  return minimize_labels(f.n(), label, allow_negation, objective);
}

}  // namespace boolbias
