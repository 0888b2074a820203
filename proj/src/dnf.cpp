#include "boolbias/dnf.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "boolbias/error.hpp"

namespace boolbias {

Clause Clause::minterm(std::size_t index, int n) {
  const std::uint32_t all = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  const auto pos = static_cast<std::uint32_t>(index) & all;
  return Clause{pos, all & ~pos, false};
}

int Clause::literal_count() const {
  return std::popcount(pos_mask) + std::popcount(neg_mask);
}

bool clause_less(const Clause& a, const Clause& b) {
  const int la = a.literal_count();
  const int lb = b.literal_count();
  if (la != lb) return la < lb;
  if (a.always_true != b.always_true) return a.always_true;
  if (a.pos_mask != b.pos_mask) return a.pos_mask < b.pos_mask;
  return a.neg_mask < b.neg_mask;
}

bool clause_eval(const Clause& c, std::span<const std::uint8_t> v) {
  return c.covers(input_index(v));
}

bool Dnf::eval_index(std::size_t index) const {
  bool any = false;
  for (const Clause& c : clauses) {
    if (c.covers(index)) {
      any = true;
      break;
    }
  }
  return beta > 0 ? any : !any;
}

bool dnf_eval(const Dnf& d, std::span<const std::uint8_t> v) {
  if (static_cast<int>(v.size()) != d.n) {
    throw InvalidArgument("input dimension does not match DNF");
  }
  return d.eval_index(input_index(v));
}

std::vector<std::uint64_t> clause_table(const Clause& c, int n) {
  std::vector<std::uint64_t> table(table_words(n), 0);
  if (c.inactive()) return table;
  std::fill(table.begin(), table.end(), ~0ull);
  if (!c.always_true) {
    for (int var = 1; var <= n; ++var) {
      const std::uint32_t bit = 1u << (n - var);
      if (!((c.pos_mask | c.neg_mask) & bit)) continue;
      const auto v = variable_table(n, var);
      const bool positive = (c.pos_mask & bit) != 0;
      for (std::size_t w = 0; w < table.size(); ++w) {
        table[w] &= positive ? v[w] : ~v[w];
      }
    }
  }
  if (n < 6) table[0] &= low_table_mask(n);
  return table;
}

BooleanFunction truth_table(const Dnf& d) {
  std::vector<std::uint64_t> acc(table_words(d.n), 0);
  for (const Clause& c : d.clauses) {
    const auto t = clause_table(c, d.n);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= t[w];
  }
  BooleanFunction f = BooleanFunction::from_words(d.n, acc);
  return d.beta > 0 ? f : f.complement();
}

int dnf_length(const Dnf& d) {
  int total = 0;
  for (const Clause& c : d.clauses) {
    if (!c.always_true) total += c.literal_count();
  }
  return total;
}

Dnf canonical_expansion(const BooleanFunction& f) {
  const int n = f.n();
  const std::size_t ones = f.hamming_weight();
  Dnf d;
  d.n = n;
  d.beta = ones <= f.size() / 2 ? 1 : -1;
  const bool wanted = d.beta > 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == wanted) d.clauses.push_back(Clause::minterm(i, n));
  }
  return d;
}

Dnf normalize(const Dnf& d) {
  Dnf out{d.n, d.beta, {}};
  for (const Clause& c : d.clauses) {
    if (!c.inactive()) out.clauses.push_back(c);
  }
  std::sort(out.clauses.begin(), out.clauses.end(), clause_less);
  out.clauses.erase(std::unique(out.clauses.begin(), out.clauses.end()),
                    out.clauses.end());
  return out;
}

std::string to_text(const Dnf& d) {
  std::string out = d.beta < 0 ? "-" : "";
  for (std::size_t j = 0; j < d.clauses.size(); ++j) {
    const Clause& c = d.clauses[j];
    if (j > 0) out += '|';
    out += '(';
    if (c.always_true) {
      out += '1';
    } else {
      bool first = true;
      for (int var = 1; var <= d.n; ++var) {
        const std::uint32_t bit = 1u << (d.n - var);
        if (!((c.pos_mask | c.neg_mask) & bit)) continue;
        if (!first) out += '&';
        first = false;
        if (c.neg_mask & bit) out += '!';
        out += 'x';
        out += std::to_string(var);
      }
    }
    out += ')';
  }
  return out;
}

Dnf parse_dnf(std::string_view text, int n) {
  if (n < 1 || n > kMaxInputs) throw InvalidArgument("DNF dimension out of range");
  Dnf d;
  d.n = n;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> Dnf {
    throw InvalidArgument("DNF parse error at offset " + std::to_string(pos) + ": " + what);
  };
  skip_space();
  if (pos < text.size() && text[pos] == '-') {
    d.beta = -1;
    ++pos;
  }
  skip_space();
  bool expect_clause = pos < text.size();
  while (expect_clause) {
    skip_space();
    if (pos >= text.size() || text[pos] != '(') return fail("expected '('");
    ++pos;
    Clause c;
    skip_space();
    if (pos < text.size() && text[pos] == '1') {
      c = Clause::tautology();
      ++pos;
      skip_space();
    } else {
      bool first = true;
      while (pos < text.size() && text[pos] != ')') {
        if (!first) {
          if (text[pos] != '&') return fail("expected '&'");
          ++pos;
          skip_space();
        }
        first = false;
        bool negated = false;
        if (pos < text.size() && text[pos] == '!') {
          negated = true;
          ++pos;
        }
        if (pos >= text.size() || text[pos] != 'x') return fail("expected literal");
        ++pos;
        std::size_t digits = 0;
        int var = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          var = var * 10 + (text[pos] - '0');
          ++pos;
          if (++digits > 3) return fail("variable index too long");
        }
        if (digits == 0 || var < 1 || var > n) return fail("variable index out of range");
        const std::uint32_t bit = 1u << (n - var);
        if ((c.pos_mask | c.neg_mask) & bit) return fail("variable repeated in clause");
        (negated ? c.neg_mask : c.pos_mask) |= bit;
        skip_space();
      }
    }
    if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
    ++pos;
    d.clauses.push_back(c);
    skip_space();
    if (pos < text.size()) {
      if (text[pos] != '|') return fail("expected '|'");
      ++pos;
    } else {
      expect_clause = false;
    }
  }
  return d;
}

}  // namespace boolbias
