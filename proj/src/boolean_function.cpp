#include "boolbias/boolean_function.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "boolbias/error.hpp"
#include "boolbias/rng.hpp"

namespace boolbias {

namespace {

constexpr std::uint64_t kLowVarMasks[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};

void check_n(int n) {
  if (n < 1 || n > kMaxInputs) {
    throw InvalidArgument("input dimension must be in [1, 16], got " +
                          std::to_string(n));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::size_t input_index(std::span<const std::uint8_t> v) {
  std::size_t index = 0;
  for (std::uint8_t bit : v) {
    if (bit > 1) throw InvalidArgument("input components must be 0 or 1");
    index = (index << 1) | bit;
  }
  return index;
}

std::vector<std::uint8_t> input_vector(std::size_t index, int n) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((index >> (n - 1 - i)) & 1u);
  }
  return v;
}

std::uint64_t low_table_mask(int n) {
  return n >= 6 ? ~0ull : ((1ull << (1u << n)) - 1);
}

std::vector<std::uint64_t> variable_table(int n, int var) {
  check_n(n);
  if (var < 1 || var > n) throw InvalidArgument("variable out of range");
  const int bit = n - var;  // position of x_var inside the input index
  std::vector<std::uint64_t> words(table_words(n));
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (bit < 6) {
      words[w] = kLowVarMasks[bit];
    } else {
      words[w] = ((w >> (bit - 6)) & 1u) ? ~0ull : 0ull;
    }
  }
  if (n < 6) words[0] &= low_table_mask(n);
  return words;
}

BooleanFunction::BooleanFunction(int n) : n_(n) {
  check_n(n);
  words_.assign(table_words(n), 0);
}

BooleanFunction BooleanFunction::constant(int n, bool value) {
  BooleanFunction f(n);
  if (value) {
    std::fill(f.words_.begin(), f.words_.end(), ~0ull);
    f.clear_padding();
  }
  return f;
}

BooleanFunction BooleanFunction::from_string(std::string_view bits) {
  const std::size_t len = bits.size();
  if (len < 2 || !std::has_single_bit(len)) {
    throw InvalidArgument("function string length must be a power of two >= 2, got " +
                          std::to_string(len));
  }
  const int n = std::countr_zero(len);
  BooleanFunction f(n);
  for (std::size_t i = 0; i < len; ++i) {
    const char c = bits[i];
    if (c == '1') {
      f.words_[i >> 6] |= 1ull << (i & 63);
    } else if (c != '0') {
      throw InvalidArgument(std::string("illegal character '") + c +
                            "' in function string");
    }
  }
  return f;
}

BooleanFunction BooleanFunction::from_hex(std::string_view hex, int n) {
  check_n(n);
  const std::size_t bits = std::size_t{1} << n;
  const std::size_t bytes = (bits + 7) / 8;
  if (hex.size() != 2 * bytes) {
    throw InvalidArgument("hex text for n=" + std::to_string(n) + " must have " +
                          std::to_string(2 * bytes) + " characters");
  }
  BooleanFunction f(n);
  for (std::size_t b = 0; b < bytes; ++b) {
    const int hi = hex_value(hex[2 * b]);
    const int lo = hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw InvalidArgument("illegal hex character");
    const unsigned byte = static_cast<unsigned>(hi * 16 + lo);
    for (int j = 0; j < 8; ++j) {
      const std::size_t index = 8 * b + static_cast<std::size_t>(j);
      const bool bit = ((byte >> (7 - j)) & 1u) != 0;
      if (index >= bits) {
        if (bit) throw InvalidArgument("hex text has bits set past 2^n");
        continue;
      }
      if (bit) f.words_[index >> 6] |= 1ull << (index & 63);
    }
  }
  return f;
}

BooleanFunction BooleanFunction::from_words(int n,
                                            std::span<const std::uint64_t> words) {
  BooleanFunction f(n);
  if (words.size() != f.words_.size()) {
    throw InvalidArgument("word count does not match n");
  }
  std::copy(words.begin(), words.end(), f.words_.begin());
  f.clear_padding();
  return f;
}

BooleanFunction BooleanFunction::tabulate(int n,
                                          const std::function<bool(std::size_t)>& fn) {
  BooleanFunction f(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (fn(i)) f.words_[i >> 6] |= 1ull << (i & 63);
  }
  return f;
}

void BooleanFunction::clear_padding() {
  if (n_ < 6) words_[0] &= low_table_mask(n_);
}

bool BooleanFunction::eval(std::span<const std::uint8_t> v) const {
  if (static_cast<int>(v.size()) != n_) {
    throw InvalidArgument("input has " + std::to_string(v.size()) +
                          " components, function expects " + std::to_string(n_));
  }
  return (*this)[input_index(v)];
}

std::size_t BooleanFunction::hamming_weight() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

BooleanFunction BooleanFunction::complement() const {
  BooleanFunction f = *this;
  for (auto& w : f.words_) w = ~w;
  f.clear_padding();
  return f;
}

std::string BooleanFunction::to_string() const {
  std::string s(size(), '0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::string BooleanFunction::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t bytes = (size() + 7) / 8;
  std::string out;
  out.reserve(2 * bytes);
  for (std::size_t b = 0; b < bytes; ++b) {
    unsigned byte = 0;
    for (int j = 0; j < 8; ++j) {
      const std::size_t index = 8 * b + static_cast<std::size_t>(j);
      byte <<= 1;
      if (index < size() && (*this)[index]) byte |= 1u;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 15u]);
  }
  return out;
}

std::strong_ordering operator<=>(const BooleanFunction& a, const BooleanFunction& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  // Lexicographic on the 0/1 string: compare the first differing index.
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff != 0) {
      const int pos = std::countr_zero(diff);
      return ((a.words_[w] >> pos) & 1u) ? std::strong_ordering::greater
                                        : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

std::vector<int> resolve_parity_subset(const ParityFamily& family, int n,
                                       std::uint64_t seed) {
  check_n(n);
  if (family.k < 1 || family.k > n) {
    throw InvalidArgument("parity order k must be in [1, n]");
  }
  std::vector<int> subset;
  if (!family.subset.empty()) {
    std::set<int> unique(family.subset.begin(), family.subset.end());
    if (static_cast<int>(family.subset.size()) != family.k ||
        unique.size() != family.subset.size()) {
      throw InvalidArgument("parity subset must list k distinct variables");
    }
    for (int v : unique) {
      if (v < 1 || v > n) throw InvalidArgument("parity subset variable out of range");
    }
    subset.assign(unique.begin(), unique.end());
  } else if (family.random_subset) {
    std::vector<int> vars(static_cast<std::size_t>(n));
    std::iota(vars.begin(), vars.end(), 1);
    CounterRng rng(derive_seed(seed, 0x50415249ull));
    for (int i = 0; i < family.k; ++i) {
      const auto j = static_cast<std::size_t>(i) +
                     rng.below(static_cast<std::uint64_t>(n - i));
      std::swap(vars[static_cast<std::size_t>(i)], vars[j]);
    }
    subset.assign(vars.begin(), vars.begin() + family.k);
    std::sort(subset.begin(), subset.end());
  } else {
    for (int v = 1; v <= family.k; ++v) subset.push_back(v);
  }
  return subset;
}

namespace {

struct Generator {
  int n;
  std::uint64_t seed;

  BooleanFunction operator()(const ConstantFamily& c) const {
    return BooleanFunction::constant(n, c.value);
  }

  BooleanFunction operator()(const ParityFamily& p) const {
    const std::vector<int> subset = resolve_parity_subset(p, n, seed);
    std::vector<std::uint64_t> acc(table_words(n), 0);
    for (int var : subset) {
      const auto table = variable_table(n, var);
      for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= table[w];
    }
    return BooleanFunction::from_words(n, acc);
  }

  BooleanFunction operator()(const EntropyFamily& e) const {
    const std::size_t size = std::size_t{1} << n;
    if (e.t > size) throw InvalidArgument("entropy t must be in [0, 2^n]");
    // Partial Fisher-Yates: the first t entries of a seeded shuffle.
    std::vector<std::uint32_t> order(size);
    std::iota(order.begin(), order.end(), 0u);
    CounterRng rng(derive_seed(seed, 0x454E5452ull));
    for (std::size_t i = 0; i < e.t; ++i) {
      const std::size_t j = i + rng.below(size - i);
      std::swap(order[i], order[j]);
    }
    std::vector<std::uint64_t> words(table_words(n), 0);
    for (std::size_t i = 0; i < e.t; ++i) {
      words[order[i] >> 6] |= 1ull << (order[i] & 63);
    }
    return BooleanFunction::from_words(n, words);
  }

  BooleanFunction operator()(const RepeatFamily& r) const {
    const std::size_t size = std::size_t{1} << n;
    if (r.pattern.empty() || r.pattern.size() > size) {
      throw InvalidArgument("repeat pattern length must be in [1, 2^n]");
    }
    for (char c : r.pattern) {
      if (c != '0' && c != '1') throw InvalidArgument("repeat pattern must be 0/1");
    }
    return BooleanFunction::tabulate(
        n, [&](std::size_t i) { return r.pattern[i % r.pattern.size()] == '1'; });
  }
};

}  // namespace

BooleanFunction generate(const FamilySpec& spec, int n) {
  check_n(n);
  return std::visit(Generator{n, spec.seed}, spec.family);
}

}  // namespace boolbias

std::size_t std::hash<boolbias::BooleanFunction>::operator()(
    const boolbias::BooleanFunction& f) const noexcept {
  std::uint64_t h = boolbias::mix64(static_cast<std::uint64_t>(f.n()));
  for (std::uint64_t w : f.words()) h = boolbias::mix64(h ^ w);
  return static_cast<std::size_t>(h);
}
