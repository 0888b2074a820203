#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace boolbias {

inline constexpr int kMaxInputs = 16;

/// Index of an input vector. x1 is the most significant bit, so indices
/// ascend in the order of the concatenated binary representation.
std::size_t input_index(std::span<const std::uint8_t> v);
std::vector<std::uint8_t> input_vector(std::size_t index, int n);

/// A total map {0,1}^n -> {0,1} stored as its 2^n-bit truth table.
///
/// Bit `idx` lives in word idx / 64 at position idx % 64. For n < 6 the
/// unused high bits of the single word are always zero.
class BooleanFunction {
 public:
  BooleanFunction() = default;
  /// The constant-False function on n inputs.
  explicit BooleanFunction(int n);

  static BooleanFunction constant(int n, bool value);
  static BooleanFunction from_string(std::string_view bits);
  /// Hex text, two characters per byte, index 0 at the MSB of the first
  /// byte. Functions shorter than a byte are left-aligned in one byte.
  static BooleanFunction from_hex(std::string_view hex, int n);
  static BooleanFunction from_words(int n, std::span<const std::uint64_t> words);
  static BooleanFunction tabulate(int n,
                                  const std::function<bool(std::size_t)>& fn);

  int n() const { return n_; }
  std::size_t size() const { return std::size_t{1} << n_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool operator[](std::size_t index) const {
    return ((words_[index >> 6] >> (index & 63)) & 1u) != 0;
  }
  /// Value at input vector v; throws InvalidArgument on dimension mismatch.
  bool eval(std::span<const std::uint8_t> v) const;

  std::size_t hamming_weight() const;
  BooleanFunction complement() const;

  std::string to_string() const;
  std::string to_hex() const;

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;
  friend std::strong_ordering operator<=>(const BooleanFunction& a,
                                          const BooleanFunction& b);

 private:
  void clear_padding();

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of 64-bit words in a truth table over n inputs.
inline std::size_t table_words(int n) {
  return n <= 6 ? 1 : (std::size_t{1} << (n - 6));
}

/// Mask of the valid bits in the (single) word of an n < 6 truth table.
std::uint64_t low_table_mask(int n);

/// Truth table of the projection x_var (1-based) as words.
std::vector<std::uint64_t> variable_table(int n, int var);

struct ConstantFamily {
  bool value = false;
};

/// XOR of k variables. An explicit subset (1-based variable numbers) wins;
/// otherwise the first k variables, or a seeded random subset when
/// random_subset is set.
struct ParityFamily {
  int k = 1;
  std::vector<int> subset;
  bool random_subset = false;
};

/// Exactly t ones placed uniformly at random.
struct EntropyFamily {
  std::uint64_t t = 0;
};

/// A 0/1 pattern tiled across the truth table and truncated at 2^n.
struct RepeatFamily {
  std::string pattern;
};

struct FamilySpec {
  std::variant<ConstantFamily, ParityFamily, EntropyFamily, RepeatFamily> family;
  std::uint64_t seed = 0;
};

BooleanFunction generate(const FamilySpec& spec, int n);

/// Resolves the parity subset the generator would use (1-based, sorted).
std::vector<int> resolve_parity_subset(const ParityFamily& family, int n,
                                       std::uint64_t seed);

}  // namespace boolbias

template <>
struct std::hash<boolbias::BooleanFunction> {
  std::size_t operator()(const boolbias::BooleanFunction& f) const noexcept;
};
