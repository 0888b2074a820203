#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace boolbias {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: maps a
/// 128-bit counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive independent seeds from a base seed
/// and integer tags.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a,
                          std::uint64_t tag_b);

/// Counter-based generator. A (seed, stream) pair names an independent
/// sequence; the sequence is a pure function of that pair, so work can be
/// partitioned across threads by stream id and merged reproducibly.
///
/// Satisfies UniformRandomBitGenerator, but the helpers below are used in
/// preference to <random> distributions because those are not portable
/// across standard library implementations.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();
  std::uint32_t next_u32();

  /// Uniform integer in [0, bound). Unbiased (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool coin() { return (next_u32() & 1u) != 0; }
  /// Uniform value in {-1, 0, +1}.
  int ternary();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  // Cached base-3 digits for ternary(): one 32-bit draw below 3^20 yields
  // 20 independent uniform digits.
  std::uint32_t trits_ = 0;
  int trits_left_ = 0;
};

}  // namespace boolbias
