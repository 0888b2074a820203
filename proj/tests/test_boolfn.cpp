#include <cmath>

#include <gtest/gtest.h>

#include "boolbias/boolean_function.hpp"
#include "boolbias/error.hpp"
#include "boolbias/rng.hpp"

using namespace boolbias;

namespace {

std::vector<std::uint8_t> v(std::initializer_list<int> bits) {
  std::vector<std::uint8_t> out;
  for (int b : bits) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

BooleanFunction random_function(int n, CounterRng& rng) {
  return BooleanFunction::tabulate(n, [&](std::size_t) { return rng.coin(); });
}

}  // namespace

TEST(BooleanFunction, EvalExamples) {
  EXPECT_TRUE(BooleanFunction::constant(3, true).eval(v({1, 0, 1})));
  const auto parity4 = BooleanFunction::from_string("0110100110010110");
  EXPECT_TRUE(parity4.eval(v({0, 0, 0, 1})));
  EXPECT_FALSE(BooleanFunction::from_string("0110").eval(v({1, 1})));
  EXPECT_THROW(parity4.eval(v({0, 1})), InvalidArgument);
  EXPECT_THROW(parity4.eval(v({0, 1, 2, 0})), InvalidArgument);
}

TEST(BooleanFunction, FromString) {
  const auto xor2 = BooleanFunction::from_string("0110");
  EXPECT_EQ(xor2.n(), 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_EQ(xor2.eval(v({a, b})), (a ^ b) == 1);
  }
  EXPECT_EQ(BooleanFunction::from_string("1111"), BooleanFunction::constant(2, true));
  EXPECT_EQ(BooleanFunction::from_string("10").n(), 1);
  EXPECT_THROW(BooleanFunction::from_string("011"), InvalidArgument);
  EXPECT_THROW(BooleanFunction::from_string("01a0"), InvalidArgument);
  EXPECT_THROW(BooleanFunction::from_string(""), InvalidArgument);
}

TEST(BooleanFunction, InputIndexHasX1AsMostSignificantBit) {
  EXPECT_EQ(input_index(v({1, 0, 0})), 4u);
  EXPECT_EQ(input_index(v({0, 0, 1})), 1u);
  EXPECT_EQ(input_vector(6, 3), v({1, 1, 0}));
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(input_index(input_vector(i, 5)), i);
}

TEST(BooleanFunction, Generators) {
  EXPECT_EQ(generate({RepeatFamily{"1001"}, 0}, 4).to_string(), "1001100110011001");
  EXPECT_EQ(generate({RepeatFamily{"10011"}, 0}, 3).to_string(), "10011100");
  EXPECT_EQ(generate({EntropyFamily{0}, 0}, 3).to_string(), "00000000");
  EXPECT_EQ(generate({ParityFamily{2}, 0}, 3).to_string(), "00111100");
  EXPECT_EQ(generate({ParityFamily{1, {3}}, 0}, 3).to_string(), "01010101");
  EXPECT_EQ(generate({ConstantFamily{true}, 0}, 2).to_string(), "1111");
  EXPECT_THROW(generate({ParityFamily{4}, 0}, 3), InvalidArgument);
  EXPECT_THROW(generate({EntropyFamily{9}, 0}, 3), InvalidArgument);
  EXPECT_THROW(generate({RepeatFamily{"01x"}, 0}, 3), InvalidArgument);
  EXPECT_THROW(generate({RepeatFamily{"010101010"}, 0}, 3), InvalidArgument);
}

TEST(BooleanFunction, ParityIsBalancedForEveryKAndN) {
  for (int n = 1; n <= 9; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto f = generate({ParityFamily{k}, 1}, n);
      EXPECT_EQ(f.hamming_weight(), std::size_t{1} << (n - 1)) << n << " " << k;
      const auto g = generate({ParityFamily{k, {}, true}, 7}, n);
      EXPECT_EQ(g.hamming_weight(), std::size_t{1} << (n - 1));
    }
  }
}

TEST(BooleanFunction, RandomParitySubsetIsSeeded) {
  const ParityFamily fam{3, {}, true};
  const auto a = resolve_parity_subset(fam, 7, 11);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a, resolve_parity_subset(fam, 7, 11));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
}

TEST(BooleanFunction, EntropyHasExactlyTOnesAndIsDeterministic) {
  for (std::uint64_t t : {0u, 1u, 17u, 64u, 127u, 128u}) {
    const auto f = generate({EntropyFamily{t}, 5}, 7);
    EXPECT_EQ(f.hamming_weight(), t);
    EXPECT_EQ(f, generate({EntropyFamily{t}, 5}, 7));
  }
  EXPECT_NE(generate({EntropyFamily{10}, 1}, 6), generate({EntropyFamily{10}, 2}, 6));
}

TEST(BooleanFunction, HammingWeight) {
  EXPECT_EQ(BooleanFunction::from_string("0110").hamming_weight(), 2u);
  EXPECT_EQ(generate({ParityFamily{4}, 0}, 4).hamming_weight(), 8u);
  EXPECT_EQ(BooleanFunction::from_string("00000000").hamming_weight(), 0u);
}

TEST(BooleanFunction, StringRoundTripExhaustiveSmallN) {
  for (int n = 1; n <= 3; ++n) {
    const std::size_t count = std::size_t{1} << (1 << n);
    for (std::size_t t = 0; t < count; ++t) {
      const auto f = BooleanFunction::tabulate(n, [&](std::size_t i) { return (t >> i) & 1; });
      EXPECT_EQ(BooleanFunction::from_string(f.to_string()), f);
      EXPECT_EQ(BooleanFunction::from_hex(f.to_hex(), n), f);
    }
  }
}

TEST(BooleanFunction, StringRoundTripRandom) {
  CounterRng rng(3);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const auto f = random_function(n, rng);
    ASSERT_EQ(BooleanFunction::from_string(f.to_string()), f);
    ASSERT_EQ(BooleanFunction::from_hex(f.to_hex(), n), f);
  }
}

TEST(BooleanFunction, HexPutsIndexZeroAtMostSignificantBit) {
  EXPECT_EQ(BooleanFunction::from_string("0110100110010110").to_hex(), "6996");
  EXPECT_EQ(BooleanFunction::from_string("10000000").to_hex(), "80");
  EXPECT_EQ(BooleanFunction::from_string("01").to_hex(), "40");
  EXPECT_THROW(BooleanFunction::from_hex("zz", 3), InvalidArgument);
}

TEST(BooleanFunction, ComplementFlipsEveryBit) {
  CounterRng rng(9);
  for (int n = 1; n <= 8; ++n) {
    const auto f = random_function(n, rng);
    const auto g = f.complement();
    EXPECT_EQ(f.hamming_weight() + g.hamming_weight(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NE(f[i], g[i]);
  }
}

TEST(BooleanFunction, RejectsOutOfRangeN) {
  EXPECT_THROW(BooleanFunction(0), InvalidArgument);
  EXPECT_THROW(BooleanFunction(17), InvalidArgument);
  EXPECT_NO_THROW(BooleanFunction(16));
}

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool differ = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    if (x != c()) differ = true;
  }
  EXPECT_TRUE(differ);
}

TEST(CounterRng, TernaryAndBelowAreUniform) {
  CounterRng rng(1);
  int counts[3] = {0, 0, 0};
  const int draws = 300000;
  for (int i = 0; i < draws; ++i) ++counts[rng.ternary() + 1];
  for (int c : counts) EXPECT_NEAR(c, draws / 3.0, 5 * std::sqrt(draws * 2.0 / 9.0));
  int below[5] = {0};
  for (int i = 0; i < draws; ++i) ++below[rng.below(5)];
  for (int c : below) EXPECT_NEAR(c, draws / 5.0, 5 * std::sqrt(draws * 4.0 / 25.0));
}
