#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "boolbias/dfcn.hpp"
#include "boolbias/error.hpp"
#include "network_state.hpp"
#include "oracles.hpp"

using namespace boolbias;

namespace {

std::uint32_t bit(int n, int var) { return 1u << (n - var); }

std::vector<int> as_ints(const DfcnParams& p, bool w1) {
  std::vector<int> out;
  if (w1) {
    for (auto w : p.w1) out.push_back(w);
  } else {
    for (auto w : p.w2) out.push_back(w);
  }
  return out;
}

bool oracle_forward(const DfcnParams& p, std::size_t index) {
  return oracle::forward(p.n, p.width, as_ints(p, true), as_ints(p, false), p.beta,
                         oracle::input_bits(index, p.n));
}

DfcnParams random_params(int n, int width, CounterRng& rng) {
  DfcnParams p = DfcnParams::zeros(n, width, rng.coin() ? 1 : -1);
  for (auto& w : p.w1) w = static_cast<std::int8_t>(rng.ternary());
  for (auto& w : p.w2) w = static_cast<std::uint8_t>(rng.coin());
  return p;
}

Dnf random_dnf(int n, int max_clauses, CounterRng& rng) {
  Dnf d{n, rng.coin() ? 1 : -1, {}};
  const int clauses = static_cast<int>(rng.below(max_clauses + 1));
  for (int c = 0; c < clauses; ++c) {
    Clause cl;
    for (int j = 1; j <= n; ++j) {
      const int t = rng.ternary();
      if (t == 1) cl.pos_mask |= bit(n, j);
      if (t == -1) cl.neg_mask |= bit(n, j);
    }
    d.clauses.push_back(cl);
  }
  return d;
}

}  // namespace

TEST(Dfcn, ForwardExamples) {
  DfcnParams p = DfcnParams::zeros(2, 1);
  p.weight(0, 0) = 1;
  p.weight(0, 1) = -1;
  p.w2[0] = 1;
  EXPECT_TRUE(forward(p, std::vector<std::uint8_t>{1, 0}));
  EXPECT_FALSE(forward(p, std::vector<std::uint8_t>{1, 1}));

  const DfcnParams zero_pos = DfcnParams::zeros(3, 4, 1);
  const DfcnParams zero_neg = DfcnParams::zeros(3, 4, -1);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_FALSE(forward(zero_pos, input_vector(i, 3)));
    EXPECT_TRUE(forward(zero_neg, input_vector(i, 3)));
  }
  EXPECT_EQ(zero_neg.bias2(), 1);
  EXPECT_EQ(p.bias1(0), 0);
}

TEST(Dfcn, ForwardMatchesLiteralDefinition) {
  CounterRng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int width = 1 + static_cast<int>(rng.below(6));
    const DfcnParams p = random_params(n, width, rng);
    const auto table = truth_table(p);
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      ASSERT_EQ(forward(p, input_vector(i, n)), oracle_forward(p, i));
      ASSERT_EQ(table[i], oracle_forward(p, i));
    }
  }
}

TEST(Dfcn, BijectionExamples) {
  const Dnf xor2{2, 1, {Clause{bit(2, 1), bit(2, 2)}, Clause{bit(2, 2), bit(2, 1)}}};
  const DfcnParams p = dnf_to_dfcn(xor2, 2);
  EXPECT_EQ(p.w1, (std::vector<std::int8_t>{1, -1, -1, 1}));
  EXPECT_EQ(p.w2, (std::vector<std::uint8_t>{1, 1}));
  const WeightNorm norm = weight_norm(p);
  EXPECT_EQ(norm.norm_w1, 4);
  EXPECT_EQ(norm.norm_w2, 2);
  EXPECT_EQ(norm.total, 6);

  const DfcnParams empty = dnf_to_dfcn(Dnf{2, 1, {}}, 4);
  EXPECT_EQ(empty, DfcnParams::zeros(2, 4, 1));
  EXPECT_EQ(weight_norm(empty).total, 0);
  EXPECT_TRUE(dfcn_to_dnf(empty).clauses.empty());

  const DfcnParams one = dnf_to_dfcn(canonical_expansion(BooleanFunction::from_string("1000")), 2);
  EXPECT_EQ(one.w1, (std::vector<std::int8_t>{-1, -1, 0, 0}));
  EXPECT_EQ(one.w2, (std::vector<std::uint8_t>{1, 0}));

  const auto parity4 = canonical_expansion(BooleanFunction::from_string("0110100110010110"));
  EXPECT_EQ(weight_norm(dnf_to_dfcn(parity4, 8)).norm_w1, 32);
  EXPECT_THROW(dnf_to_dfcn(parity4, 7), InvalidArgument);
}

TEST(Dfcn, ZeroRowWithActiveOutputIsTautology) {
  DfcnParams p = DfcnParams::zeros(3, 2, 1);
  p.w2[1] = 1;
  EXPECT_EQ(truth_table(p), BooleanFunction::constant(3, true));
  const Dnf d = dfcn_to_dnf(p);
  ASSERT_EQ(d.clauses.size(), 1u);
  EXPECT_TRUE(d.clauses[0].always_true);
  // The tautology lands in the first row; rows are only defined up to order.
  const DfcnParams back = dnf_to_dfcn(d, 2);
  EXPECT_EQ(back.w2, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(dfcn_to_dnf(back), d);
}

TEST(Dfcn, BijectionRoundTripRandomDnfs) {
  CounterRng rng(2);
  for (int n = 2; n <= 4; ++n) {
    const int width = 1 << (n - 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const Dnf d = random_dnf(n, width, rng);
      const DfcnParams p = dnf_to_dfcn(d, width);
      for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        ASSERT_EQ(forward(p, input_vector(i, n)), d.eval_index(i));
      }
      EXPECT_EQ(normalize(dfcn_to_dnf(p)), normalize(d));
      Dnf no_empty = d;
      std::erase_if(no_empty.clauses, [](const Clause& c) { return c.inactive(); });
      EXPECT_EQ(weight_norm(dnf_to_dfcn(no_empty, width)).norm_w1, dnf_length(no_empty));
    }
  }
}

TEST(Dfcn, DfcnToDnfMatchesForward) {
  CounterRng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const DfcnParams p = random_params(n, 1 + static_cast<int>(rng.below(5)), rng);
    EXPECT_EQ(truth_table(dfcn_to_dnf(p)), truth_table(p));
  }
}

TEST(Dfcn, Neighbors) {
  const DfcnParams p = DfcnParams::zeros(2, 2);
  EXPECT_EQ(neighbor_count(p), 10u);
  EXPECT_EQ(neighbor_count(p, true), 11u);
  EXPECT_EQ(neighbor_count(DfcnParams::zeros(7, 128)), 1920u);

  CounterRng rng(4);
  const DfcnParams q = random_params(3, 3, rng);
  const auto moves = neighbor_moves(q, true);
  ASSERT_EQ(moves.size(), neighbor_count(q, true));
  std::set<std::pair<std::vector<std::int8_t>, std::pair<std::vector<std::uint8_t>, int>>> seen;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    EXPECT_EQ(moves[i], neighbor_move(q, i));
    const DfcnParams r = apply_move(q, moves[i]);
    // Exactly one coordinate differs.
    int diff = r.beta != q.beta ? 1 : 0;
    for (std::size_t k = 0; k < q.w1.size(); ++k) diff += r.w1[k] != q.w1[k];
    for (std::size_t k = 0; k < q.w2.size(); ++k) diff += r.w2[k] != q.w2[k];
    EXPECT_EQ(diff, 1);
    seen.insert({r.w1, {r.w2, r.beta}});
    // Symmetry: q is among r's neighbors.
    bool back = false;
    for (const Move& m : neighbor_moves(r, true)) back = back || apply_move(r, m) == q;
    EXPECT_TRUE(back);
  }
  EXPECT_EQ(seen.size(), moves.size());
  std::size_t visited = 0;
  for_each_neighbor(q, false, [&](const DfcnParams&) { ++visited; });
  EXPECT_EQ(visited, neighbor_count(q));
}

TEST(Dfcn, PriorSampler) {
  CounterRng rng(5);
  std::size_t zeros = 0, entries = 0, zero_rows = 0, rows = 0, pos = 0;
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    const DfcnParams p = sample_prior_params(2, 1, rng);
    EXPECT_EQ(p.width, 2);
    pos += p.beta == 1;
    for (int r = 0; r < p.width; ++r) {
      bool nonzero = false;
      for (int c = 0; c < p.n; ++c) {
        ++entries;
        if (p.weight(r, c) == 0) ++zeros;
        else nonzero = true;
      }
      ++rows;
      if (!nonzero) ++zero_rows;
      EXPECT_EQ(p.w2[r], nonzero ? 1 : 0);
    }
  }
  const double e = static_cast<double>(entries);
  EXPECT_NEAR(zeros / e, 1.0 / 3.0, 5 * std::sqrt(2.0 / 9.0 / e));
  const double r = static_cast<double>(rows);
  EXPECT_NEAR(zero_rows / r, 1.0 / 9.0, 5 * std::sqrt(8.0 / 81.0 / r));
  EXPECT_NEAR(pos / static_cast<double>(draws), 0.5, 5 * std::sqrt(0.25 / draws));
  EXPECT_EQ(default_width(7, 2), 128);
}

TEST(Dfcn, HeatmapExport) {
  const auto dir = std::filesystem::temp_directory_path() / "boolbias_heatmap_test";
  std::filesystem::remove_all(dir);
  DfcnParams p = DfcnParams::zeros(3, 2, -1);
  p.weight(0, 0) = 1;
  p.weight(1, 2) = -1;
  p.w2[0] = 1;
  write_heatmap(p, dir / "step_5.csv", 5, 0.75);
  std::ifstream csv(dir / "step_5.csv");
  std::string all((std::istreambuf_iterator<char>(csv)), {});
  EXPECT_EQ(all, "x1,x2,x3\n1,0,0\n0,0,-1\n");
  std::ifstream side(dir / "step_5.csv.json");
  const auto meta = nlohmann::json::parse(side);
  EXPECT_EQ(meta["beta"], -1);
  EXPECT_EQ(meta["step"], 5);
  EXPECT_EQ(meta["w2"], nlohmann::json::array({1, 0}));
  EXPECT_DOUBLE_EQ(meta["test_accuracy"].get<double>(), 0.75);
  std::filesystem::remove_all(dir);
}

TEST(NetworkState, IncrementalUpdatesMatchFullEvaluation) {
  CounterRng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const int width = 1 + static_cast<int>(rng.below(8));
    detail::NetworkState state(random_params(n, width, rng));
    std::vector<std::uint64_t> out(state.words());
    for (int step = 0; step < 200; ++step) {
      const DfcnParams& p = state.params();
      const Move m = neighbor_move(p, rng.below(neighbor_count(p, true)));
      const DfcnParams next = apply_move(p, m);
      state.output_after(m, out.data());
      const auto expect = truth_table(next);
      ASSERT_TRUE(std::equal(out.begin(), out.end(), expect.words().begin()));
      ASSERT_EQ(weight_norm(p).total + state.norm_delta(m), weight_norm(next).total);
      state.apply(m);
      ASSERT_EQ(state.params(), next);
      ASSERT_TRUE(std::equal(state.output().begin(), state.output().end(), expect.words().begin()));
      ASSERT_EQ(state.norm().total, weight_norm(next).total);
    }
  }
}
