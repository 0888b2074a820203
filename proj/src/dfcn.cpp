#include "boolbias/dfcn.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "boolbias/error.hpp"
#include "output.hpp"

namespace boolbias {

DfcnParams DfcnParams::zeros(int n, int width, int beta) {
  if (n < 1 || n > kMaxInputs) throw InvalidArgument("n out of range");
  if (width < 1) throw InvalidArgument("width must be positive");
  if (beta != 1 && beta != -1) throw InvalidArgument("beta must be +1 or -1");
  DfcnParams p;
  p.n = n;
  p.width = width;
  p.beta = beta;
  p.w1.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(width), 0);
  p.w2.assign(static_cast<std::size_t>(width), 0);
  return p;
}

int DfcnParams::bias1(int r) const {
  int plus = 0;
  for (std::int8_t w : row(r)) plus += (w == 1);
  return 1 - plus;
}

int default_width(int n, int alpha_w) {
  if (alpha_w < 1) throw InvalidArgument("alpha_w must be >= 1");
  if (n < 1 || n > kMaxInputs) throw InvalidArgument("n out of range");
  return alpha_w * (1 << (n - 1));
}

bool forward(const DfcnParams& p, std::span<const std::uint8_t> v) {
  if (static_cast<int>(v.size()) != p.n) throw InvalidArgument("input dimension mismatch");
  long total = p.bias2();
  for (int i = 0; i < p.width; ++i) {
    long z = p.bias1(i);
    for (int j = 0; j < p.n; ++j) z += p.weight(i, j) * v[static_cast<std::size_t>(j)];
    const long hidden = z > 0 ? z : 0;  // ReLU
    total += p.beta * p.w2[static_cast<std::size_t>(i)] * hidden;
  }
  return total > 0;
}

Clause row_clause(const DfcnParams& p, int r) {
  Clause c;
  for (int j = 0; j < p.n; ++j) {
    const std::uint32_t bit = 1u << (p.n - 1 - j);
    const std::int8_t w = p.weight(r, j);
    if (w > 0) c.pos_mask |= bit;
    if (w < 0) c.neg_mask |= bit;
  }
  if (c.pos_mask == 0 && c.neg_mask == 0) c.always_true = true;
  return c;
}

BooleanFunction truth_table(const DfcnParams& p) {
  const std::size_t words = table_words(p.n);
  std::vector<std::vector<std::uint64_t>> vars;
  vars.reserve(static_cast<std::size_t>(p.n));
  for (int var = 1; var <= p.n; ++var) vars.push_back(variable_table(p.n, var));

  std::vector<std::uint64_t> acc(words, 0), row(words);
  for (int i = 0; i < p.width; ++i) {
    if (!p.w2[static_cast<std::size_t>(i)]) continue;
    std::fill(row.begin(), row.end(), ~0ull);
    for (int j = 0; j < p.n; ++j) {
      const std::int8_t w = p.weight(i, j);
      if (w == 0) continue;
      const auto& v = vars[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < words; ++k) row[k] &= w > 0 ? v[k] : ~v[k];
    }
    for (std::size_t k = 0; k < words; ++k) acc[k] |= row[k];
  }
  BooleanFunction f = BooleanFunction::from_words(p.n, acc);
  return p.beta > 0 ? f : f.complement();
}

DfcnParams dnf_to_dfcn(const Dnf& d, int width) {
  if (static_cast<int>(d.clauses.size()) > width) {
    throw InvalidArgument("DNF has " + std::to_string(d.clauses.size()) +
                          " clauses, width " + std::to_string(width) + " is too small");
  }
  DfcnParams p = DfcnParams::zeros(d.n, width, d.beta);
  for (std::size_t i = 0; i < d.clauses.size(); ++i) {
    const Clause& c = d.clauses[i];
    const int r = static_cast<int>(i);
    if (c.inactive()) continue;
    p.w2[i] = 1;
    if (c.always_true) continue;
    for (int j = 0; j < d.n; ++j) {
      const std::uint32_t bit = 1u << (d.n - 1 - j);
      if (c.pos_mask & bit) p.weight(r, j) = 1;
      if (c.neg_mask & bit) p.weight(r, j) = -1;
    }
  }
  return p;
}

Dnf dfcn_to_dnf(const DfcnParams& p) {
  Dnf d;
  d.n = p.n;
  d.beta = p.beta;
  for (int i = 0; i < p.width; ++i) {
    if (p.w2[static_cast<std::size_t>(i)]) d.clauses.push_back(row_clause(p, i));
  }
  return d;
}

WeightNorm weight_norm(const DfcnParams& p) {
  WeightNorm norm;
  for (std::int8_t w : p.w1) norm.norm_w1 += (w != 0);
  for (std::uint8_t w : p.w2) norm.norm_w2 += (w != 0);
  norm.total = norm.norm_w1 + norm.norm_w2;
  return norm;
}

DfcnParams sample_prior_params(int n, int alpha_w, CounterRng& rng) {
  DfcnParams p = DfcnParams::zeros(n, default_width(n, alpha_w));
  for (auto& w : p.w1) w = static_cast<std::int8_t>(rng.ternary());
  p.beta = rng.coin() ? 1 : -1;
  for (int i = 0; i < p.width; ++i) {
    bool nonzero = false;
    for (std::int8_t w : p.row(i)) nonzero = nonzero || w != 0;
    p.w2[static_cast<std::size_t>(i)] = nonzero ? 1 : 0;
  }
  return p;
}

std::size_t neighbor_count(const DfcnParams& p, bool include_beta) {
  const auto width = static_cast<std::size_t>(p.width);
  return 2 * width * static_cast<std::size_t>(p.n) + width + (include_beta ? 1 : 0);
}

Move neighbor_move(const DfcnParams& p, std::size_t i) {
  const std::size_t entries = p.w1.size();
  if (i < 2 * entries) {
    const std::size_t entry = i / 2;
    const int current = p.w1[entry];
    // The two values in {-1, 0, 1} other than the current one, ascending.
    int alternatives[2];
    int k = 0;
    for (int v = -1; v <= 1; ++v) {
      if (v != current) alternatives[k++] = v;
    }
    return Move{Move::Kind::W1, static_cast<int>(entry / static_cast<std::size_t>(p.n)),
                static_cast<int>(entry % static_cast<std::size_t>(p.n)),
                static_cast<std::int8_t>(alternatives[i % 2])};
  }
  i -= 2 * entries;
  if (i < static_cast<std::size_t>(p.width)) {
    return Move{Move::Kind::W2, static_cast<int>(i), 0,
                static_cast<std::int8_t>(p.w2[i] ? 0 : 1)};
  }
  return Move{Move::Kind::Beta, 0, 0, static_cast<std::int8_t>(-p.beta)};
}

std::vector<Move> neighbor_moves(const DfcnParams& p, bool include_beta) {
  const std::size_t count = neighbor_count(p, include_beta);
  std::vector<Move> moves;
  moves.reserve(count);
  for (std::size_t i = 0; i < count; ++i) moves.push_back(neighbor_move(p, i));
  return moves;
}

DfcnParams apply_move(DfcnParams p, const Move& m) {
  switch (m.kind) {
    case Move::Kind::W1:
      p.weight(m.row, m.col) = m.value;
      break;
    case Move::Kind::W2:
      p.w2[static_cast<std::size_t>(m.row)] = static_cast<std::uint8_t>(m.value);
      break;
    case Move::Kind::Beta:
      p.beta = m.value;
      break;
  }
  return p;
}

void for_each_neighbor(const DfcnParams& p, bool include_beta,
                       const std::function<void(const DfcnParams&)>& visit) {
  const std::size_t count = neighbor_count(p, include_beta);
  for (std::size_t i = 0; i < count; ++i) visit(apply_move(p, neighbor_move(p, i)));
}

void write_heatmap(const DfcnParams& p, const std::filesystem::path& path,
                   std::int64_t step, double test_accuracy) {
  std::ostringstream csv;
  for (int j = 0; j < p.n; ++j) csv << (j ? "," : "") << 'x' << (j + 1);
  csv << '\n';
  for (int i = 0; i < p.width; ++i) {
    for (int j = 0; j < p.n; ++j) csv << (j ? "," : "") << static_cast<int>(p.weight(i, j));
    csv << '\n';
  }
  write_file_atomic(path, csv.str());

  nlohmann::json side;
  side["beta"] = p.beta;
  side["w2"] = p.w2;
  side["step"] = step;
  side["test_accuracy"] = test_accuracy;
  write_file_atomic(std::filesystem::path(path.string() + ".json"), side.dump(2) + "\n");
}

}  // namespace boolbias
