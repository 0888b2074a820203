#include "boolbias/prior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <unordered_map>

#include "boolbias/dfcn.hpp"
#include "boolbias/dnf.hpp"
#include "boolbias/error.hpp"
#include "boolbias/rng.hpp"
#include "row_tables.hpp"

namespace boolbias {

namespace {

using detail::RowTables;
using Key = std::array<std::uint64_t, 2>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    return static_cast<std::size_t>(mix64(k[0] ^ mix64(k[1])));
  }
};

struct Tally {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

// One prior draw, consuming the RNG exactly like sample_prior_params.
Key draw_function(const RowTables& rows, int n, int width, CounterRng& rng, bool& positive) {
  Key acc{0, 0};
  const std::size_t words = rows.words();
  for (int r = 0; r < width; ++r) {
    std::size_t id = 0;
    std::size_t scale = 1;
    for (int j = 0; j < n; ++j) {
      id += static_cast<std::size_t>(rng.ternary() + 1) * scale;
      scale *= 3;
    }
    const std::uint64_t* t = rows.table(id);
    for (std::size_t w = 0; w < words; ++w) acc[w] |= t[w];
  }
  positive = rng.coin();
  if (!positive) {
    const std::uint64_t mask = n < 6 ? low_table_mask(n) : ~0ull;
    for (std::size_t w = 0; w < words; ++w) acc[w] = ~acc[w] & mask;
  }
  return acc;
}

void check_params(int n, int alpha_w, int max_n) {
  if (n < 1 || n > max_n) {
    throw InvalidArgument("n must be in [1, " + std::to_string(max_n) + "]");
  }
  if (alpha_w < 1) throw InvalidArgument("alpha_w must be at least 1");
}

void sort_entries(PriorEstimate& est) {
  std::sort(est.entries.begin(), est.entries.end(),
            [](const PriorEntry& a, const PriorEntry& b) { return a.f < b.f; });
}

PriorEstimate sample_dense(int n, int alpha_w, std::uint64_t draws,
                           const SampleOptions& options) {
  const RowTables rows(n);
  const int width = default_width(n, alpha_w);
  const std::size_t functions = std::size_t{1} << (std::size_t{1} << n);
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(std::max<std::uint64_t>(draws, 1))));

  std::vector<std::vector<Tally>> parts(threads, std::vector<Tally>(functions));
  auto work = [&](unsigned t) {
    const std::uint64_t begin = draws * t / threads;
    const std::uint64_t end = draws * (t + 1) / threads;
    auto& tally = parts[t];
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(options.seed, options.first_draw + i);
      bool positive = true;
      const Key k = draw_function(rows, n, width, rng, positive);
      auto& slot = tally[static_cast<std::size_t>(k[0])];
      ++(positive ? slot.pos : slot.neg);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();

  PriorEstimate est;
  est.n = n;
  est.alpha_w = alpha_w;
  est.total = draws;
  for (std::size_t idx = 0; idx < functions; ++idx) {
    Tally sum;
    for (const auto& part : parts) {
      sum.pos += part[idx].pos;
      sum.neg += part[idx].neg;
    }
    if (sum.pos + sum.neg == 0) continue;
    const std::uint64_t word = idx;
    est.entries.push_back({BooleanFunction::from_words(n, {&word, 1}), sum.pos, sum.neg});
  }
  sort_entries(est);
  return est;
}

PriorEstimate sample_sparse(int n, int alpha_w, std::uint64_t draws,
                            const SampleOptions& options) {
  const RowTables rows(n);
  const int width = default_width(n, alpha_w);
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t cap = options.max_distinct;

  std::vector<std::unordered_map<Key, Tally, KeyHash>> parts(threads);
  std::vector<char> overflow(threads, 0);
  auto work = [&](unsigned t) {
    const std::uint64_t begin = draws * t / threads;
    const std::uint64_t end = draws * (t + 1) / threads;
    auto& tally = parts[t];
    for (std::uint64_t i = begin; i < end; ++i) {
      CounterRng rng(options.seed, options.first_draw + i);
      bool positive = true;
      const Key k = draw_function(rows, n, width, rng, positive);
      auto& slot = tally[k];
      ++(positive ? slot.pos : slot.neg);
      if (tally.size() > cap) {
        overflow[t] = 1;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  auto too_many = [&] {
    return BudgetExceeded("more than " + std::to_string(cap) +
                          " distinct functions observed; raise max_distinct");
  };
  if (std::find(overflow.begin(), overflow.end(), 1) != overflow.end()) throw too_many();

  for (unsigned t = 1; t < threads; ++t) {
    for (const auto& [k, v] : parts[t]) {
      auto& slot = parts[0][k];
      slot.pos += v.pos;
      slot.neg += v.neg;
    }
    parts[t].clear();
    if (parts[0].size() > cap) throw too_many();
  }

  PriorEstimate est;
  est.n = n;
  est.alpha_w = alpha_w;
  est.total = draws;
  est.entries.reserve(parts[0].size());
  const std::size_t words = table_words(n);
  for (const auto& [k, v] : parts[0]) {
    est.entries.push_back(
        {BooleanFunction::from_words(n, {k.data(), words}), v.pos, v.neg});
  }
  sort_entries(est);
  return est;
}

}  // namespace

const PriorEntry* PriorEstimate::find(const BooleanFunction& f) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), f,
                             [](const PriorEntry& e, const BooleanFunction& g) { return e.f < g; });
  if (it == entries.end() || !(it->f == f)) return nullptr;
  return &*it;
}

std::uint64_t PriorEstimate::count(const BooleanFunction& f) const {
  const PriorEntry* e = find(f);
  return e ? e->count() : 0;
}

double PriorEstimate::probability(const BooleanFunction& f) const {
  return total == 0 ? 0.0 : static_cast<double>(count(f)) / static_cast<double>(total);
}

double PriorEstimate::probability_given_beta(const BooleanFunction& f, int beta) const {
  std::uint64_t side_total = 0;
  for (const auto& e : entries) side_total += beta > 0 ? e.count_pos : e.count_neg;
  if (side_total == 0) return 0.0;
  const PriorEntry* e = find(f);
  if (!e) return 0.0;
  return static_cast<double>(beta > 0 ? e->count_pos : e->count_neg) /
         static_cast<double>(side_total);
}

PriorEstimate sample_prior(int n, int alpha_w, std::uint64_t draws,
                           const SampleOptions& options) {
  check_params(n, alpha_w, kMaxSampledInputs);
  if (draws == 0) throw InvalidArgument("draws must be at least 1");
  return n <= 4 ? sample_dense(n, alpha_w, draws, options)
                : sample_sparse(n, alpha_w, draws, options);
}

PriorEstimate exact_prior(int n, int alpha_w) {
  check_params(n, alpha_w, kMaxSampledInputs);
  if (n > 4) throw BudgetExceeded("exact prior needs n <= 4 for a dense function index");
  const int width = default_width(n, alpha_w);
  const RowTables rows(n);
  // 3^(n * width) must fit comfortably in 63 bits.
  const double log2_states = n * width * std::log2(3.0);
  if (log2_states > 62.0) {
    throw BudgetExceeded("exact prior state space 2*3^" + std::to_string(n * width) +
                         " exceeds 64-bit counts");
  }

  const std::size_t functions = std::size_t{1} << (std::size_t{1} << n);
  std::vector<std::uint64_t> counts(functions, 0), next(functions);
  counts[0] = 1;
  for (int r = 0; r < width; ++r) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t g = 0; g < functions; ++g) {
      if (counts[g] == 0) continue;
      for (std::size_t id = 0; id < rows.rows(); ++id) {
        next[g | static_cast<std::size_t>(*rows.table(id))] += counts[g];
      }
    }
    counts.swap(next);
  }

  PriorEstimate est;
  est.n = n;
  est.alpha_w = alpha_w;
  est.exact = true;
  const std::uint64_t mask = low_table_mask(n);
  std::vector<Tally> tally(functions);
  std::uint64_t per_beta = 0;
  for (std::size_t g = 0; g < functions; ++g) {
    tally[g].pos += counts[g];
    tally[static_cast<std::size_t>(~static_cast<std::uint64_t>(g) & mask)].neg += counts[g];
    per_beta += counts[g];
  }
  est.total = 2 * per_beta;
  for (std::size_t g = 0; g < functions; ++g) {
    if (tally[g].pos + tally[g].neg == 0) continue;
    const std::uint64_t word = g;
    est.entries.push_back({BooleanFunction::from_words(n, {&word, 1}), tally[g].pos, tally[g].neg});
  }
  sort_entries(est);
  return est;
}

void merge(PriorEstimate& a, const PriorEstimate& b) {
  if (a.n != b.n || a.alpha_w != b.alpha_w) {
    throw InvalidArgument("cannot merge priors with different n or alpha_w");
  }
  std::vector<PriorEntry> out;
  out.reserve(a.entries.size() + b.entries.size());
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() || j != b.entries.end()) {
    if (j == b.entries.end() || (i != a.entries.end() && i->f < j->f)) {
      out.push_back(*i++);
    } else if (i == a.entries.end() || j->f < i->f) {
      out.push_back(*j++);
    } else {
      out.push_back({i->f, i->count_pos + j->count_pos, i->count_neg + j->count_neg});
      ++i;
      ++j;
    }
  }
  a.entries = std::move(out);
  a.total += b.total;
  a.exact = a.exact && b.exact;
}

double zipf_reference(int n, std::uint64_t rank) {
  return 1.0 / (std::ldexp(1.0, n) * std::numbers::ln2 * static_cast<double>(rank));
}

std::vector<RankRow> rank_table(const PriorEstimate& est, bool with_complexity) {
  std::vector<const PriorEntry*> order;
  order.reserve(est.entries.size());
  for (const auto& e : est.entries) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const PriorEntry* a, const PriorEntry* b) {
    return a->count() > b->count();
  });
  std::vector<RankRow> rows;
  rows.reserve(order.size());
  std::uint64_t rank = 0;
  for (const PriorEntry* e : order) {
    RankRow row;
    row.rank = ++rank;
    row.f = e->f;
    row.count = e->count();
    row.p_hat = est.total ? static_cast<double>(row.count) / static_cast<double>(est.total) : 0.0;
    row.zipf_ref = zipf_reference(est.n, row.rank);
    if (with_complexity) row.complexity = complexity_report(e->f);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace boolbias
