#include "set_cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boolbias::detail {

namespace {

using Bits = std::vector<std::uint64_t>;

constexpr int kInfinity = std::numeric_limits<int>::max() / 4;

bool any(const Bits& b) {
  for (auto w : b) {
    if (w) return true;
  }
  return false;
}

class CoverSolver {
 public:
  CoverSolver(std::size_t universe, const std::vector<CoverCandidate>& sets)
      : universe_(universe), words_((universe + 63) / 64) {
    const std::size_t count = sets.size();
    bits_.assign(count * words_, 0);
    cost_.resize(count);
    elem_sets_.resize(universe);
    for (std::size_t i = 0; i < count; ++i) {
      if (sets[i].cost <= 0) throw std::invalid_argument("cover costs must be positive");
      cost_[i] = sets[i].cost;
      for (std::uint32_t e : sets[i].elements) {
        if (e >= universe) throw std::invalid_argument("cover element out of range");
        bits_[i * words_ + e / 64] |= 1ull << (e % 64);
      }
    }
    dropped_.assign(count, 0);
    drop_dominated();
    for (std::size_t i = 0; i < count; ++i) {
      if (dropped_[i]) continue;
      for (std::size_t e = 0; e < universe; ++e) {
        if (contains(i, e)) elem_sets_[e].push_back(static_cast<std::uint32_t>(i));
      }
    }
    for (std::size_t e = 0; e < universe; ++e) {
      if (elem_sets_[e].empty()) throw std::invalid_argument("element cannot be covered");
    }
    excluded_.assign(count, 0);
    inter_.assign(count, 0);
    stamp_.assign(count, 0);
    marked_.assign(count, 0);
  }

  std::vector<std::size_t> solve() {
    Bits all(words_, 0);
    for (std::size_t e = 0; e < universe_; ++e) all[e / 64] |= 1ull << (e % 64);

    const int optimum = min_cost(all, 0, greedy_cost(all) + 1);

    // Peel off the lexicographically smallest optimal cover one index at a
    // time: candidate j is next iff the rest can be covered within budget
    // by candidates after j.
    std::vector<std::size_t> chosen;
    Bits uncovered = all;
    int budget = optimum;
    std::size_t from = 0;
    while (any(uncovered)) {
      bool advanced = false;
      for (std::size_t j = from; j < cost_.size(); ++j) {
        if (dropped_[j] || cost_[j] > budget || !intersects(j, uncovered)) continue;
        Bits rest = uncovered;
        subtract(rest, j);
        const int remaining = budget - cost_[j];
        if (any(rest)) {
          if (lower_bound(rest, j + 1) > remaining) continue;
          if (min_cost(rest, j + 1, remaining + 1) > remaining) continue;
        }
        chosen.push_back(j);
        uncovered = std::move(rest);
        budget = remaining;
        from = j + 1;
        advanced = true;
        break;
      }
      if (!advanced) throw std::logic_error("set cover reconstruction failed");
    }
    return chosen;
  }

 private:
  bool contains(std::size_t set, std::size_t e) const {
    return (bits_[set * words_ + e / 64] >> (e % 64)) & 1u;
  }

  bool intersects(std::size_t set, const Bits& u) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (bits_[set * words_ + w] & u[w]) return true;
    }
    return false;
  }

  int intersection_size(std::size_t set, const Bits& u) const {
    int total = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      total += std::popcount(bits_[set * words_ + w] & u[w]);
    }
    return total;
  }

  void subtract(Bits& u, std::size_t set) const {
    for (std::size_t w = 0; w < words_; ++w) u[w] &= ~bits_[set * words_ + w];
  }

  bool subset_of(std::size_t a, std::size_t b) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (bits_[a * words_ + w] & ~bits_[b * words_ + w]) return false;
    }
    return true;
  }

  // Candidate a is dropped when some b covers a superset at lower cost, or
  // at equal cost with a smaller index. Neither case can appear in the
  // lexicographically smallest optimal cover.
  void drop_dominated() {
    const std::size_t count = cost_.size();
    for (std::size_t a = 0; a < count; ++a) {
      bool empty = true;
      for (std::size_t w = 0; w < words_ && empty; ++w) empty = bits_[a * words_ + w] == 0;
      if (empty) dropped_[a] = 1;
    }
    for (std::size_t a = 0; a < count; ++a) {
      if (dropped_[a]) continue;
      for (std::size_t b = 0; b < count; ++b) {
        if (a == b || dropped_[b]) continue;
        const bool cheaper = cost_[b] < cost_[a] || (cost_[b] == cost_[a] && b < a);
        if (cheaper && subset_of(a, b)) {
          dropped_[a] = 1;
          break;
        }
      }
    }
  }

  bool allowed(std::uint32_t set, std::size_t from) const {
    return set >= from && !excluded_[set];
  }

  int greedy_cost(Bits u) const {
    int total = 0;
    while (any(u)) {
      std::size_t best = cost_.size();
      double best_ratio = 0.0;
      for (std::size_t s = 0; s < cost_.size(); ++s) {
        if (dropped_[s]) continue;
        const int gain = intersection_size(s, u);
        if (gain == 0) continue;
        const double ratio = static_cast<double>(gain) / cost_[s];
        if (best == cost_.size() || ratio > best_ratio) {
          best = s;
          best_ratio = ratio;
        }
      }
      total += cost_[best];
      subtract(u, best);
    }
    return total;
  }

  // max(disjoint-element bound, fractional bound). Returns kInfinity when
  // some uncovered element has no allowed candidate.
  int lower_bound(const Bits& u, std::size_t from) {
    ++epoch_;
    double fractional = 0.0;
    struct Item {
      std::size_t element;
      int options;
    };
    std::vector<Item> items;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t word = u[w];
      while (word) {
        const std::size_t e = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        int options = 0;
        double best_share = 1e300;
        for (std::uint32_t s : elem_sets_[e]) {
          if (!allowed(s, from)) continue;
          ++options;
          if (stamp_[s] != epoch_) {
            stamp_[s] = epoch_;
            inter_[s] = intersection_size(s, u);
            marked_[s] = 0;
          }
          best_share = std::min(best_share, static_cast<double>(cost_[s]) / inter_[s]);
        }
        if (options == 0) return kInfinity;
        fractional += best_share;
        items.push_back({e, options});
      }
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.options < b.options; });
    int disjoint = 0;
    for (const Item& item : items) {
      bool clash = false;
      int cheapest = kInfinity;
      for (std::uint32_t s : elem_sets_[item.element]) {
        if (!allowed(s, from)) continue;
        clash = clash || marked_[s];
        cheapest = std::min(cheapest, cost_[s]);
      }
      if (clash) continue;
      disjoint += cheapest;
      for (std::uint32_t s : elem_sets_[item.element]) {
        if (allowed(s, from)) marked_[s] = 1;
      }
    }
    const int frac = static_cast<int>(std::ceil(fractional - 1e-9));
    return std::max(disjoint, frac);
  }

  // Minimum cost to cover u with candidates >= from, or `ceiling` if no
  // cover strictly cheaper than `ceiling` exists.
  int min_cost(const Bits& u, std::size_t from, int ceiling) {
    int best = ceiling;
    search(u, from, 0, best);
    return best;
  }

  void search(const Bits& u, std::size_t from, int cost, int& best) {
    if (!any(u)) {
      best = std::min(best, cost);
      return;
    }
    const int lb = lower_bound(u, from);
    if (lb >= kInfinity || cost + lb >= best) return;

    // Branch on the uncovered element with the fewest options.
    std::size_t pick = universe_;
    int pick_options = kInfinity;
    for (std::size_t w = 0; w < words_ && pick_options > 1; ++w) {
      std::uint64_t word = u[w];
      while (word) {
        const std::size_t e = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        int options = 0;
        for (std::uint32_t s : elem_sets_[e]) options += allowed(s, from);
        if (options < pick_options) {
          pick = e;
          pick_options = options;
          if (options <= 1) break;
        }
      }
    }
    if (pick_options == 0) return;

    std::vector<std::uint32_t> candidates;
    for (std::uint32_t s : elem_sets_[pick]) {
      if (allowed(s, from)) candidates.push_back(s);
    }
    std::vector<int> gains(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      gains[i] = intersection_size(candidates[i], u);
    }
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const long lhs = static_cast<long>(cost_[candidates[a]]) * gains[b];
      const long rhs = static_cast<long>(cost_[candidates[b]]) * gains[a];
      return lhs != rhs ? lhs < rhs : candidates[a] < candidates[b];
    });

    std::vector<std::uint32_t> newly_excluded;
    for (std::size_t i : order) {
      const std::uint32_t s = candidates[i];
      if (cost + cost_[s] < best) {
        Bits next = u;
        subtract(next, s);
        search(next, from, cost + cost_[s], best);
      }
      excluded_[s] = 1;
      newly_excluded.push_back(s);
    }
    for (std::uint32_t s : newly_excluded) excluded_[s] = 0;
  }

  std::size_t universe_;
  std::size_t words_;
  Bits bits_;
  std::vector<int> cost_;
  std::vector<char> dropped_;
  std::vector<std::vector<std::uint32_t>> elem_sets_;
  std::vector<char> excluded_;
  std::vector<int> inter_;
  std::vector<std::uint64_t> stamp_;
  std::vector<char> marked_;
  std::uint64_t epoch_ = 0;
};

}  // namespace

std::vector<std::size_t> solve_min_cover(std::size_t universe,
                                         const std::vector<CoverCandidate>& sets) {
  if (universe == 0) return {};
  CoverSolver solver(universe, sets);
  return solver.solve();
}

}  // namespace boolbias::detail
