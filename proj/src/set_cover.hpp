#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace boolbias::detail {

/// Exact weighted set cover.
///
/// `sets[i]` lists the universe elements covered by candidate i; candidates
/// must be supplied in tie-break order. The result minimizes total cost and,
/// among minimum-cost covers, is the lexicographically smallest sorted list
/// of candidate indices. Costs must be positive. Throws if some element is
/// uncoverable.
struct CoverCandidate {
  std::vector<std::uint32_t> elements;
  int cost = 1;
};

std::vector<std::size_t> solve_min_cover(std::size_t universe,
                                         const std::vector<CoverCandidate>& sets);

}  // namespace boolbias::detail
