#include <algorithm>
#include <cmath>
#include <string>

#include "boolbias/complexity.hpp"

namespace boolbias {

int lz76_word_count(std::string_view s) {
  const std::size_t size = s.size();
  int words = 0;
  std::size_t start = 0;
  while (start < size) {
    std::size_t len = 1;
    // Grow the word while it can still be copied from the history, which
    // may overlap the word itself except for its last symbol.
    while (start + len <= size &&
           s.substr(0, start + len - 1).find(s.substr(start, len)) != std::string_view::npos) {
      ++len;
    }
    ++words;
    start += len;
  }
  return words;
}

double k_lz(std::string_view s) {
  if (s.size() <= 1) return 0.0;
  std::string reversed(s.rbegin(), s.rend());
  const int total = lz76_word_count(s) + lz76_word_count(reversed);
  return std::log2(static_cast<double>(s.size())) / 2.0 * total;
}

double k_lz(const BooleanFunction& f) { return k_lz(f.to_string()); }

}  // namespace boolbias
