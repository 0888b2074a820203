#include "network_state.hpp"

#include <bit>

#include "boolbias/error.hpp"

namespace boolbias::detail {

NetworkState::NetworkState(const DfcnParams& p)
    : p_(p), words_(table_words(p.n)), mask_(low_table_mask(p.n)) {
  if (p.w1.size() != static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.n) ||
      p.w2.size() != static_cast<std::size_t>(p.width)) {
    throw InvalidArgument("parameter shapes do not match n and width");
  }
  for (int c = 0; c < p.n; ++c) {
    const auto v = variable_table(p.n, c + 1);
    vars_.insert(vars_.end(), v.begin(), v.end());
  }
  rows_.assign(static_cast<std::size_t>(p.width) * words_, 0);
  for (int r = 0; r < p.width; ++r) compute_row(r, -1, 0, rows_.data() + r * words_);
  count_.assign(std::size_t{1} << p.n, 0);
  covered_.assign(words_, 0);
  single_.assign(words_, 0);
  output_.assign(words_, 0);
  scratch_.assign(words_, 0);
  for (int r = 0; r < p.width; ++r) {
    if (!p_.w2[static_cast<std::size_t>(r)]) continue;
    const std::uint64_t* t = rows_.data() + r * words_;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = t[w];
      while (bits) {
        ++count_[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
        bits &= bits - 1;
      }
    }
  }
  for (std::size_t i = 0; i < count_.size(); ++i) {
    if (count_[i] >= 1) covered_[i / 64] |= 1ull << (i % 64);
    if (count_[i] == 1) single_[i / 64] |= 1ull << (i % 64);
  }
  rebuild_output();
  norm_ = weight_norm(p_);
}

// Clause table of `row`, optionally with column `col` replaced by `value`.
void NetworkState::compute_row(int row, int col, std::int8_t value, std::uint64_t* out) const {
  for (std::size_t w = 0; w < words_; ++w) out[w] = mask_;
  for (int c = 0; c < p_.n; ++c) {
    const std::int8_t weight = c == col ? value : p_.weight(row, c);
    if (weight == 0) continue;
    const std::uint64_t* v = vars_.data() + static_cast<std::size_t>(c) * words_;
    for (std::size_t w = 0; w < words_; ++w) out[w] &= weight > 0 ? v[w] : ~v[w];
  }
}

void NetworkState::rebuild_output() {
  for (std::size_t w = 0; w < words_; ++w) {
    output_[w] = p_.beta > 0 ? covered_[w] : ~covered_[w] & mask_;
  }
}

int NetworkState::norm_delta(const Move& m) const {
  switch (m.kind) {
    case Move::Kind::W1:
      return (m.value != 0) - (p_.weight(m.row, m.col) != 0);
    case Move::Kind::W2:
      return (m.value != 0) - (p_.w2[static_cast<std::size_t>(m.row)] != 0);
    case Move::Kind::Beta:
      return 0;
  }
  return 0;
}

void NetworkState::output_after(const Move& m, std::uint64_t* out) const {
  if (m.kind == Move::Kind::Beta) {
    for (std::size_t w = 0; w < words_; ++w) {
      out[w] = p_.beta > 0 ? ~covered_[w] & mask_ : covered_[w];
    }
    return;
  }
  const auto r = static_cast<std::size_t>(m.row);
  const std::uint64_t* old_row = rows_.data() + r * words_;
  const bool old_active = p_.w2[r] != 0;
  bool new_active = old_active;
  const std::uint64_t* new_row = old_row;
  if (m.kind == Move::Kind::W1) {
    if (!old_active) {
      std::copy(output_.begin(), output_.end(), out);
      return;
    }
    compute_row(m.row, m.col, m.value, scratch_.data());
    new_row = scratch_.data();
  } else {
    new_active = m.value != 0;
  }
  for (std::size_t w = 0; w < words_; ++w) {
    const std::uint64_t before = old_active ? old_row[w] : 0;
    const std::uint64_t after = new_active ? new_row[w] : 0;
    const std::uint64_t cov = (covered_[w] & ~(single_[w] & before)) | after;
    out[w] = p_.beta > 0 ? cov : ~cov & mask_;
  }
}

void NetworkState::apply(const Move& m) {
  norm_.norm_w1 += m.kind == Move::Kind::W1 ? norm_delta(m) : 0;
  norm_.norm_w2 += m.kind == Move::Kind::W2 ? norm_delta(m) : 0;
  norm_.total = norm_.norm_w1 + norm_.norm_w2;

  if (m.kind == Move::Kind::Beta) {
    p_.beta = -p_.beta;
    rebuild_output();
    return;
  }
  const auto r = static_cast<std::size_t>(m.row);
  std::uint64_t* row = rows_.data() + r * words_;
  const bool old_active = p_.w2[r] != 0;
  std::vector<std::uint64_t> before(row, row + words_);
  if (m.kind == Move::Kind::W1) {
    compute_row(m.row, m.col, m.value, row);
    p_.weight(m.row, m.col) = m.value;
  } else {
    p_.w2[r] = static_cast<std::uint8_t>(m.value != 0);
  }
  const bool new_active = p_.w2[r] != 0;
  for (std::size_t w = 0; w < words_; ++w) {
    const std::uint64_t b = old_active ? before[w] : 0;
    const std::uint64_t a = new_active ? row[w] : 0;
    std::uint64_t changed = b ^ a;
    while (changed) {
      const int bit = std::countr_zero(changed);
      changed &= changed - 1;
      const std::size_t i = w * 64 + static_cast<std::size_t>(bit);
      if ((a >> bit) & 1u) {
        ++count_[i];
      } else {
        --count_[i];
      }
      const std::uint64_t flag = 1ull << bit;
      covered_[w] = count_[i] >= 1 ? covered_[w] | flag : covered_[w] & ~flag;
      single_[w] = count_[i] == 1 ? single_[w] | flag : single_[w] & ~flag;
    }
  }
  rebuild_output();
}

}  // namespace boolbias::detail
