#include "boolbias/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "boolbias/boolean_function.hpp"
#include "boolbias/error.hpp"
#include "boolbias/rng.hpp"
#include "row_tables.hpp"

namespace boolbias {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_100;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_n(int n) {
  if (n < 1 || n > 30) throw InvalidArgument("n must be in [1, 30]");
}

void check_alpha(double alpha_w) {
  if (!(alpha_w > 0.0)) throw InvalidArgument("alpha_w must be positive");
}

void check_k(int n, int k) {
  if (k < 1 || k > n) throw InvalidArgument("k must be in [1, n]");
}

double log_p_complement(int n) {
  return std::log1p(-p_clause_covers(n).p);
}

LogProb from_wide(const Wide& v) {
  if (v <= 0) return LogProb{kNegInf, static_cast<double>(v)};
  return LogProb{static_cast<double>(log(v)), static_cast<double>(v)};
}

}  // namespace

LogProb LogProb::from_log(double log_value) { return LogProb{log_value, std::exp(log_value)}; }

LogProb LogProb::from_value(double value) {
  return LogProb{value > 0.0 ? std::log(value) : kNegInf, value};
}

ClauseCover p_clause_covers(int n) {
  check_n(n);
  ClauseCover c;
  c.numerator = (std::uint64_t{1} << n) - 1;
  c.denominator = 1;
  for (int i = 0; i < n; ++i) c.denominator *= 3;
  c.p = static_cast<double>(c.numerator) / static_cast<double>(c.denominator);
  return c;
}

double hidden_width(int n, double alpha_w) {
  check_alpha(alpha_w);
  return alpha_w * std::ldexp(1.0, n - 1);
}

double p_input_true(int n, double alpha_w) {
  return -std::expm1(hidden_width(n, alpha_w) * log_p_complement(n));
}

ConstantBound bound_constant(int n, double alpha_w) {
  check_n(n);
  const double m = hidden_width(n, alpha_w);
  const ClauseCover cover = p_clause_covers(n);
  const Wide p = Wide(cover.numerator) / Wide(cover.denominator);
  const std::uint64_t inputs = std::uint64_t{1} << n;

  // Terms with k p >= 1 have a clamped base of 0 and vanish.
  Wide sum = 0;
  Wide binom = 1;
  for (std::uint64_t k = 0; k <= inputs; ++k) {
    const Wide base = 1 - Wide(k) * p;
    if (base <= 0) break;
    const Wide term = binom * pow(base, Wide(m));
    sum += (k % 2 == 0) ? term : Wide(-term);
    binom = binom * Wide(inputs - k) / Wide(k + 1);
  }

  ConstantBound out;
  out.lower = from_wide(sum / 2);
  const Wide truncated = (1 - Wide(inputs) * pow(1 - p, Wide(m))) / 2;
  out.truncated_lower = from_wide(truncated);
  return out;
}

EntropyBound bound_entropy_upper(int n, double alpha_w, std::uint64_t t) {
  check_n(n);
  const std::uint64_t inputs = std::uint64_t{1} << n;
  if (t < 1 || t >= inputs) throw InvalidArgument("t must be in [1, 2^n - 1]");
  const double m = hidden_width(n, alpha_w);
  auto side = [&](std::uint64_t x) {
    const int floor_log = std::bit_width(x) - 1;
    return LogProb::from_log(-m * std::pow(2.0 / 3.0, n - floor_log));
  };
  EntropyBound out;
  out.beta_pos = side(inputs - t);
  out.beta_neg = side(t);
  out.max = out.beta_pos.log >= out.beta_neg.log ? out.beta_pos : out.beta_neg;
  return out;
}

Interval bound_1entropy(int n, double alpha_w) {
  check_n(n);
  const double m = hidden_width(n, alpha_w);
  const double log_q = log_p_complement(n);
  Interval out;
  out.upper = LogProb::from_log(m * log_q);
  out.lower = LogProb::from_log(-static_cast<double>(n) * n * std::log(3.0) + (m - n) * log_q);
  return out;
}

ParityBound bound_parity(int n, double alpha_w, int k) {
  check_n(n);
  check_k(n, k);
  const double m = hidden_width(n, alpha_w);
  const double j = std::ldexp(1.0, k - 1);
  const double log_share = std::log(j) - k * std::log(3.0);

  ParityBound out;
  out.upper = LogProb::from_log(m * log_share);
  if (m < j) {
    // Too few rows to hold the 2^(k-1) clauses parity needs.
    out.lower = LogProb{kNegInf, 0.0};
  } else {
    out.lower = LogProb::from_log(-n * j * std::log(3.0) + std::lgamma(j + 1.0) +
                                  (m - j) * log_share);
  }
  out.scaling_exponent = alpha_w * k * std::ldexp(1.0, n - 1);
  return out;
}

Interval bound_ksparse(int n, double alpha_w, int k) {
  check_n(n);
  check_k(n, k);
  const double m = hidden_width(n, alpha_w);
  const double log_q = std::log(1.0 - std::pow(2.0 / 3.0, k) + std::pow(3.0, -n));
  Interval out;
  out.upper = LogProb::from_log(m * log_q);
  out.lower = LogProb::from_log(-static_cast<double>(n) * k * std::log(3.0) + (m - k) * log_q);
  return out;
}

QrBound bound_qr(std::uint64_t q, std::uint64_t r, std::uint64_t m, std::uint64_t n_items) {
  if (n_items == 0 || q + r > n_items) throw InvalidArgument("need q + r <= N and N >= 1");
  if (m < 1) throw InvalidArgument("M must be at least 1");
  Wide sum = 0;
  Wide binom = 1;
  for (std::uint64_t i = 0; i <= q; ++i) {
    const Wide term = binom * pow(1 - Wide(r + i) / Wide(n_items), Wide(m));
    sum += (i % 2 == 0) ? term : Wide(-term);
    binom = binom * Wide(q - i) / Wide(i + 1);
  }
  QrBound out;
  out.exact_sum = static_cast<double>(sum);
  const double free_items = static_cast<double>(n_items - r);
  const double md = static_cast<double>(m);
  if (free_items > 0.0) {
    const double miss = free_items > 1.0 ? std::pow(1.0 - 1.0 / free_items, md) : 0.0;
    out.union_lower = std::pow(free_items / static_cast<double>(n_items), md) *
                      (1.0 - static_cast<double>(q) * miss);
  }
  return out;
}

double pac_bayes_bound(double p_f, std::uint64_t m, double delta) {
  if (!(p_f > 0.0 && p_f <= 1.0)) throw InvalidArgument("P(f) must be in (0, 1]");
  if (m < 2) throw InvalidArgument("m must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must be in (0, 1)");
  const double md = static_cast<double>(m);
  const double exponent = (-std::log(p_f) + std::log(2.0 * md / delta)) / (md - 1.0);
  const double eps = -std::expm1(-exponent);
  return std::clamp(eps, 0.0, 1.0);
}

double optimal_width(int n) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  return 2.0 * n * std::numbers::ln2 * std::pow(0.75, n);
}

EntropyCurvePoint entropy_independence_curve(int n, std::uint64_t t, std::uint64_t trials,
                                             std::uint64_t seed) {
  if (n < 1 || n > 5) throw BudgetExceeded("entropy curve supports n <= 5");
  const std::uint64_t inputs = std::uint64_t{1} << n;
  if (t > inputs) throw InvalidArgument("t must be in [0, 2^n]");
  if (trials == 0) throw InvalidArgument("trials must be at least 1");

  const detail::RowTables rows(n);

  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const BooleanFunction f =
        generate(FamilySpec{EntropyFamily{t}, derive_seed(seed, trial)}, n);
    const std::uint64_t zeros = ~f.words()[0] & low_table_mask(n);
    std::size_t accepted = 0;
    for (std::size_t id = 0; id < rows.rows(); ++id) accepted += (*rows.table(id) & zeros) == 0;
    const double frac = static_cast<double>(accepted) / static_cast<double>(rows.rows());
    sum += frac;
    sum_sq += frac * frac;
  }
  EntropyCurvePoint out;
  const double count = static_cast<double>(trials);
  out.mean_accepted = sum / count;
  out.sd_accepted = trials > 1
                        ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / count) / (count - 1.0)))
                        : 0.0;
  out.model_accepted = std::pow(1.0 - p_clause_covers(n).p, static_cast<double>(inputs - t));
  return out;
}

}  // namespace boolbias
