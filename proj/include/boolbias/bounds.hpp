#pragma once

#include <cstdint>

namespace boolbias {

/// A probability carried in both scales. `log` is -inf when the value is
/// zero or negative (a vacuous lower bound); `value` may underflow to 0.
struct LogProb {
  double log = 0.0;
  double value = 0.0;

  static LogProb from_log(double log_value);
  static LogProb from_value(double value);
};

struct ClauseCover {
  std::uint64_t numerator = 0;    // 2^n - 1
  std::uint64_t denominator = 1;  // 3^n
  double p = 0.0;
};

/// Probability that a uniform ternary row (as a clause) covers a fixed input.
ClauseCover p_clause_covers(int n);
/// 1 - (1 - p)^M with M = alpha_w 2^(n-1): some active row covers the input.
double p_input_true(int n, double alpha_w);

/// alpha_w 2^(n-1).
double hidden_width(int n, double alpha_w);

struct ConstantBound {
  LogProb lower;            // inclusion-exclusion, bases clamped at 0
  LogProb truncated_lower;  // 1/2 (1 - 2^n (1-p)^M)
};
ConstantBound bound_constant(int n, double alpha_w);

struct EntropyBound {
  LogProb beta_pos;
  LogProb beta_neg;
  LogProb max;
};
/// Requires 1 <= t <= 2^n - 1.
EntropyBound bound_entropy_upper(int n, double alpha_w, std::uint64_t t);

struct Interval {
  LogProb lower;
  LogProb upper;
};
/// Conditional on beta = -1.
Interval bound_1entropy(int n, double alpha_w);

struct ParityBound {
  LogProb lower;
  LogProb upper;
  double scaling_exponent = 0.0;  // alpha_w k 2^(n-1)
};
ParityBound bound_parity(int n, double alpha_w, int k);

Interval bound_ksparse(int n, double alpha_w, int k);

struct QrBound {
  double exact_sum = 0.0;
  double union_lower = 0.0;
};
/// M draws from N equally likely items: every item of a fixed q-set is hit
/// and no item of a disjoint r-set is.
QrBound bound_qr(std::uint64_t q, std::uint64_t r, std::uint64_t m, std::uint64_t n_items);

/// eps <= 1 - exp(-(ln(1/P) + ln(2m/delta)) / (m - 1)), clamped to [0, 1].
double pac_bayes_bound(double p_f, std::uint64_t m, double delta);

/// 2 n ln2 (3/4)^n.
double optimal_width(int n);

struct EntropyCurvePoint {
  double mean_accepted = 0.0;
  double sd_accepted = 0.0;
  double model_accepted = 0.0;  // (1 - p)^(2^n - t)
};
/// Fraction of the 3^n ternary rows whose clause stays inside the ones of a
/// uniform weight-t function. Requires n <= 5.
EntropyCurvePoint entropy_independence_curve(int n, std::uint64_t t, std::uint64_t trials,
                                             std::uint64_t seed);

}  // namespace boolbias
