#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace boolbias::detail {

using nlohmann::json;

/// Typed, range-checked access to a command's JSON config. Every key read
/// is remembered so that done() can reject anything unrecognised.
class ConfigReader {
 public:
  ConfigReader(const json& config, std::string command);

  bool has(const std::string& key) const;

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi);
  std::int64_t required_integer(const std::string& key, std::int64_t lo, std::int64_t hi);
  /// Non-negative integer; also accepts integral floats such as 1e8.
  std::uint64_t count(const std::string& key, std::uint64_t fallback, std::uint64_t lo,
                      std::uint64_t hi);
  double real(const std::string& key, double fallback, double lo, double hi);
  double required_real(const std::string& key, double lo, double hi);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string required_text(const std::string& key);
  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> options);

  /// A number, an array of numbers, or a string like "1..7" or "16,32".
  std::vector<std::int64_t> integer_list(const std::string& key,
                                         std::vector<std::int64_t> fallback, std::int64_t lo,
                                         std::int64_t hi);
  std::vector<double> real_list(const std::string& key, std::vector<double> fallback,
                                double lo, double hi);

  /// Throws InvalidArgument naming the first unrecognised key.
  void done() const;

 private:
  const json* find(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  const json& config_;
  std::string command_;
  std::set<std::string> used_;
};

/// min(requested, $BOOLBIAS_THREADS) and at least 1.
unsigned cap_threads(std::uint64_t requested);

/// Runs fn(0..count-1) on up to `threads` workers. Exceptions stay inside
/// fn; the pool itself never throws from workers.
void run_pool(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// JSON for a log-probability: null for -inf.
json log_value(double v);

}  // namespace boolbias::detail
