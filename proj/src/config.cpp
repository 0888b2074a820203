#include "config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "boolbias/error.hpp"

namespace boolbias::detail {

namespace {

bool parse_int(const std::string& s, std::int64_t& out) {
  try {
    std::size_t used = 0;
    out = std::stoll(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_real(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

ConfigReader::ConfigReader(const json& config, std::string command)
    : config_(config), command_(std::move(command)) {
  if (!config_.is_object()) throw InvalidArgument(command_ + ": config must be a JSON object");
  used_.insert("command");
}

bool ConfigReader::has(const std::string& key) const {
  return config_.contains(key) && !config_.at(key).is_null();
}

const json* ConfigReader::find(const std::string& key) {
  used_.insert(key);
  if (!has(key)) return nullptr;
  return &config_.at(key);
}

void ConfigReader::fail(const std::string& key, const std::string& what) const {
  throw InvalidArgument(command_ + ": '" + key + "' " + what);
}

std::int64_t ConfigReader::integer(const std::string& key, std::int64_t fallback, std::int64_t lo,
                                   std::int64_t hi) {
  const json* v = find(key);
  std::int64_t out = fallback;
  if (v) {
    const double d = v->is_number_float() ? v->get<double>() : 0.5;
    if (v->is_number_integer()) {
      out = v->get<std::int64_t>();
    } else if (std::trunc(d) == d && std::abs(d) < 9e15) {
      out = static_cast<std::int64_t>(d);
    } else if (!(v->is_string() && parse_int(v->get<std::string>(), out))) {
      fail(key, "must be an integer");
    }
  }
  if (out < lo || out > hi) {
    fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

std::int64_t ConfigReader::required_integer(const std::string& key, std::int64_t lo,
                                            std::int64_t hi) {
  if (!has(key)) fail(key, "is required");
  return integer(key, 0, lo, hi);
}

std::uint64_t ConfigReader::count(const std::string& key, std::uint64_t fallback,
                                  std::uint64_t lo, std::uint64_t hi) {
  const json* v = find(key);
  std::uint64_t out = fallback;
  if (v) {
    double d = 0.0;
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
    } else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<std::int64_t>());
    } else if ((v->is_number_float() && (d = v->get<double>(), true)) ||
               (v->is_string() && parse_real(v->get<std::string>(), d))) {
      if (!(d >= 0.0 && std::trunc(d) == d && d < 1.8e19)) fail(key, "must be a whole number");
      out = static_cast<std::uint64_t>(d);
    } else {
      fail(key, "must be a non-negative integer");
    }
  }
  if (out < lo || out > hi) {
    fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

double ConfigReader::real(const std::string& key, double fallback, double lo, double hi) {
  const json* v = find(key);
  double out = fallback;
  if (v) {
    if (v->is_number()) {
      out = v->get<double>();
    } else if (!(v->is_string() && parse_real(v->get<std::string>(), out))) {
      fail(key, "must be a number");
    }
  }
  if (!(out >= lo && out <= hi)) {
    fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

double ConfigReader::required_real(const std::string& key, double lo, double hi) {
  if (!has(key)) fail(key, "is required");
  return real(key, 0.0, lo, hi);
}

bool ConfigReader::flag(const std::string& key, bool fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (v->is_boolean()) return v->get<bool>();
  if (v->is_string()) {
    const auto s = v->get<std::string>();
    if (s == "true") return true;
    if (s == "false") return false;
  }
  fail(key, "must be true or false");
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback) {
  const json* v = find(key);
  if (!v) return fallback;
  if (!v->is_string()) fail(key, "must be a string");
  return v->get<std::string>();
}

std::string ConfigReader::required_text(const std::string& key) {
  if (!has(key)) fail(key, "is required");
  return text(key, "");
}

std::string ConfigReader::choice(const std::string& key, const std::string& fallback,
                                 std::initializer_list<const char*> options) {
  const std::string value = text(key, fallback);
  std::string listing;
  for (const char* o : options) {
    if (value == o) return value;
    listing += listing.empty() ? o : std::string("|") + o;
  }
  fail(key, "must be one of " + listing);
}

std::vector<std::int64_t> ConfigReader::integer_list(const std::string& key,
                                                     std::vector<std::int64_t> fallback,
                                                     std::int64_t lo, std::int64_t hi) {
  const json* v = find(key);
  std::vector<std::int64_t> out;
  if (!v) {
    out = std::move(fallback);
  } else if (v->is_array()) {
    for (const auto& item : *v) {
      if (!item.is_number_integer()) fail(key, "must hold integers");
      out.push_back(item.get<std::int64_t>());
    }
  } else if (v->is_number_integer()) {
    out.push_back(v->get<std::int64_t>());
  } else if (v->is_string()) {
    for (const auto& part : split(v->get<std::string>(), ',')) {
      const auto dots = part.find("..");
      std::int64_t a = 0, b = 0;
      if (dots != std::string::npos) {
        if (!parse_int(part.substr(0, dots), a) || !parse_int(part.substr(dots + 2), b) || b < a) {
          fail(key, "has a malformed range '" + part + "'");
        }
        for (std::int64_t x = a; x <= b; ++x) out.push_back(x);
      } else {
        if (!parse_int(part, a)) fail(key, "has a malformed entry '" + part + "'");
        out.push_back(a);
      }
    }
  } else {
    fail(key, "must be an integer, a list, or a range string");
  }
  if (out.empty()) fail(key, "must not be empty");
  for (auto x : out) {
    if (x < lo || x > hi) {
      fail(key, "entries must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
  return out;
}

std::vector<double> ConfigReader::real_list(const std::string& key, std::vector<double> fallback,
                                            double lo, double hi) {
  const json* v = find(key);
  std::vector<double> out;
  if (!v) {
    out = std::move(fallback);
  } else if (v->is_array()) {
    for (const auto& item : *v) {
      if (!item.is_number()) fail(key, "must hold numbers");
      out.push_back(item.get<double>());
    }
  } else if (v->is_number()) {
    out.push_back(v->get<double>());
  } else if (v->is_string()) {
    for (const auto& part : split(v->get<std::string>(), ',')) {
      double d = 0.0;
      if (!parse_real(part, d)) fail(key, "has a malformed entry '" + part + "'");
      out.push_back(d);
    }
  } else {
    fail(key, "must be a number or a list of numbers");
  }
  for (double x : out) {
    if (!(x >= lo && x <= hi)) {
      fail(key, "entries must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
  return out;
}

void ConfigReader::done() const {
  for (auto it = config_.begin(); it != config_.end(); ++it) {
    if (!used_.count(it.key())) {
      throw InvalidArgument(command_ + ": unknown option '" + it.key() + "'");
    }
  }
}

unsigned cap_threads(std::uint64_t requested) {
  std::uint64_t threads = std::max<std::uint64_t>(requested, 1);
  if (const char* env = std::getenv("BOOLBIAS_THREADS")) {
    std::int64_t cap = 0;
    if (parse_int(env, cap) && cap >= 1) threads = std::min<std::uint64_t>(threads, static_cast<std::uint64_t>(cap));
  }
  return static_cast<unsigned>(std::min<std::uint64_t>(threads, 1024));
}

void run_pool(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  const unsigned extra = static_cast<unsigned>(std::min<std::size_t>(threads, count)) - (count ? 1 : 0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

json log_value(double v) {
  if (std::isinf(v) && v < 0) return nullptr;
  return v;
}

}  // namespace boolbias::detail
