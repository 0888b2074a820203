#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "boolbias/boolean_function.hpp"
#include "config.hpp"

namespace boolbias::detail {

/// A target family as named in configs. `param` is the family's varying
/// parameter (k, t, value or pattern) as it appears in file names and
/// aggregate rows.
struct TargetConfig {
  std::string family;
  int n = 1;
  std::int64_t k = 1;
  std::uint64_t t = 0;
  bool value = false;
  std::string pattern;
  std::vector<int> subset;
  bool random_subset = false;

  std::string param() const;
  BooleanFunction make(std::uint64_t seed) const;
};

/// Reads family, n and the family's own keys; list-valued keys (k, t) are
/// read by the caller.
TargetConfig read_target(ConfigReader& r, bool read_family_param);
void read_family_param(ConfigReader& r, TargetConfig& target);

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
/// `<path>.meta.json` holding command, config, seed and version.
void write_meta(const std::filesystem::path& path, std::string_view command,
                const nlohmann::json& config, std::uint64_t seed);

nlohmann::json run_train(const nlohmann::json& config);
nlohmann::json run_sweep(const nlohmann::json& config);
nlohmann::json run_aggregate(const nlohmann::json& config);

}  // namespace boolbias::detail
