#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace boolbias {

/// Library version string.
const char* version();

/// Runs one command (prior, complexity, bounds, train, sweep, tilt,
/// aggregate) from a JSON config and returns a JSON summary. The whole
/// config is validated before any work starts; unknown keys and bad values
/// throw InvalidArgument. Files are written only when the config names an
/// output location, and each gets a `.meta.json` sidecar echoing the config.
///
/// A sweep with failed runs still returns normally; its summary carries a
/// nonzero "failed" count.
nlohmann::json run_command(std::string_view command, const nlohmann::json& config);

}  // namespace boolbias
