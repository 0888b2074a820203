#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace boolbias {

/// Writes `contents` to a sibling temp file and renames it over `path`.
/// Creates parent directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace boolbias
