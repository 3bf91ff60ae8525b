#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fieldnorm::text {

std::vector<std::string_view> split(std::string_view line, char delimiter);
std::string join(const std::vector<std::string>& parts, std::string_view separator);
std::string_view trim(std::string_view s);

/// Strips a trailing '\r' so CRLF files read like LF files.
std::string_view chomp(std::string_view line);

/// Strict base-10 parse: optional leading '-', digits only, no whitespace.
std::optional<std::int64_t> parse_int(std::string_view s);

std::string read_file(const std::filesystem::path& path);

/// Greedy word wrap; words longer than width are left on their own line.
std::vector<std::string> wrap(std::string_view paragraph, std::size_t width);

}  // namespace fieldnorm::text
