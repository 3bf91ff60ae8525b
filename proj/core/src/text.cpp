#include "fieldnorm/text.hpp"

#include "fieldnorm/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fieldnorm::text {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += separator;
    out += parts[i];
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty() || s.front() == '+') return std::nullopt;
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing input file", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> wrap(std::string_view paragraph, std::size_t width) {
  std::vector<std::string> lines;
  std::string current;
  std::size_t pos = 0;
  while (pos < paragraph.size()) {
    const auto start = paragraph.find_first_not_of(' ', pos);
    if (start == std::string_view::npos) break;
    auto end = paragraph.find(' ', start);
    if (end == std::string_view::npos) end = paragraph.size();
    const auto word = paragraph.substr(start, end - start);
    if (!current.empty() && current.size() + 1 + word.size() > width) {
      lines.push_back(std::move(current));
      current.clear();
    }
    if (!current.empty()) current += ' ';
    current += word;
    pos = end;
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

}  // namespace fieldnorm::text
