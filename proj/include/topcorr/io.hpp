#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topcorr {

std::vector<std::string_view> split_lines(std::string_view text);
std::string trim(std::string_view s);
std::vector<std::string> split_csv(std::string_view line);

/// "key = value" -> (key, value), both trimmed; nullopt if there is no '='.
std::optional<std::pair<std::string, std::string>> parse_key_value(std::string_view line);

/// Strict double parsing; throws InputDataError naming `what`.
double parse_double(std::string_view s, std::string_view what);

/// Shortest round-trip representation of a double.
std::string format_double(double x);

/// Whole file contents; gzip-compressed files are decompressed transparently.
std::string read_text_file(const std::string& path);

/// Write `text`; paths ending in .gz are gzip-compressed.
void write_text_file(const std::string& path, std::string_view text);

/// Ordered key/value configuration.
///
/// Text form is one `key = value` per line. Lines starting with `#!` carry configuration
/// inside output headers; other `#` lines are comments. Parsing stops at the first line
/// that is neither, so an output file can be read back as the configuration that made it.
class Config
{
public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Header block: one `#! key = value` line per entry.
  std::string to_header() const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace topcorr
