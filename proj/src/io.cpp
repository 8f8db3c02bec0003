#include "topcorr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "topcorr/errors.hpp"

namespace topcorr {

std::vector<std::string_view> split_lines(std::string_view text)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(std::string_view line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::optional<std::pair<std::string, std::string>> parse_key_value(std::string_view line)
{
  const auto eq = line.find('=');
  if (eq == std::string_view::npos)
    return std::nullopt;
  std::string key = trim(line.substr(0, eq));
  if (key.empty())
    return std::nullopt;
  return std::make_pair(std::move(key), trim(line.substr(eq + 1)));
}

double parse_double(std::string_view s, std::string_view what)
{
  const std::string t = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InputDataError("cannot parse " + std::string(what) + " from '" + t + "'");
  return value;
}

std::string format_double(double x)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc())
    throw InternalError("format_double failed");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path)
{
  // gzread passes plain files through unchanged
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f)
    throw InputDataError("cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0)
    out.append(buf, static_cast<std::size_t>(n));
  const bool failed = n < 0;
  gzclose(f);
  if (failed)
    throw InputDataError("error while reading '" + path + "'");
  return out;
}

void write_text_file(const std::string& path, std::string_view text)
{
  const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  if (gz) {
    // fixed compression level and no timestamp so identical inputs give identical files
    gzFile f = gzopen(path.c_str(), "wb6");
    if (!f)
      throw ConfigError("cannot write '" + path + "'");
    std::size_t done = 0;
    while (done < text.size()) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(text.size() - done, 1u << 20));
      if (gzwrite(f, text.data() + done, chunk) != static_cast<int>(chunk)) {
        gzclose(f);
        throw ConfigError("error while writing '" + path + "'");
      }
      done += chunk;
    }
    gzclose(f);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ConfigError("cannot write '" + path + "'");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os)
    throw ConfigError("error while writing '" + path + "'");
}

Config Config::parse(std::string_view text)
{
  Config cfg;
  for (const auto& raw : split_lines(text)) {
    std::string line = trim(raw);
    if (line.empty())
      continue;
    if (line.rfind("#!", 0) == 0) {
      line = line.substr(2);
    } else if (line.front() == '#') {
      continue;
    }
    const auto kv = parse_key_value(line);
    if (!kv)
      break;
    cfg.set(kv->first, kv->second);
  }
  return cfg;
}

Config Config::load(const std::string& path)
{
  try {
    return parse(read_text_file(path));
  } catch (const InputDataError& e) {
    throw ConfigError(e.what());
  }
}

void Config::set(const std::string& key, const std::string& value)
{
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

bool Config::has(const std::string& key) const
{
  return get(key).has_value();
}

std::optional<std::string> Config::get(const std::string& key) const
{
  for (const auto& [k, v] : entries_)
    if (k == key)
      return v;
  return std::nullopt;
}

std::string Config::to_header() const
{
  std::string out;
  for (const auto& [k, v] : entries_)
    out += "#! " + k + " = " + v + "\n";
  return out;
}

} // namespace topcorr
