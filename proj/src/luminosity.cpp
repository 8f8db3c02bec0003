#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "topcorr/errors.hpp"
#include "topcorr/io.hpp"
#include "topcorr/production.hpp"

namespace topcorr {

LuminosityTable::LuminosityTable(std::vector<LuminosityRow> rows, std::string collider, double sqrt_s)
  : rows_(std::move(rows)), collider_(std::move(collider)), sqrt_s_(sqrt_s)
{
}

void LuminosityTable::validate(double m_t) const
{
  if (rows_.size() < 2)
    throw InputDataError("luminosity table needs at least two rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.m_gev) || !std::isfinite(r.weight_gg) || !std::isfinite(r.weight_qq))
      throw InputDataError("luminosity table row " + std::to_string(i) + " is not finite");
    if (r.weight_gg < 0.0 || r.weight_qq < 0.0)
      throw InputDataError("luminosity table row " + std::to_string(i) + " has a negative weight");
    if (i > 0 && !(r.m_gev > rows_[i - 1].m_gev))
      throw InputDataError("luminosity table masses must be strictly increasing");
  }
  if (rows_.front().m_gev < 2.0 * m_t)
    throw InputDataError("luminosity table starts below threshold 2 m_t = " + std::to_string(2.0 * m_t) + " GeV");
}

std::pair<double, double> LuminosityTable::weights_at(double m) const
{
  if (rows_.empty() || m < rows_.front().m_gev || m > rows_.back().m_gev)
    return {0.0, 0.0};
  auto hi = std::lower_bound(rows_.begin(), rows_.end(), m,
                             [](const LuminosityRow& r, double x) { return r.m_gev < x; });
  if (hi == rows_.begin())
    return {hi->weight_gg, hi->weight_qq};
  auto lo = hi - 1;
  const double t = (m - lo->m_gev) / (hi->m_gev - lo->m_gev);
  return {lo->weight_gg + t * (hi->weight_gg - lo->weight_gg), lo->weight_qq + t * (hi->weight_qq - lo->weight_qq)};
}

LuminosityTable LuminosityTable::parse_csv(std::string_view text)
{
  std::vector<LuminosityRow> rows;
  std::string collider = "custom";
  double sqrt_s = 0.0;
  bool have_header = false;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '#') {
      if (const auto kv = parse_key_value(line.substr(1))) {
        if (kv->first == "collider")
          collider = kv->second;
        else if (kv->first == "sqrt_s")
          sqrt_s = parse_double(kv->second, "sqrt_s");
      }
      continue;
    }
    if (!have_header) {
      if (line != "m_gev,weight_gg,weight_qq")
        throw InputDataError("luminosity CSV header must be 'm_gev,weight_gg,weight_qq'");
      have_header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw InputDataError("luminosity CSV line " + std::to_string(line_no) + ": expected 3 fields");
    rows.push_back({parse_double(fields[0], "m_gev"), parse_double(fields[1], "weight_gg"),
                    parse_double(fields[2], "weight_qq")});
  }
  if (!have_header)
    throw InputDataError("luminosity CSV has no header line");
  return LuminosityTable(std::move(rows), collider, sqrt_s);
}

LuminosityTable LuminosityTable::load_csv(const std::string& path)
{
  return parse_csv(read_text_file(path));
}

std::string LuminosityTable::to_csv() const
{
  std::ostringstream os;
  os << "# collider = " << collider_ << "\n# sqrt_s = " << format_double(sqrt_s_) << "\n";
  os << "m_gev,weight_gg,weight_qq\n";
  for (const auto& r : rows_)
    os << format_double(r.m_gev) << ',' << format_double(r.weight_gg) << ',' << format_double(r.weight_qq) << '\n';
  return os.str();
}

std::vector<std::string> LuminosityTable::builtin_names()
{
  return {"threshold-gg", "threshold-qq", "flat-qq", "lhc-toy", "tevatron-toy"};
}

LuminosityTable LuminosityTable::builtin(std::string_view name, double m_t)
{
  const double thr = 2.0 * m_t;
  if (name == "threshold-gg")
    return LuminosityTable({{thr, 1.0, 0.0}, {thr + 1e-5, 0.0, 0.0}}, "toy", 0.0);
  if (name == "threshold-qq")
    return LuminosityTable({{thr, 0.0, 1.0}, {thr + 1e-5, 0.0, 0.0}}, "toy", 0.0);

  // smooth spectra on a grid that is denser near threshold
  auto spectrum = [&](double frac_gg, double scale, std::string label, double sqrt_s) {
    std::vector<LuminosityRow> rows;
    const int n = 61;
    for (int i = 0; i < n; ++i) {
      const double u = static_cast<double>(i) / (n - 1);
      const double m = thr + 1800.0 * u * u;
      const double beta = beta_from_mass(m, m_t);
      const double shape = beta * std::exp(-(m - thr) / scale);
      rows.push_back({m, frac_gg * shape, (1.0 - frac_gg) * shape});
    }
    return LuminosityTable(std::move(rows), std::move(label), sqrt_s);
  };
  if (name == "flat-qq") {
    std::vector<LuminosityRow> rows;
    for (int i = 0; i <= 40; ++i)
      rows.push_back({thr + 50.0 * i, 0.0, 1.0});
    return LuminosityTable(std::move(rows), "toy", 0.0);
  }
  if (name == "lhc-toy")
    return spectrum(0.9, 150.0, "LHC-like toy", 13000.0);
  if (name == "tevatron-toy")
    return spectrum(0.15, 80.0, "Tevatron-like toy", 2000.0);
  throw ConfigError("unknown built-in luminosity table '" + std::string(name) + "'");
}

LuminosityTable LuminosityTable::resolve(const std::string& spec, double m_t)
{
  constexpr std::string_view prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0)
    return builtin(std::string_view(spec).substr(prefix.size()), m_t);
  return load_csv(spec);
}

} // namespace topcorr
