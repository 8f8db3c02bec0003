#include "topcorr/decay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "topcorr/errors.hpp"
#include "topcorr/io.hpp"
#include "topcorr/parallel.hpp"

namespace topcorr {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr std::size_t kChunk = 8192;
constexpr std::uint32_t kKinematicsTag = 1;
constexpr std::uint32_t kDecayTag = 2;

} // namespace

DecayDistribution::DecayDistribution(const TwoQubitState& state) : state_(state)
{
  require_physical(state, "decay distribution");
  Eigen::JacobiSVD<Matrix3> svd(state.corr);
  envelope_ = 1.0 + state.bplus.norm() + state.bminus.norm() + svd.singularValues()[0];
}

double DecayDistribution::pdf(const Vector3& lplus, const Vector3& lminus) const
{
  const double v = 1.0 + state_.bplus.dot(lplus) - state_.bminus.dot(lminus) - lplus.dot(state_.corr * lminus);
  return v / (kFourPi * kFourPi);
}

double DecayDistribution::marginal(int sign, const Vector3& l) const
{
  if (sign >= 0)
    return (1.0 + state_.bplus.dot(l)) / kFourPi;
  return (1.0 - state_.bminus.dot(l)) / kFourPi;
}

Vector3 uniform_direction(RandomStream& rng)
{
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

std::pair<Vector3, Vector3> DecayDistribution::sample(RandomStream& rng) const
{
  while (true) {
    const Vector3 lp = uniform_direction(rng);
    const Vector3 lm = uniform_direction(rng);
    const double u = rng.uniform();
    double f = 1.0 + state_.bplus.dot(lp) - state_.bminus.dot(lm) - lp.dot(state_.corr * lm);
    if (f < -1e-12 || f > envelope_ * (1.0 + 1e-12))
      throw InternalError("decay sampling: density outside the envelope");
    f = std::max(f, 0.0);
    if (u * envelope_ < f)
      return {lp, lm};
  }
}

double decay_pdf(const TwoQubitState& state, const Vector3& lplus, const Vector3& lminus)
{
  return DecayDistribution(state).pdf(lplus, lminus);
}

double marginal_pdf(const TwoQubitState& state, int sign, const Vector3& l)
{
  return DecayDistribution(state).marginal(sign, l);
}

std::pair<Vector3, Vector3> sample_decay(const TwoQubitState& state, RandomStream& rng)
{
  return DecayDistribution(state).sample(rng);
}

EventBatch generate_events(const TwoQubitState& state, std::size_t n, std::uint64_t seed, FrameTag frame)
{
  if (n == 0)
    throw DomainError("generate_events: need at least one event");
  const DecayDistribution dist(state);
  EventBatch batch;
  batch.seed = seed;
  batch.truth = state;
  batch.truth->frame = frame;
  batch.source = "fixed state";
  batch.generator = std::string(kGeneratorVersion);
  batch.events.resize(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      RandomStream rng(seed, i, kDecayTag);
      auto [lp, lm] = dist.sample(rng);
      batch.events[i] = DileptonEvent{lp, lm, std::nullopt, std::nullopt, frame};
    }
  });
  return batch;
}

namespace {

struct Cell
{
  Channel channel;
  double m_lo, m_hi;
  double c_lo, c_hi;
};

} // namespace

EventBatch generate_events(const ModelSource& source, std::size_t n, std::uint64_t seed)
{
  if (n == 0)
    throw DomainError("generate_events: need at least one event");
  if (source.mass_cells < 1 || source.cos_cells < 1)
    throw ConfigError("generate_events: cell counts must be positive");
  const auto& lumi = source.lumi;
  lumi.validate(source.m_t);
  const double m_cut = source.m_cut > 0.0 ? source.m_cut : lumi.max_mass();
  if (m_cut <= lumi.min_mass())
    throw DomainError("generate_events: mass cut at or below the start of the table");

  std::vector<Cell> cells;
  std::vector<double> cdf;
  double total = 0.0;
  const auto& rows = lumi.rows();
  for (std::size_t r = 0; r + 1 < rows.size() && rows[r].m_gev < m_cut; ++r) {
    const double a = rows[r].m_gev;
    const double b = std::min(rows[r + 1].m_gev, m_cut);
    const double dm = (b - a) / source.mass_cells;
    for (int i = 0; i < source.mass_cells; ++i) {
      const double m_lo = a + i * dm;
      const double m_mid = m_lo + 0.5 * dm;
      const auto [w_gg, w_qq] = lumi.weights_at(m_mid);
      const double beta = beta_from_mass(m_mid, source.m_t);
      const double dc = 2.0 / source.cos_cells;
      for (int j = 0; j < source.cos_cells; ++j) {
        const double c_lo = -1.0 + j * dc;
        const double theta = std::acos(c_lo + 0.5 * dc);
        for (const Channel ch : {Channel::gg, Channel::qqbar}) {
          const double w = ch == Channel::gg ? w_gg : w_qq;
          if (w <= 0.0)
            continue;
          total += w * 2.0 * std::numbers::pi * partonic_weight(ch, beta, theta) * dm * dc;
          cells.push_back({ch, m_lo, m_lo + dm, c_lo, c_lo + dc});
          cdf.push_back(total);
        }
      }
    }
  }
  if (cells.empty() || !(total > 0.0))
    throw InputDataError("generate_events: luminosity table has no weight below the mass cut");

  EventBatch batch;
  batch.seed = seed;
  batch.source = "model collider=" + lumi.collider() + " m_cut=" + format_double(m_cut);
  batch.generator = std::string(kGeneratorVersion);
  batch.events.resize(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      RandomStream kin(seed, i, kKinematicsTag);
      const double u = kin.uniform() * total;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const Cell& cell = cells[std::min<std::size_t>(it - cdf.begin(), cells.size() - 1)];
      const double m = cell.m_lo + kin.uniform() * (cell.m_hi - cell.m_lo);
      const double cos_t = std::clamp(cell.c_lo + kin.uniform() * (cell.c_hi - cell.c_lo), -1.0, 1.0);
      const double phi = 2.0 * std::numbers::pi * kin.uniform();
      const double theta = std::acos(cos_t);
      const double beta = std::max(0.0, beta_from_mass(std::max(m, 2.0 * source.m_t), source.m_t));

      RandomStream rng(seed, i, kDecayTag);
      auto [lp, lm] = DecayDistribution(spin_state(cell.channel, beta, theta)).sample(rng);
      if (source.record_frame == FrameTag::beam) {
        const Matrix3 axes = helicity_axes(theta, phi);
        lp = axes.transpose() * lp;
        lm = axes.transpose() * lm;
      }
      batch.events[i] = DileptonEvent{lp, lm, m, cos_t, source.record_frame};
    }
  });
  return batch;
}

std::string events_to_csv(const EventBatch& batch)
{
  std::string out;
  out.reserve(batch.events.size() * 180 + 256);
  out += "# seed = " + std::to_string(batch.seed) + "\n";
  out += "# source = " + batch.source + "\n";
  out += "# generator = " + batch.generator + "\n";
  if (batch.truth) {
    const auto& t = *batch.truth;
    out += "# truth =";
    for (int i = 0; i < 3; ++i)
      out += " " + format_double(t.bplus[i]);
    for (int i = 0; i < 3; ++i)
      out += " " + format_double(t.bminus[i]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out += " " + format_double(t.corr(i, j));
    out += "\n";
  }
  out += "event_id,m_gev,cos_theta,frame,lp_x,lp_y,lp_z,lm_x,lm_y,lm_z\n";
  for (std::size_t i = 0; i < batch.events.size(); ++i) {
    const auto& e = batch.events[i];
    out += std::to_string(i);
    out += ',';
    if (e.m_gev)
      out += format_double(*e.m_gev);
    out += ',';
    if (e.cos_theta)
      out += format_double(*e.cos_theta);
    out += ',';
    out += to_string(e.frame);
    for (const Vector3* v : {&e.lplus, &e.lminus})
      for (int k = 0; k < 3; ++k) {
        out += ',';
        out += format_double((*v)[k]);
      }
    out += '\n';
  }
  return out;
}

EventBatch parse_events_csv(std::string_view text)
{
  EventBatch batch;
  bool have_header = false;
  bool have_seed = false;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '#') {
      if (line.rfind("#!", 0) == 0)
        continue;
      const auto kv = parse_key_value(std::string_view(line).substr(1));
      if (!kv)
        continue;
      if (kv->first == "seed") {
        try {
          batch.seed = std::stoull(kv->second);
        } catch (const std::exception&) {
          throw InputDataError("event CSV: bad seed '" + kv->second + "'");
        }
        have_seed = true;
      } else if (kv->first == "source") {
        batch.source = kv->second;
      } else if (kv->first == "generator") {
        batch.generator = kv->second;
      } else if (kv->first == "truth") {
        std::istringstream is(kv->second);
        std::vector<double> v;
        for (std::string tok; is >> tok;)
          v.push_back(parse_double(tok, "truth coefficient"));
        if (v.size() != 15)
          throw InputDataError("event CSV: truth record needs 15 coefficients");
        TwoQubitState t;
        t.bplus = Vector3(v[0], v[1], v[2]);
        t.bminus = Vector3(v[3], v[4], v[5]);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            t.corr(i, j) = v[6 + 3 * i + j];
        batch.truth = t;
      }
      continue;
    }
    if (!have_header) {
      if (line != "event_id,m_gev,cos_theta,frame,lp_x,lp_y,lp_z,lm_x,lm_y,lm_z")
        throw InputDataError("event CSV: unexpected header '" + line + "'");
      have_header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 10)
      throw InputDataError("event CSV line " + std::to_string(line_no) + ": expected 10 fields");
    DileptonEvent e;
    if (!f[1].empty())
      e.m_gev = parse_double(f[1], "m_gev");
    if (!f[2].empty())
      e.cos_theta = parse_double(f[2], "cos_theta");
    try {
      e.frame = frame_tag_from_string(f[3]);
    } catch (const Error&) {
      throw InputDataError("event CSV line " + std::to_string(line_no) + ": bad frame '" + f[3] + "'");
    }
    for (int k = 0; k < 3; ++k) {
      e.lplus[k] = parse_double(f[4 + k], "lp");
      e.lminus[k] = parse_double(f[7 + k], "lm");
    }
    if (std::abs(e.lplus.norm() - 1.0) > 1e-10 || std::abs(e.lminus.norm() - 1.0) > 1e-10)
      throw InputDataError("event CSV line " + std::to_string(line_no) + ": direction is not a unit vector");
    batch.events.push_back(e);
  }
  if (!have_header)
    throw InputDataError("event CSV: missing header line");
  if (!have_seed)
    throw InputDataError("event CSV: missing seed comment");
  if (batch.truth && !batch.events.empty())
    batch.truth->frame = batch.events.front().frame;
  return batch;
}

} // namespace topcorr
