#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topcorr/production.hpp"
#include "topcorr/rng.hpp"
#include "topcorr/two_qubit.hpp"

namespace topcorr {

struct DileptonEvent
{
  Vector3 lplus;  ///< antilepton direction in the top rest frame
  Vector3 lminus; ///< lepton direction in the antitop rest frame
  std::optional<double> m_gev;
  std::optional<double> cos_theta;
  FrameTag frame = FrameTag::beam;
};

struct EventBatch
{
  std::vector<DileptonEvent> events;
  std::uint64_t seed = 0;
  std::optional<TwoQubitState> truth;
  std::string source;
  std::string generator;
};

inline constexpr std::string_view kGeneratorVersion = "topcorr-decay 1.0 philox4x32-10";

/// Joint lepton angular distribution of a spin state,
/// p(l+, l-) = (1 + B+.l+ - B-.l- - l+.C.l-) / (4 pi)^2.
class DecayDistribution
{
public:
  /// Throws ValidationError for an unphysical state.
  explicit DecayDistribution(const TwoQubitState& state);

  double pdf(const Vector3& lplus, const Vector3& lminus) const;

  /// Single-lepton density: (1 + B+.l)/4pi for sign = +1, (1 - B-.l)/4pi for sign = -1.
  double marginal(int sign, const Vector3& l) const;

  /// Rejection sampling from the uniform pair density.
  std::pair<Vector3, Vector3> sample(RandomStream& rng) const;

  /// Upper bound of (4 pi)^2 p.
  double envelope() const { return envelope_; }
  const TwoQubitState& state() const { return state_; }

private:
  TwoQubitState state_;
  double envelope_;
};

double decay_pdf(const TwoQubitState& state, const Vector3& lplus, const Vector3& lminus);
double marginal_pdf(const TwoQubitState& state, int sign, const Vector3& l);
std::pair<Vector3, Vector3> sample_decay(const TwoQubitState& state, RandomStream& rng);

/// Uniform unit vector from two draws.
Vector3 uniform_direction(RandomStream& rng);

/// Events from a fixed spin state; directions are taken as expressed in `frame`.
EventBatch generate_events(const TwoQubitState& state, std::size_t n, std::uint64_t seed,
                           FrameTag frame = FrameTag::beam);

struct ModelSource
{
  LuminosityTable lumi;
  double m_cut = 0.0;   ///< upper mass cut; <= 0 means the end of the table
  double m_t = kDefaultTopMass;
  FrameTag record_frame = FrameTag::helicity;
  int mass_cells = 8;   ///< sampling cells per table interval
  int cos_cells = 64;
};

/// Events from the LO production model: (M, cos theta) drawn from the table times the
/// partonic angular weight on a cell grid, azimuth uniform, then decay directions.
EventBatch generate_events(const ModelSource& source, std::size_t n, std::uint64_t seed);

/// Event CSV with seed, source and generator comment lines.
std::string events_to_csv(const EventBatch& batch);
EventBatch parse_events_csv(std::string_view text);

} // namespace topcorr
