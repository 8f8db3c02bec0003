#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topcorr/two_qubit.hpp"

namespace topcorr {

inline constexpr double kDefaultTopMass = 173.0; // GeV

enum class Channel
{
  gg,
  qqbar
};

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

/// beta = sqrt(1 - 4 m_t^2 / M^2). Throws DomainError for M < 2 m_t.
double beta_from_mass(double m_ttbar, double m_t = kDefaultTopMass);
double mass_from_beta(double beta, double m_t = kDefaultTopMass);

struct KinematicPoint
{
  double m_ttbar;
  double beta;
  double theta;

  static KinematicPoint from_mass(double m_ttbar, double theta, double m_t = kDefaultTopMass);
  static KinematicPoint from_beta(double beta, double theta, double m_t = kDefaultTopMass);
};

/// LO QCD spin state of t tbar produced at velocity beta and angle theta, helicity frame {k, n, r}.
/// Polarizations vanish; C is symmetric.
TwoQubitState spin_state(Channel channel, double beta, double theta);

/// Unnormalized LO angular shape of d sigma / d Omega at fixed beta.
double partonic_shape(Channel channel, double beta, double theta);

/// Angular distribution of the channel at fixed beta, normalized to unit integral over the sphere.
double partonic_weight(Channel channel, double beta, double theta);

/// Integral of partonic_shape over the full solid angle.
double partonic_shape_norm(Channel channel, double beta);

struct WeightedState
{
  TwoQubitState state;
  double weight = 1.0;
  Frame frame{}; ///< frame the state is expressed in
};

/// Convex combination; every input is rotated to `target` first.
TwoQubitState mixed_state(std::span<const WeightedState> points, const Frame& target = {});

/// Express a state given in `frame` in the beam axes and back.
TwoQubitState to_beam(const TwoQubitState& state, const Frame& frame);
TwoQubitState from_beam(const TwoQubitState& beam_state, const Frame& frame);

struct LuminosityRow
{
  double m_gev;
  double weight_gg;
  double weight_qq;
};

/// Per-channel mass spectra d sigma / dM used to weight the partonic states, linearly interpolated.
class LuminosityTable
{
public:
  LuminosityTable() = default;
  LuminosityTable(std::vector<LuminosityRow> rows, std::string collider = "custom", double sqrt_s = 0.0);

  /// Throws InputDataError unless rows are strictly increasing, at least two, above 2 m_t and weights >= 0.
  void validate(double m_t) const;

  const std::vector<LuminosityRow>& rows() const { return rows_; }
  const std::string& collider() const { return collider_; }
  double sqrt_s() const { return sqrt_s_; }
  double min_mass() const { return rows_.front().m_gev; }
  double max_mass() const { return rows_.back().m_gev; }

  /// Interpolated (gg, qqbar) weights at m; zero outside the table.
  std::pair<double, double> weights_at(double m) const;

  /// Parse `m_gev,weight_gg,weight_qq` CSV text. `# key = value` comments may set collider and sqrt_s.
  static LuminosityTable parse_csv(std::string_view text);
  static LuminosityTable load_csv(const std::string& path);
  std::string to_csv() const;

  /// Built-in toy tables: threshold-gg, threshold-qq, flat-qq, lhc-toy, tevatron-toy.
  static LuminosityTable builtin(std::string_view name, double m_t = kDefaultTopMass);
  static std::vector<std::string> builtin_names();

  /// "builtin:<name>" or a CSV path.
  static LuminosityTable resolve(const std::string& spec, double m_t = kDefaultTopMass);

private:
  std::vector<LuminosityRow> rows_;
  std::string collider_ = "custom";
  double sqrt_s_ = 0.0;
};

/// Spin state model used by the integrator; defaults to spin_state.
using SpinModel = std::function<TwoQubitState(Channel, double beta, double theta)>;

struct IntegrationOptions
{
  double m_t = kDefaultTopMass;
  int cos_nodes = 64;        ///< initial Gauss-Legendre nodes in cos theta
  int phi_nodes = 8;         ///< trapezoid nodes in azimuth (exact for the quadrupole dependence)
  int mass_subintervals = 2; ///< initial Simpson subintervals per table interval
  double tol = 1e-9;
  int max_doublings = 8;
  SpinModel model;           ///< empty -> spin_state
};

struct IntegratedTState
{
  double c_perp;
  double c_z;
};

/// Full coefficient record of the phase-space averaged state over M in [2 m_t, m_cut], beam axes.
TwoQubitState integrate_beam(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts = {});

/// Rotationally averaged beam state; checks it is diagonal with C_11 = C_22 and inside the physical triangle.
IntegratedTState integrated_state(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts = {});

/// Same average taken over helicity-frame coefficients, without rotating to a common frame.
TwoQubitState integrated_matrix_helicity(const LuminosityTable& lumi, double m_cut,
                                         const IntegrationOptions& opts = {});

struct TrajectoryPoint
{
  double m_cut;
  IntegratedTState state;
};

std::vector<TrajectoryPoint> trajectory(const LuminosityTable& lumi, std::span<const double> cuts,
                                        const IntegrationOptions& opts = {});

/// Unpolarized beam state diag(c_perp, c_perp, c_z).
TwoQubitState to_two_qubit(const IntegratedTState& s);

} // namespace topcorr
