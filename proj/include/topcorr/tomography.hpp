#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "topcorr/decay.hpp"
#include "topcorr/ellipsoid.hpp"

namespace topcorr {

struct StateEstimate
{
  TwoQubitState state;
  /// B+ (3), B- (3), C row-major (9)
  std::array<double, 15> std_errors{};
  std::size_t n_events = 0;
};

/// Moment estimators B+ = 3<l+>, B- = -3<l->, C_ij = -9<l+_i l-_j> with sample-moment errors.
/// Needs at least 100 events.
StateEstimate estimate_state(const EventBatch& batch);

/// Von Neumann entropy of a reconstructed state. Eigenvalues below `noise_sigmas` times the
/// expected Frobenius norm of the estimation noise are dropped and the rest renormalized.
double spectral_entropy(const TwoQubitState& state, const std::array<double, 15>& std_errors,
                        double noise_sigmas = 2.0);

struct ConditionalEstimate
{
  Vector3 direction;   ///< measurement axis n on the antitop
  double cone_alpha = 0.0;
  Vector3 bloch;       ///< 3 <l+> over the selected events
  Vector3 bloch_error;
  double prob = 0.0;   ///< (N_sel / N) 2pi / Omega_cone
  std::size_t n_selected = 0;
};

inline constexpr std::size_t kMinConeEvents = 50;

/// Conditional top Bloch vector for the antitop spin found along n, from events whose
/// lepton lies within `alpha` of -n. Mean over the cone biases Bloch vector and
/// probability at O(alpha^2): both estimate the exact values with C and B- scaled by
/// (1 + cos alpha)/2.
ConditionalEstimate conditional_bloch(const EventBatch& batch, const Vector3& n, double alpha);

/// Bucketed lepton directions for repeated cone selections on one batch.
class ConeSelector
{
public:
  explicit ConeSelector(const EventBatch& batch);

  /// Indices of events with l- within alpha of `axis`, ascending.
  std::vector<std::uint32_t> select(const Vector3& axis, double alpha) const;

  std::size_t size() const { return lminus_.size(); }

private:
  int bin_of(double z, double phi) const;

  int nz_;
  int nphi_;
  std::vector<Vector3> lminus_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> order_;
};

ConditionalEstimate conditional_bloch(const EventBatch& batch, const ConeSelector& selector, const Vector3& n,
                                      double alpha);

/// Undo the cone average given the global B+ estimate: returns the exact conditional
/// Bloch vector and probability of the state whose cone means were observed.
ConditionalOutcome debias_conditional(const Vector3& cone_bloch, double cone_prob, const Vector3& bplus, double alpha);

struct ConditionalPair
{
  ConditionalOutcome plus;  ///< outcome along +n
  ConditionalOutcome minus; ///< outcome along -n
};

/// S(rho_B) - S(rho) + min over measurements of sum p h((1+|B|)/2), with probabilities
/// of each pair renormalized to one and |B| clamped to 1.
double discord_from_conditionals(double entropy_b, double entropy_total, const std::vector<ConditionalPair>& pairs);

struct DirectDiscordOptions
{
  int grid_size = 1000;
  double alpha = 0.2;
  bool debias = true;       ///< remove the cone-average bias analytically
  bool extrapolate = false; ///< Richardson in alpha^2 using alpha and alpha/sqrt(2)
  double entropy_noise_sigmas = 2.0; ///< noise floor of the reconstructed spectrum
  int bootstrap = 20;       ///< Poisson replicas for the statistical error; 0 disables it
  std::uint64_t bootstrap_seed = 0x5eed;
};

struct DirectDiscordResult
{
  double value = 0.0;      ///< bits, not clamped
  double std_error = 0.0;  ///< bootstrap spread
  double entropy_b = 0.0;
  double entropy_total = 0.0;
  Vector3 optimal_direction = Vector3::UnitZ();
  std::size_t min_cone_events = 0;
};

/// Discord of the top from measured quantities only; grid minimization over n.
DirectDiscordResult direct_discord(const EventBatch& batch, const DirectDiscordOptions& opts = {});

struct EllipsoidReconstruction
{
  EllipsoidFit fit;
  std::vector<ConditionalEstimate> directions;
  double degenerate_tol = 0.0;
};

/// Conditional Bloch vectors over a Fibonacci grid of n and a quadric fit through them.
/// Point spreads below a few conditional standard errors count as degenerate.
EllipsoidReconstruction reconstruct_ellipsoid(const EventBatch& batch, int grid_size = 1000, double alpha = 0.2,
                                              bool debias = true);

} // namespace topcorr
