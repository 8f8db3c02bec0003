#pragma once

#include <array>
#include <string>

#include "topcorr/correlation_measures.hpp"

namespace topcorr {

/// D_t - D_tbar.
double discord_asymmetry(const TwoQubitState& state, const DiscordOptions& opts = {});

struct EllipsoidAsymmetry
{
  Vector3 center_asymmetry = Vector3::Zero();   ///< center of the top ellipsoid minus the antitop one
  std::array<double, 3> semiaxis_asymmetry{};   ///< per rank, descending order
  double orientation_angle = 0.0;               ///< largest principal angle between matching axis subspaces
  bool degenerate = false;                      ///< at least one ellipsoid is flat
};

EllipsoidAsymmetry ellipsoid_asymmetry(const TwoQubitState& state);

/// Largest principal angle between the principal-axis subspaces of two ellipsoids.
/// Axes with equal semiaxes (within `tol`) in either ellipsoid form one subspace.
double orientation_angle(const SteeringEllipsoid& a, const SteeringEllipsoid& b, double tol = 1e-9);

struct Injection
{
  TwoQubitState state;
  double scale = 1.0;         ///< fraction of the requested perturbation applied
  bool zero_capacity = false; ///< input sits on the boundary, nothing could be applied
};

/// B+ -> B+ + s eps_b, B- -> B- - s eps_b, C -> C + s eps_c with the largest s in [0, 1]
/// that keeps the state physical. eps_c must be antisymmetric.
Injection inject_cp_violation(const TwoQubitState& state, const Vector3& eps_b, const Matrix3& eps_c);

struct WitnessReport
{
  double delta_discord = 0.0;
  Vector3 center_asymmetry = Vector3::Zero();
  std::array<double, 3> semiaxis_asymmetry{};
  double orientation_angle = 0.0;
  Vector3 b_asymmetry = Vector3::Zero(); ///< B+ - B-
  double c_antisymmetry_norm = 0.0;      ///< Frobenius norm of C - C^T
  bool degenerate = false;
};

WitnessReport witness_report(const TwoQubitState& state, const DiscordOptions& opts = {});

/// `key,value` rows with one key per report field component.
std::string witness_report_csv(const WitnessReport& report);

} // namespace topcorr
