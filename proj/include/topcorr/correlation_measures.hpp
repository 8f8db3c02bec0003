#pragma once

#include <string_view>

#include "topcorr/ellipsoid.hpp"
#include "topcorr/two_qubit.hpp"

namespace topcorr {

struct DiscordOptions
{
  int grid_size = 128;     ///< Fibonacci seeds on the hemisphere
  double tol = 1e-10;      ///< absolute objective tolerance of the local refinement
  int refine_seeds = 3;    ///< best seeds that get refined
};

struct DiscordResult
{
  double value = 0.0;                         ///< bits, clamped at 0
  Vector3 optimal_direction = Vector3::UnitZ(); ///< measurement axis on the measured party
  int iterations = 0;                          ///< objective evaluations
};

/// Average entropy of A's conditional states after B is measured along +-n.
double conditional_entropy(const TwoQubitState& state, const Vector3& n);

/// Quantum discord of `party` (party A measures nothing; B is measured projectively).
///
/// D_A = S(rho_B) - S(rho) + min_n [p_n S(rho_n) + p_-n S(rho_-n)], minimized by a Fibonacci
/// multistart over the hemisphere followed by simplex refinement. D_B swaps the parties.
DiscordResult discord(const TwoQubitState& state, Party party = Party::A, const DiscordOptions& opts = {});

/// Closed form for unpolarized states with correlations diag(c1, c2, c3).
double discord_t_state(double c1, double c2, double c3);

/// Discord of the LO q qbar -> t tbar state: 1 - h(1/(2 - beta^2 sin^2 theta)).
double qqbar_discord_closed_form(double beta, double theta);

struct EntanglementResult
{
  bool entangled = false;
  double negativity = 0.0;       ///< sum of |negative eigenvalues| of the partial transpose
  double min_pt_eigenvalue = 0.0;
};

EntanglementResult is_entangled(const TwoQubitState& state);

struct SteeringQuadrature
{
  int polar_nodes = 64;    ///< Gauss-Legendre nodes per octant in the polar angle
  int azimuth_nodes = 128; ///< Gauss-Legendre nodes per octant in the azimuth
  double rel_tol = 1e-9;
  int max_doublings = 6;
};

/// (1/2pi) * integral over the unit sphere of sqrt(n^T C^T C n); steerable iff > 1.
double steering_functional(const Matrix3& corr, const SteeringQuadrature& quad = {});

/// Left-hand side of the steerability boundary for C = diag(cp, cp, cz):
/// |cz| + |cp| arcsin(k)/k with k^2 = 1 - cz^2/cp^2, continued analytically to |cp| < |cz|.
double steering_boundary_lhs(double cperp, double cz);

/// |C_perp| on the steerability boundary for a given C_z, by bisection to 1e-10 (|cz| < 1).
double steering_boundary_cperp(double cz);

struct BellResult
{
  bool nonlocal = false;
  double horodecki = 0.0; ///< sum of the two largest eigenvalues of C^T C
};

BellResult is_bell_nonlocal(const TwoQubitState& state);

enum class HierarchyClass
{
  classical,
  discordant_separable,
  entangled_unsteerable,
  steerable_local,
  bell_nonlocal
};

std::string_view to_string(HierarchyClass c);

struct ClassificationReport
{
  HierarchyClass cls = HierarchyClass::classical;
  double discord_a = 0.0;
  double discord_b = 0.0;
  double negativity = 0.0;
  double min_pt_eigenvalue = 0.0;
  double steering = 0.0;
  double horodecki = 0.0;
};

inline constexpr double kClassifyTolerance = 1e-9;

/// Every criterion evaluated; class is the innermost one satisfied beyond kClassifyTolerance.
/// Throws InternalError if the criteria are not nested.
ClassificationReport classify_detailed(const TwoQubitState& state, const DiscordOptions& opts = {});
HierarchyClass classify(const TwoQubitState& state);

/// Steering ellipsoid of the `steered` party generated by projective measurements on the other.
///
/// If the measuring party is unpolarized the ellipsoid follows exactly from the SVD of the
/// correlation matrix; otherwise `n_dirs` conditional states are swept and fitted.
SteeringEllipsoid steering_ellipsoid(const TwoQubitState& state, Party steered = Party::A, int n_dirs = 1000);

} // namespace topcorr
