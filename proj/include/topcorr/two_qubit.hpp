#pragma once

#include <array>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace topcorr {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix2c = Eigen::Matrix2cd;
/// 4x4 two-qubit density matrix, basis |00>,|01>,|10>,|11> with the first factor being qubit A.
using DensityMatrix4 = Eigen::Matrix4cd;

enum class FrameTag
{
  helicity,
  beam
};

enum class Party
{
  A, ///< top, carries B+
  B  ///< antitop, carries B-
};

std::string_view to_string(FrameTag tag);
FrameTag frame_tag_from_string(std::string_view s);

/// Two-qubit state in Bloch form: rho = (1 + B+.sigma x 1 + 1 x B-.sigma + C_ij sigma_i x sigma_j)/4.
struct TwoQubitState
{
  Vector3 bplus = Vector3::Zero();
  Vector3 bminus = Vector3::Zero();
  Matrix3 corr = Matrix3::Zero();
  FrameTag frame = FrameTag::beam;

  static TwoQubitState maximally_mixed();
  static TwoQubitState singlet();
  /// Isotropic mixture C = -w 1.
  static TwoQubitState werner(double w);
  /// Unpolarized state with diagonal correlations (c1, c2, c3).
  static TwoQubitState t_state(double c1, double c2, double c3);
};

/// Exchange the roles of A and B: B+ <-> B-, C -> C^T.
TwoQubitState swap_parties(const TwoQubitState& state);

/// Max absolute difference over all 15 coefficients.
double coefficient_distance(const TwoQubitState& a, const TwoQubitState& b);

const std::array<Eigen::Matrix2cd, 3>& pauli();

DensityMatrix4 to_density_matrix(const TwoQubitState& state);

/// Inverse Pauli decomposition. Throws ValidationError for non-Hermitian or non-unit-trace input.
TwoQubitState from_density_matrix(const DensityMatrix4& rho, FrameTag frame = FrameTag::beam);

struct StateValidation
{
  bool is_physical;
  double min_eigenvalue;
};

inline constexpr double kPsdTolerance = 1e-10;

StateValidation validate_state(const TwoQubitState& state);

/// Throws ValidationError unless the state is positive semidefinite within kPsdTolerance.
void require_physical(const TwoQubitState& state, std::string_view context);

/// Eigenvalues of the Bell-diagonal state with correlations diag(c1, c2, c3).
std::array<double, 4> t_state_eigenvalues(double c1, double c2, double c3);

/// -sum x log2 x over the given spectrum, negative entries clamped to zero.
double entropy_from_eigenvalues(std::span<const double> eigenvalues);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix4& rho);
/// Single-qubit entropy h((1 + |r|)/2); |r| is clamped to 1.
double von_neumann_entropy(const Vector3& bloch);

/// Binary entropy in bits. Throws DomainError outside [0, 1].
double binary_entropy(double x);

/// Bloch vector of the reduced single-qubit state of `party`.
Vector3 reduced_state(const TwoQubitState& state, Party party);

struct ConditionalOutcome
{
  Vector3 bloch; ///< Bloch vector of A after B is found along sign * n
  double prob;
};

/// State of A after a projective measurement of B finds the spin along sign * n.
ConditionalOutcome conditional_state(const TwoQubitState& state, const Vector3& n, int sign = +1);

/// A reference frame at production angle theta (and azimuth phi of the top direction).
struct Frame
{
  FrameTag tag = FrameTag::beam;
  double theta = 0.0;
  double phi = 0.0;
};

/// Rows are the helicity axes k, n, r expressed in beam coordinates.
///
/// k = (sin t cos p, sin t sin p, cos t), r = (z - cos t k)/sin t, n = r x k.
/// At sin t = 0 the scattering plane is undefined and r = (cos p, sin p, 0).
Matrix3 helicity_axes(double theta, double phi = 0.0);

/// Re-express vectors and correlations of `state` given in `from` in the axes of `to`.
/// Both frames must describe the same top direction (same theta and phi).
TwoQubitState rotate_frame(const TwoQubitState& state, const Frame& from, const Frame& to);

/// Apply the same rotation R to both parties: B -> R B, C -> R C R^T.
TwoQubitState rotate(const TwoQubitState& state, const Matrix3& r);

} // namespace topcorr
