#pragma once

#include <array>
#include <span>
#include <vector>

#include "topcorr/two_qubit.hpp"

namespace topcorr {

/// Set of Bloch vectors {center + orientation * diag(semiaxes) * u : |u| = 1}.
struct SteeringEllipsoid
{
  Vector3 center = Vector3::Zero();
  std::array<double, 3> semiaxes{}; ///< descending
  Matrix3 orientation = Matrix3::Identity(); ///< columns are the principal axes, det +1
  bool degenerate = false; ///< at least one semiaxis vanishes (flat, segment or point)
};

struct EllipsoidFit
{
  SteeringEllipsoid ellipsoid;
  std::vector<double> residuals; ///< (x - c)^T Q (x - c) - 1 for every input point
  int rank = 0;                  ///< number of non-degenerate principal directions of the point cloud
};

/// Least-squares quadric fit of points sampled on an ellipsoid surface.
///
/// The point cloud's principal spreads below `degenerate_tol` are treated as
/// collapsed: rank 3 fits a full ellipsoid, rank 2 fits a conic in the spanning plane,
/// rank 1 a segment and rank 0 a point. The quadratic form is normalized to unit
/// trace and the normal equations are solved directly.
EllipsoidFit fit_ellipsoid(std::span<const Vector3> points, double degenerate_tol = 1e-9);

/// Ellipsoid from a symmetric positive semidefinite shape matrix Q = M M^T, where the
/// ellipsoid is {center + M u}. Semiaxes are the square roots of Q's eigenvalues.
SteeringEllipsoid ellipsoid_from_shape(const Vector3& center, const Matrix3& shape, double degenerate_tol = 1e-12);

/// Orthonormal frame with det +1 built from columns, flipping the last column if needed.
Matrix3 proper_rotation(const Matrix3& columns);

} // namespace topcorr
