#include "topcorr/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "topcorr/errors.hpp"

namespace topcorr {

namespace {

using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

constexpr double kRimTolerance = 0.05;

VectorX solve_normal_equations(const MatrixX& design, const VectorX& rhs)
{
  const MatrixX normal = design.transpose() * design;
  const VectorX proj = design.transpose() * rhs;
  Eigen::LDLT<MatrixX> ldlt(normal);
  if (ldlt.info() != Eigen::Success)
    throw InternalError("fit_ellipsoid: normal equations are singular");
  return ldlt.solve(proj);
}

struct QuadricInLocal
{
  VectorX center;
  MatrixX form; // (y - c)^T form (y - c) = 1
  bool positive_definite;
};

// Fit y^T A y + b.y + d = 0 with tr A = 1 to points in `dim` local coordinates (dim = 2 or 3).
QuadricInLocal fit_quadric(const std::vector<VectorX>& ys, int dim)
{
  const int n_quad = dim * (dim + 1) / 2 - 1; // free entries of A after tr A = 1
  const int n_par = n_quad + dim + 1;
  MatrixX design(static_cast<Eigen::Index>(ys.size()), n_par);
  VectorX rhs(static_cast<Eigen::Index>(ys.size()));
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(ys.size()); ++r) {
    const VectorX& y = ys[r];
    const double last = y[dim - 1] * y[dim - 1];
    int c = 0;
    for (int i = 0; i < dim - 1; ++i)
      design(r, c++) = y[i] * y[i] - last;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        design(r, c++) = 2.0 * y[i] * y[j];
    for (int i = 0; i < dim; ++i)
      design(r, c++) = y[i];
    design(r, c++) = 1.0;
    rhs[r] = -last;
  }
  const VectorX theta = solve_normal_equations(design, rhs);

  MatrixX a = MatrixX::Zero(dim, dim);
  int c = 0;
  double diag_sum = 0.0;
  for (int i = 0; i < dim - 1; ++i) {
    a(i, i) = theta[c++];
    diag_sum += a(i, i);
  }
  a(dim - 1, dim - 1) = 1.0 - diag_sum;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      a(i, j) = a(j, i) = theta[c++];
  const VectorX b = theta.segment(c, dim);
  const double d = theta[c + dim];

  QuadricInLocal q;
  q.center = -0.5 * a.ldlt().solve(b);
  const double kappa = q.center.dot(a * q.center) - d;
  q.form = a / kappa;
  Eigen::SelfAdjointEigenSolver<MatrixX> es(q.form, Eigen::EigenvaluesOnly);
  q.positive_definite = std::isfinite(kappa) && es.eigenvalues().minCoeff() > 0.0;
  return q;
}

// Filled ellipse {c + M u : |u| <= 1} in the plane from its support function: along every
// direction d the half width is sqrt(d^T Q d) and the midpoint is d.c, with Q = M M^T.
QuadricInLocal fit_support_2d(const std::vector<VectorX>& ys)
{
  constexpr int kDirections = 90;
  MatrixX width_design(kDirections, 3), mid_design(kDirections, 2);
  VectorX width_sq(kDirections), mid(kDirections);
  for (int k = 0; k < kDirections; ++k) {
    const double phi = std::numbers::pi * k / kDirections;
    const Eigen::Vector2d d(std::cos(phi), std::sin(phi));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& y : ys) {
      const double t = d.dot(y.head<2>());
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    width_design.row(k) << d[0] * d[0], 2.0 * d[0] * d[1], d[1] * d[1];
    width_sq[k] = 0.25 * (hi - lo) * (hi - lo);
    mid_design.row(k) << d[0], d[1];
    mid[k] = 0.5 * (hi + lo);
  }
  const VectorX qv = solve_normal_equations(width_design, width_sq);
  Eigen::Matrix2d shape;
  shape << qv[0], qv[1], qv[1], qv[2];
  QuadricInLocal q;
  q.center = solve_normal_equations(mid_design, mid);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(shape, Eigen::EigenvaluesOnly);
  q.positive_definite = es.eigenvalues().minCoeff() > 0.0;
  q.form = q.positive_definite ? MatrixX(shape.inverse()) : MatrixX(shape);
  return q;
}

double rms_residual(const QuadricInLocal& q, const std::vector<VectorX>& ys)
{
  double s = 0.0;
  for (const auto& y : ys) {
    const VectorX dy = y - q.center;
    const double r = dy.dot(q.form * dy) - 1.0;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(ys.size()));
}

} // namespace

Matrix3 proper_rotation(const Matrix3& columns)
{
  Matrix3 r = columns;
  if (r.determinant() < 0.0)
    r.col(2) = -r.col(2);
  return r;
}

SteeringEllipsoid ellipsoid_from_shape(const Vector3& center, const Matrix3& shape, double degenerate_tol)
{
  Eigen::SelfAdjointEigenSolver<Matrix3> es(0.5 * (shape + shape.transpose()));
  SteeringEllipsoid e;
  e.center = center;
  Matrix3 axes;
  for (int i = 0; i < 3; ++i) {
    e.semiaxes[i] = std::sqrt(std::max(es.eigenvalues()[2 - i], 0.0));
    axes.col(i) = es.eigenvectors().col(2 - i);
  }
  e.orientation = proper_rotation(axes);
  e.degenerate = e.semiaxes[2] < degenerate_tol;
  return e;
}

EllipsoidFit fit_ellipsoid(std::span<const Vector3> points, double degenerate_tol)
{
  if (points.empty())
    throw DomainError("fit_ellipsoid: no points");
  const double n = static_cast<double>(points.size());
  Vector3 mean = Vector3::Zero();
  for (const auto& p : points)
    mean += p;
  mean /= n;
  Matrix3 cov = Matrix3::Zero();
  for (const auto& p : points)
    cov += (p - mean) * (p - mean).transpose();
  cov /= n;

  Eigen::SelfAdjointEigenSolver<Matrix3> pca(cov);
  Matrix3 axes;     // principal directions, descending spread
  Vector3 spread;
  for (int i = 0; i < 3; ++i)
    axes.col(i) = pca.eigenvectors().col(2 - i);
  // rms of the projections; the square root of a rounding-level eigenvalue would be far larger
  spread.setZero();
  for (const auto& p : points)
    spread += (axes.transpose() * (p - mean)).cwiseAbs2();
  spread = (spread / n).cwiseSqrt();
  int rank = 0;
  while (rank < 3 && spread[rank] > degenerate_tol)
    ++rank;

  EllipsoidFit fit;
  fit.rank = rank;
  fit.residuals.assign(points.size(), 0.0);
  SteeringEllipsoid& e = fit.ellipsoid;
  e.degenerate = rank < 3;

  if (rank >= 2 && points.size() >= static_cast<std::size_t>(rank == 3 ? 9 : 5)) {
    std::vector<VectorX> ys;
    ys.reserve(points.size());
    for (const auto& p : points)
      ys.push_back((axes.transpose() * (p - mean)).head(rank));
    auto q = fit_quadric(ys, rank);
    // a flat ellipsoid swept by all measurement directions fills its interior
    if (rank == 2 && (!q.positive_definite || rms_residual(q, ys) > kRimTolerance))
      q = fit_support_2d(ys);
    if (q.positive_definite) {
      Eigen::SelfAdjointEigenSolver<MatrixX> es(q.form);
      Matrix3 oriented = axes; // rank 2 keeps the plane normal as the last axis
      Vector3 center_local = Vector3::Zero();
      center_local.head(rank) = q.center;
      for (int i = 0; i < rank; ++i) {
        // ascending eigenvalues of the form <-> descending semiaxes
        e.semiaxes[i] = 1.0 / std::sqrt(es.eigenvalues()[i]);
        oriented.col(i) = axes.leftCols(rank) * es.eigenvectors().col(i);
      }
      for (int i = rank; i < 3; ++i)
        e.semiaxes[i] = 0.0;
      e.center = mean + axes * center_local;
      e.orientation = proper_rotation(oriented);
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const VectorX dy = ys[k] - q.center;
        fit.residuals[k] = dy.dot(q.form * dy) - 1.0;
      }
      return fit;
    }
    // indefinite quadric: the cloud does not resolve an ellipsoid
    e.degenerate = true;
    fit.rank = std::min(rank, 1);
    rank = fit.rank;
  }

  e.orientation = proper_rotation(axes);
  e.center = mean;
  e.semiaxes = {0.0, 0.0, 0.0};
  if (rank >= 1) {
    double lo = 0.0, hi = 0.0;
    for (const auto& p : points) {
      const double t = axes.col(0).dot(p - mean);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    e.semiaxes[0] = 0.5 * (hi - lo);
    e.center = mean + 0.5 * (hi + lo) * axes.col(0);
  }
  return fit;
}

} // namespace topcorr
