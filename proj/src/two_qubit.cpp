#include "topcorr/two_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "topcorr/errors.hpp"

namespace topcorr {

namespace {

using cd = std::complex<double>;

DensityMatrix4 kron(const Matrix2c& a, const Matrix2c& b)
{
  DensityMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const std::array<DensityMatrix4, 3>& sigma_a()
{
  static const std::array<DensityMatrix4, 3> s = {kron(pauli()[0], Matrix2c::Identity()),
                                                   kron(pauli()[1], Matrix2c::Identity()),
                                                   kron(pauli()[2], Matrix2c::Identity())};
  return s;
}

const std::array<DensityMatrix4, 3>& sigma_b()
{
  static const std::array<DensityMatrix4, 3> s = {kron(Matrix2c::Identity(), pauli()[0]),
                                                   kron(Matrix2c::Identity(), pauli()[1]),
                                                   kron(Matrix2c::Identity(), pauli()[2])};
  return s;
}

const std::array<std::array<DensityMatrix4, 3>, 3>& sigma_ab()
{
  static const auto s = [] {
    std::array<std::array<DensityMatrix4, 3>, 3> out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out[i][j] = kron(pauli()[i], pauli()[j]);
    return out;
  }();
  return s;
}

double xlog2x(double x)
{
  return x > 0.0 ? x * std::log2(x) : 0.0;
}

} // namespace

std::string_view to_string(FrameTag tag)
{
  return tag == FrameTag::helicity ? "helicity" : "beam";
}

FrameTag frame_tag_from_string(std::string_view s)
{
  if (s == "helicity")
    return FrameTag::helicity;
  if (s == "beam")
    return FrameTag::beam;
  throw DomainError("unknown frame '" + std::string(s) + "' (expected helicity or beam)");
}

TwoQubitState TwoQubitState::maximally_mixed()
{
  return {};
}

TwoQubitState TwoQubitState::singlet()
{
  return werner(1.0);
}

TwoQubitState TwoQubitState::werner(double w)
{
  TwoQubitState s;
  s.corr = -w * Matrix3::Identity();
  return s;
}

TwoQubitState TwoQubitState::t_state(double c1, double c2, double c3)
{
  TwoQubitState s;
  s.corr = Vector3(c1, c2, c3).asDiagonal();
  return s;
}

TwoQubitState swap_parties(const TwoQubitState& state)
{
  TwoQubitState out = state;
  out.bplus = state.bminus;
  out.bminus = state.bplus;
  out.corr = state.corr.transpose();
  return out;
}

double coefficient_distance(const TwoQubitState& a, const TwoQubitState& b)
{
  return std::max({(a.bplus - b.bplus).cwiseAbs().maxCoeff(), (a.bminus - b.bminus).cwiseAbs().maxCoeff(),
                   (a.corr - b.corr).cwiseAbs().maxCoeff()});
}

const std::array<Eigen::Matrix2cd, 3>& pauli()
{
  static const std::array<Eigen::Matrix2cd, 3> s = [] {
    std::array<Eigen::Matrix2cd, 3> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, cd(0, -1), cd(0, 1), 0;
    p[2] << 1, 0, 0, -1;
    return p;
  }();
  return s;
}

DensityMatrix4 to_density_matrix(const TwoQubitState& state)
{
  DensityMatrix4 rho = DensityMatrix4::Identity();
  for (int i = 0; i < 3; ++i) {
    rho += state.bplus[i] * sigma_a()[i] + state.bminus[i] * sigma_b()[i];
    for (int j = 0; j < 3; ++j)
      rho += state.corr(i, j) * sigma_ab()[i][j];
  }
  return rho / 4.0;
}

TwoQubitState from_density_matrix(const DensityMatrix4& rho, FrameTag frame)
{
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= 1e-12))
    throw ValidationError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  const cd tr = rho.trace();
  if (!(std::abs(tr - 1.0) <= 1e-12))
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");

  TwoQubitState s;
  s.frame = frame;
  for (int i = 0; i < 3; ++i) {
    s.bplus[i] = (rho * sigma_a()[i]).trace().real();
    s.bminus[i] = (rho * sigma_b()[i]).trace().real();
    for (int j = 0; j < 3; ++j)
      s.corr(i, j) = (rho * sigma_ab()[i][j]).trace().real();
  }
  return s;
}

StateValidation validate_state(const TwoQubitState& state)
{
  if (!state.bplus.allFinite() || !state.bminus.allFinite() || !state.corr.allFinite())
    return {false, std::numeric_limits<double>::quiet_NaN()};
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(to_density_matrix(state), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return {lmin >= -kPsdTolerance, lmin};
}

void require_physical(const TwoQubitState& state, std::string_view context)
{
  const auto v = validate_state(state);
  if (!v.is_physical)
    throw ValidationError(std::string(context) + ": state is not positive semidefinite (min eigenvalue " +
                          std::to_string(v.min_eigenvalue) + ")");
}

std::array<double, 4> t_state_eigenvalues(double c1, double c2, double c3)
{
  return {0.25 * (1 - c1 - c2 - c3), 0.25 * (1 - c1 + c2 + c3), 0.25 * (1 + c1 - c2 + c3),
          0.25 * (1 + c1 + c2 - c3)};
}

double entropy_from_eigenvalues(std::span<const double> eigenvalues)
{
  double s = 0.0;
  for (double x : eigenvalues)
    s -= xlog2x(std::max(x, 0.0));
  return s + 0.0; // no -0
}

double von_neumann_entropy(const DensityMatrix4& rho)
{
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(rho, Eigen::EigenvaluesOnly);
  const Eigen::Vector4d ev = es.eigenvalues();
  return entropy_from_eigenvalues(std::span<const double>(ev.data(), 4));
}

double von_neumann_entropy(const Vector3& bloch)
{
  const double r = std::min(bloch.norm(), 1.0);
  return binary_entropy(0.5 * (1.0 + r));
}

double binary_entropy(double x)
{
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0, 1]");
  return -xlog2x(x) - xlog2x(1.0 - x) + 0.0;
}

Vector3 reduced_state(const TwoQubitState& state, Party party)
{
  return party == Party::A ? state.bplus : state.bminus;
}

ConditionalOutcome conditional_state(const TwoQubitState& state, const Vector3& n, int sign)
{
  if (std::abs(n.norm() - 1.0) > 1e-10)
    throw DomainError("conditional_state: measurement direction is not a unit vector");
  if (sign != 1 && sign != -1)
    throw DomainError("conditional_state: sign must be +1 or -1");
  const Vector3 dir = static_cast<double>(sign) * n;
  const double denom = 1.0 + dir.dot(state.bminus);
  const double prob = 0.5 * denom;
  if (prob <= 1e-14)
    throw DegenerateMeasurementError("conditional_state: outcome probability vanishes");
  return {(state.bplus + state.corr * dir) / denom, prob};
}

Matrix3 helicity_axes(double theta, double phi)
{
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const Vector3 k(st * cp, st * sp, ct);
  Vector3 r;
  if (std::abs(st) < 1e-12)
    r = Vector3(cp, sp, 0.0);
  else
    r = (Vector3::UnitZ() - ct * k) / st;
  r.normalize();
  const Vector3 n = r.cross(k);
  Matrix3 axes;
  axes.row(0) = k;
  axes.row(1) = n;
  axes.row(2) = r;
  return axes;
}

TwoQubitState rotate(const TwoQubitState& state, const Matrix3& r)
{
  TwoQubitState out = state;
  out.bplus = r * state.bplus;
  out.bminus = r * state.bminus;
  out.corr = r * state.corr * r.transpose();
  return out;
}

TwoQubitState rotate_frame(const TwoQubitState& state, const Frame& from, const Frame& to)
{
  for (const Frame* f : {&from, &to})
    if (!(f->theta >= 0.0 && f->theta <= std::numbers::pi))
      throw DomainError("rotate_frame: theta outside [0, pi]");
  if (from.theta != to.theta || from.phi != to.phi)
    throw DomainError("rotate_frame: frames refer to different production angles");
  if (from.tag == to.tag) {
    TwoQubitState out = state;
    out.frame = to.tag;
    return out;
  }
  const Matrix3 axes = helicity_axes(from.theta, from.phi);
  TwoQubitState out = rotate(state, from.tag == FrameTag::beam ? axes : Matrix3(axes.transpose()));
  out.frame = to.tag;
  return out;
}

} // namespace topcorr
