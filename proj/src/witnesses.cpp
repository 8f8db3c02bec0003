#include "topcorr/witnesses.hpp"

#include <algorithm>
#include <cmath>

#include "topcorr/errors.hpp"
#include "topcorr/io.hpp"

namespace topcorr {

double discord_asymmetry(const TwoQubitState& state, const DiscordOptions& opts)
{
  require_physical(state, "discord_asymmetry");
  return discord(state, Party::A, opts).value - discord(state, Party::B, opts).value;
}

namespace {

// groups of consecutive ranks whose semiaxes coincide in either ellipsoid
std::vector<std::pair<int, int>> axis_groups(const SteeringEllipsoid& a, const SteeringEllipsoid& b, double tol)
{
  std::vector<std::pair<int, int>> groups;
  int start = 0;
  for (int i = 1; i <= 3; ++i) {
    const bool split = i == 3 || (std::abs(a.semiaxes[i - 1] - a.semiaxes[i]) > tol &&
                                  std::abs(b.semiaxes[i - 1] - b.semiaxes[i]) > tol);
    if (split) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  return groups;
}

} // namespace

double orientation_angle(const SteeringEllipsoid& a, const SteeringEllipsoid& b, double tol)
{
  double angle = 0.0;
  for (const auto& [lo, hi] : axis_groups(a, b, tol)) {
    const int k = hi - lo;
    if (k == 3)
      continue;
    const Eigen::MatrixXd overlap = a.orientation.middleCols(lo, k).transpose() * b.orientation.middleCols(lo, k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap);
    const double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
    angle = std::max(angle, std::acos(smin));
  }
  return angle;
}

EllipsoidAsymmetry ellipsoid_asymmetry(const TwoQubitState& state)
{
  require_physical(state, "ellipsoid_asymmetry");
  const SteeringEllipsoid top = steering_ellipsoid(state, Party::A);
  const SteeringEllipsoid antitop = steering_ellipsoid(state, Party::B);
  EllipsoidAsymmetry out;
  out.center_asymmetry = top.center - antitop.center;
  for (int i = 0; i < 3; ++i)
    out.semiaxis_asymmetry[i] = top.semiaxes[i] - antitop.semiaxes[i];
  out.orientation_angle = orientation_angle(top, antitop);
  out.degenerate = top.degenerate || antitop.degenerate;
  return out;
}

namespace {

// True if rho + s delta leaves the PSD cone for every s > 0: delta must be PSD on the kernel
// of rho and must not couple the null directions of that restriction to the range of rho.
bool no_room(const TwoQubitState& state, const DensityMatrix4& delta)
{
  constexpr double kRankTol = 1e-12;
  const double scale = delta.norm();
  if (scale == 0.0)
    return false;
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(to_density_matrix(state));
  int k = 0;
  while (k < 4 && es.eigenvalues()[k] < kRankTol)
    ++k;
  if (k == 0)
    return false;
  const Eigen::MatrixXcd kernel = es.eigenvectors().leftCols(k);
  const Eigen::MatrixXcd range = es.eigenvectors().rightCols(4 - k);
  const Eigen::MatrixXcd restricted = kernel.adjoint() * delta * kernel;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ks(restricted);
  if (ks.eigenvalues()[0] < -kRankTol * scale)
    return true;
  int z = 0;
  while (z < k && ks.eigenvalues()[z] < kRankTol * scale)
    ++z;
  if (z == 0 || range.cols() == 0)
    return false;
  const Eigen::MatrixXcd null_dirs = kernel * ks.eigenvectors().leftCols(z);
  return (range.adjoint() * delta * null_dirs).norm() > kRankTol * scale;
}

} // namespace

Injection inject_cp_violation(const TwoQubitState& state, const Vector3& eps_b, const Matrix3& eps_c)
{
  require_physical(state, "inject_cp_violation");
  if ((eps_c + eps_c.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("inject_cp_violation: eps_c must be antisymmetric");

  auto apply = [&](double s) {
    TwoQubitState out = state;
    out.bplus += s * eps_b;
    out.bminus -= s * eps_b;
    out.corr += s * eps_c;
    return out;
  };
  auto physical = [&](double s) { return validate_state(apply(s)).is_physical; };

  Injection inj;
  if (no_room(state, to_density_matrix(apply(1.0)) - to_density_matrix(state))) {
    inj.scale = 0.0;
    inj.zero_capacity = true;
    inj.state = state;
    return inj;
  }
  if (physical(1.0)) {
    inj.state = apply(1.0);
    return inj;
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (physical(mid) ? lo : hi) = mid;
  }
  if (lo < 1e-8) {
    inj.scale = 0.0;
    inj.zero_capacity = true;
    inj.state = state;
    return inj;
  }
  inj.scale = lo;
  inj.state = apply(lo);
  return inj;
}

WitnessReport witness_report(const TwoQubitState& state, const DiscordOptions& opts)
{
  WitnessReport r;
  r.delta_discord = discord_asymmetry(state, opts);
  const EllipsoidAsymmetry e = ellipsoid_asymmetry(state);
  r.center_asymmetry = e.center_asymmetry;
  r.semiaxis_asymmetry = e.semiaxis_asymmetry;
  r.orientation_angle = e.orientation_angle;
  r.degenerate = e.degenerate;
  r.b_asymmetry = state.bplus - state.bminus;
  r.c_antisymmetry_norm = (state.corr - state.corr.transpose()).norm();
  return r;
}

std::string witness_report_csv(const WitnessReport& r)
{
  std::string out = "key,value\n";
  auto row = [&](const std::string& k, double v) { out += k + "," + format_double(v) + "\n"; };
  static const char* xyz[] = {"x", "y", "z"};
  row("delta_discord", r.delta_discord);
  for (int i = 0; i < 3; ++i)
    row(std::string("center_asymmetry_") + xyz[i], r.center_asymmetry[i]);
  for (int i = 0; i < 3; ++i)
    row("semiaxis_asymmetry_" + std::to_string(i + 1), r.semiaxis_asymmetry[i]);
  row("orientation_angle", r.orientation_angle);
  for (int i = 0; i < 3; ++i)
    row(std::string("b_asymmetry_") + xyz[i], r.b_asymmetry[i]);
  row("c_antisymmetry_norm", r.c_antisymmetry_norm);
  out += std::string("degenerate,") + (r.degenerate ? "1" : "0") + "\n";
  return out;
}

} // namespace topcorr
