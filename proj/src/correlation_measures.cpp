#include "topcorr/correlation_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "topcorr/detail/nelder_mead.hpp"
#include "topcorr/errors.hpp"
#include "topcorr/quadrature.hpp"

namespace topcorr {

namespace {

double bloch_entropy(double r)
{
  return binary_entropy(0.5 * (1.0 + std::clamp(r, 0.0, 1.0)));
}

// Orthonormal e1, e2 spanning the tangent plane at n.
std::pair<Vector3, Vector3> tangent_basis(const Vector3& n)
{
  const Vector3 helper = std::abs(n.x()) < 0.9 ? Vector3::UnitX() : Vector3::UnitY();
  Vector3 e1 = n.cross(helper).normalized();
  Vector3 e2 = n.cross(e1);
  return {e1, e2};
}

double discord_of_a(const TwoQubitState& state, const DiscordOptions& opts, Vector3& best_dir, int& evals)
{
  auto objective = [&](const Vector3& n) {
    ++evals;
    return conditional_entropy(state, n);
  };

  const auto seeds = fibonacci_hemisphere(std::max(opts.grid_size, 1));
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(seeds.size());
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i)
    ranked.emplace_back(objective(seeds[i]), i);
  std::sort(ranked.begin(), ranked.end());

  const double spacing = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(seeds.size()));
  double best = ranked.front().first;
  best_dir = seeds[ranked.front().second];

  const int n_refine = std::min<int>(std::max(opts.refine_seeds, 1), static_cast<int>(ranked.size()));
  for (int s = 0; s < n_refine; ++s) {
    Vector3 center = seeds[ranked[s].second];
    double step = 0.5 * spacing;
    double fcenter = ranked[s].first;
    // restart the simplex around each improved point with a shrinking step
    for (int round = 0; round < 4; ++round) {
      const auto [e1, e2] = tangent_basis(center);
      auto chart = [&](double u, double v) { return Vector3((center + u * e1 + v * e2).normalized()); };
      const auto res = detail::nelder_mead_2d([&](double u, double v) { return objective(chart(u, v)); }, {0.0, 0.0},
                                              step, opts.tol * 1e-3, 1e-12, 4000);
      const bool improved = res.fx < fcenter - opts.tol * 1e-3;
      center = chart(res.x[0], res.x[1]);
      fcenter = std::min(fcenter, res.fx);
      step = std::max(1e-6, 0.1 * step);
      if (!improved && round > 0)
        break;
    }
    if (fcenter < best) {
      best = fcenter;
      best_dir = center;
    }
  }

  const double s_b = von_neumann_entropy(state.bminus);
  const double s_ab = von_neumann_entropy(to_density_matrix(state));
  return s_b - s_ab + best;
}

} // namespace

double conditional_entropy(const TwoQubitState& state, const Vector3& n)
{
  double total = 0.0;
  for (int sign : {+1, -1}) {
    const double denom = 1.0 + sign * n.dot(state.bminus);
    const double p = 0.5 * denom;
    if (p <= 1e-14)
      continue;
    const Vector3 b = (state.bplus + sign * (state.corr * n)) / denom;
    total += p * bloch_entropy(b.norm());
  }
  return total;
}

DiscordResult discord(const TwoQubitState& state, Party party, const DiscordOptions& opts)
{
  require_physical(state, "discord");
  const TwoQubitState s = party == Party::A ? state : swap_parties(state);
  DiscordResult out;
  const double raw = discord_of_a(s, opts, out.optimal_direction, out.iterations);
  out.value = std::max(raw, 0.0);
  if (out.optimal_direction.z() < 0.0)
    out.optimal_direction = -out.optimal_direction;
  return out;
}

double discord_t_state(double c1, double c2, double c3)
{
  const auto ev = t_state_eigenvalues(c1, c2, c3);
  const double lmin = *std::min_element(ev.begin(), ev.end());
  if (lmin < -kPsdTolerance)
    throw ValidationError("discord_t_state: correlations do not describe a physical T-state");
  const double cmax = std::min(1.0, std::max({std::abs(c1), std::abs(c2), std::abs(c3)}));
  const double value = 1.0 - entropy_from_eigenvalues(ev) + binary_entropy(0.5 * (1.0 + cmax));
  return std::max(value, 0.0);
}

double qqbar_discord_closed_form(double beta, double theta)
{
  if (!(beta >= 0.0 && beta <= 1.0) || !(theta >= 0.0 && theta <= std::numbers::pi))
    throw DomainError("qqbar_discord_closed_form: need beta in [0, 1] and theta in [0, pi]");
  const double s = std::sin(theta);
  return 1.0 - binary_entropy(1.0 / (2.0 - beta * beta * s * s));
}

EntanglementResult is_entangled(const TwoQubitState& state)
{
  require_physical(state, "is_entangled");
  const DensityMatrix4 rho = to_density_matrix(state);
  DensityMatrix4 pt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp)
          pt(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(pt, Eigen::EigenvaluesOnly);
  EntanglementResult out;
  out.min_pt_eigenvalue = es.eigenvalues().minCoeff();
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()[i] < 0.0)
      out.negativity -= es.eigenvalues()[i];
  out.entangled = out.min_pt_eigenvalue < -kPsdTolerance;
  return out;
}

namespace {

// Integral of the functional over one octant of the principal frame; the integrand
// sqrt(sin^2 t (s1^2 cos^2 p + s2^2 sin^2 p) + s3^2 cos^2 t) is analytic on the closed octant.
double steering_octant(const Vector3& sv, int nt, int np)
{
  const auto rt = gauss_legendre(nt, 0.0, std::numbers::pi / 2);
  const auto rp = gauss_legendre(np, 0.0, std::numbers::pi / 2);
  const double a = sv[0] * sv[0], b = sv[1] * sv[1], c = sv[2] * sv[2];
  std::vector<double> g(np);
  for (int j = 0; j < np; ++j) {
    const double cp = std::cos(rp.nodes[j]), sp = std::sin(rp.nodes[j]);
    g[j] = a * cp * cp + b * sp * sp;
  }
  CompensatedSum total;
  for (int i = 0; i < nt; ++i) {
    const double st = std::sin(rt.nodes[i]), ct = std::cos(rt.nodes[i]);
    double inner = 0.0;
    for (int j = 0; j < np; ++j)
      inner += rp.weights[j] * std::sqrt(st * st * g[j] + c * ct * ct);
    total += rt.weights[i] * st * inner;
  }
  return total.value();
}

} // namespace

double steering_functional(const Matrix3& corr, const SteeringQuadrature& quad)
{
  const Vector3 sv = Eigen::JacobiSVD<Matrix3>(corr).singularValues();
  int nt = std::max(quad.polar_nodes, 2), np = std::max(quad.azimuth_nodes, 2);
  double prev = 8.0 * steering_octant(sv, nt, np) / (2.0 * std::numbers::pi);
  for (int d = 0; d < quad.max_doublings; ++d) {
    nt *= 2;
    np *= 2;
    const double next = 8.0 * steering_octant(sv, nt, np) / (2.0 * std::numbers::pi);
    const double change = std::abs(next - prev);
    prev = next;
    if (change <= quad.rel_tol * std::abs(next) || next == 0.0)
      return next;
  }
  return prev;
}

double steering_boundary_lhs(double cperp, double cz)
{
  const double a = std::abs(cperp), b = std::abs(cz);
  if (a == 0.0)
    return b;
  const double q = (b * b) / (a * a);
  double ratio; // arcsin(k)/k, or arcsinh(kappa)/kappa beyond |cz| > |cperp|
  if (q < 1.0) {
    const double k = std::sqrt(1.0 - q);
    ratio = k < 1e-4 ? 1.0 + k * k / 6.0 + 3.0 * std::pow(k, 4) / 40.0 : std::asin(k) / k;
  } else {
    const double kappa = std::sqrt(q - 1.0);
    ratio = kappa < 1e-4 ? 1.0 - kappa * kappa / 6.0 + 3.0 * std::pow(kappa, 4) / 40.0 : std::asinh(kappa) / kappa;
  }
  return b + a * ratio;
}

double steering_boundary_cperp(double cz)
{
  if (!(std::abs(cz) < 1.0))
    throw DomainError("steering_boundary_cperp: requires |cz| < 1");
  double lo = 0.0, hi = 1.0;
  if (!(steering_boundary_lhs(lo, cz) < 1.0 && steering_boundary_lhs(hi, cz) > 1.0))
    throw DomainError("steering_boundary_cperp: no root in [0, 1]");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (steering_boundary_lhs(mid, cz) > 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

BellResult is_bell_nonlocal(const TwoQubitState& state)
{
  require_physical(state, "is_bell_nonlocal");
  const Matrix3 m = state.corr.transpose() * state.corr;
  Eigen::SelfAdjointEigenSolver<Matrix3> es(m, Eigen::EigenvaluesOnly);
  const Vector3 ev = es.eigenvalues(); // ascending
  BellResult out;
  out.horodecki = ev[1] + ev[2];
  out.nonlocal = out.horodecki > 1.0 + 1e-12;
  return out;
}

std::string_view to_string(HierarchyClass c)
{
  switch (c) {
  case HierarchyClass::classical:
    return "classical";
  case HierarchyClass::discordant_separable:
    return "discordant_separable";
  case HierarchyClass::entangled_unsteerable:
    return "entangled_unsteerable";
  case HierarchyClass::steerable_local:
    return "steerable_local";
  case HierarchyClass::bell_nonlocal:
    return "bell_nonlocal";
  }
  return "unknown";
}

ClassificationReport classify_detailed(const TwoQubitState& state, const DiscordOptions& opts)
{
  require_physical(state, "classify");
  ClassificationReport r;
  r.discord_a = discord(state, Party::A, opts).value;
  r.discord_b = discord(state, Party::B, opts).value;
  const auto ent = is_entangled(state);
  r.negativity = ent.negativity;
  r.min_pt_eigenvalue = ent.min_pt_eigenvalue;
  r.steering = steering_functional(state.corr);
  r.horodecki = is_bell_nonlocal(state).horodecki;

  const bool discordant = std::max(r.discord_a, r.discord_b) >= kClassifyTolerance;
  const bool entangled = r.min_pt_eigenvalue < -kClassifyTolerance;
  const bool steerable = r.steering > 1.0 + kClassifyTolerance;
  const bool bell = r.horodecki > 1.0 + kClassifyTolerance;

  if ((bell && !steerable) || (steerable && !entangled) || (entangled && !discordant))
    throw InternalError("classify: criteria are not nested (discord " + std::to_string(r.discord_a) + "/" +
                        std::to_string(r.discord_b) + ", min PT eigenvalue " + std::to_string(r.min_pt_eigenvalue) +
                        ", steering " + std::to_string(r.steering) + ", horodecki " + std::to_string(r.horodecki) +
                        ")");

  r.cls = bell         ? HierarchyClass::bell_nonlocal
          : steerable  ? HierarchyClass::steerable_local
          : entangled  ? HierarchyClass::entangled_unsteerable
          : discordant ? HierarchyClass::discordant_separable
                       : HierarchyClass::classical;
  return r;
}

HierarchyClass classify(const TwoQubitState& state)
{
  return classify_detailed(state).cls;
}

SteeringEllipsoid steering_ellipsoid(const TwoQubitState& state, Party steered, int n_dirs)
{
  require_physical(state, "steering_ellipsoid");
  const TwoQubitState s = steered == Party::A ? state : swap_parties(state);
  if (s.bminus.norm() < 1e-14) {
    Eigen::JacobiSVD<Matrix3> svd(s.corr, Eigen::ComputeFullU);
    SteeringEllipsoid e;
    e.center = s.bplus;
    for (int i = 0; i < 3; ++i)
      e.semiaxes[i] = svd.singularValues()[i];
    e.orientation = proper_rotation(svd.matrixU());
    e.degenerate = e.semiaxes[2] < 1e-12;
    return e;
  }
  if (!(s.bminus.norm() < 1.0))
    throw DegenerateMeasurementError("steering_ellipsoid: measuring party is pure, some outcomes have zero probability");
  if (n_dirs < 9)
    throw DomainError("steering_ellipsoid: need at least 9 directions for the quadric fit");
  std::vector<Vector3> pts;
  pts.reserve(n_dirs);
  for (const auto& n : fibonacci_sphere(n_dirs))
    pts.push_back(conditional_state(s, n, +1).bloch);
  return fit_ellipsoid(pts).ellipsoid;
}

} // namespace topcorr
