#include "topcorr/production.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "topcorr/errors.hpp"
#include "topcorr/quadrature.hpp"

namespace topcorr {

namespace {

using Coeffs = Eigen::Matrix<double, 15, 1>;

Coeffs pack(const TwoQubitState& s)
{
  Coeffs c;
  c.segment<3>(0) = s.bplus;
  c.segment<3>(3) = s.bminus;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c[6 + 3 * i + j] = s.corr(i, j);
  return c;
}

TwoQubitState unpack(const Coeffs& c, FrameTag frame)
{
  TwoQubitState s;
  s.bplus = c.segment<3>(0);
  s.bminus = c.segment<3>(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s.corr(i, j) = c[6 + 3 * i + j];
  s.frame = frame;
  return s;
}

void check_kinematics(double beta, double theta)
{
  if (!(beta >= 0.0 && beta < 1.0))
    throw DomainError("beta must lie in [0, 1), got " + std::to_string(beta));
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
}

// atanh(b)/b, continuous at b = 0
double atanh_ratio(double b)
{
  if (b < 1e-4) {
    const double b2 = b * b;
    return 1.0 + b2 / 3.0 + b2 * b2 / 5.0;
  }
  return std::atanh(b) / b;
}

} // namespace

std::string_view to_string(Channel c)
{
  return c == Channel::gg ? "gg" : "qqbar";
}

Channel channel_from_string(std::string_view s)
{
  if (s == "gg")
    return Channel::gg;
  if (s == "qqbar" || s == "qq")
    return Channel::qqbar;
  throw DomainError("unknown channel '" + std::string(s) + "' (expected gg or qqbar)");
}

double beta_from_mass(double m_ttbar, double m_t)
{
  if (!(m_t > 0.0))
    throw DomainError("top mass must be positive");
  if (!(m_ttbar >= 2.0 * m_t))
    throw DomainError("invariant mass " + std::to_string(m_ttbar) + " GeV below threshold 2 m_t");
  const double r = 2.0 * m_t / m_ttbar;
  return std::sqrt(std::max(0.0, 1.0 - r * r));
}

double mass_from_beta(double beta, double m_t)
{
  if (!(beta >= 0.0 && beta < 1.0))
    throw DomainError("beta must lie in [0, 1)");
  return 2.0 * m_t / std::sqrt(1.0 - beta * beta);
}

KinematicPoint KinematicPoint::from_mass(double m_ttbar, double theta, double m_t)
{
  const double beta = beta_from_mass(m_ttbar, m_t);
  check_kinematics(0.0, theta);
  return {m_ttbar, beta, theta};
}

KinematicPoint KinematicPoint::from_beta(double beta, double theta, double m_t)
{
  check_kinematics(beta, theta);
  return {mass_from_beta(beta, m_t), beta, theta};
}

TwoQubitState spin_state(Channel channel, double beta, double theta)
{
  check_kinematics(beta, theta);
  const double b2 = beta * beta, b4 = b2 * b2;
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = s * s, s4 = s2 * s2;
  const double gamma_inv = std::sqrt(1.0 - b2);

  double a, ckk, cnn, crr, ckr;
  if (channel == Channel::gg) {
    a = 1.0 + 2.0 * b2 * s2 - b4 * (1.0 + s4);
    ckk = -(1.0 - 2.0 * b2 * s2 * c * c - b4 * (1.0 + s4));
    cnn = -(1.0 - 2.0 * b2 + b4 * (1.0 + s4));
    crr = -(1.0 - b2 * (2.0 - b2) * (1.0 + s4));
    ckr = gamma_inv * b2 * 2.0 * s * c * s2;
  } else {
    a = 2.0 - b2 * s2;
    ckk = 2.0 - (2.0 - b2) * s2;
    cnn = -b2 * s2;
    crr = (2.0 - b2) * s2;
    ckr = 2.0 * gamma_inv * s * c;
  }

  TwoQubitState out;
  out.frame = FrameTag::helicity;
  // helicity axes are ordered (k, n, r)
  out.corr << ckk, 0.0, ckr, 0.0, cnn, 0.0, ckr, 0.0, crr;
  out.corr /= a;
  return out;
}

double partonic_shape(Channel channel, double beta, double theta)
{
  check_kinematics(beta, theta);
  const double b2 = beta * beta;
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = s * s;
  if (channel == Channel::qqbar)
    return 2.0 - b2 * s2;
  const double d = 1.0 - b2 * c * c;
  const double f = (7.0 + 9.0 * b2 * c * c) / (d * d);
  return f * (1.0 + 2.0 * b2 * s2 - b2 * b2 * (1.0 + s2 * s2));
}

double partonic_shape_norm(Channel channel, double beta)
{
  check_kinematics(beta, 0.0);
  const double b2 = beta * beta;
  const double over_cos = channel == Channel::qqbar
                              ? 4.0 - 4.0 * b2 / 3.0
                              : 62.0 * b2 - 118.0 + 4.0 * (b2 * b2 - 18.0 * b2 + 33.0) * atanh_ratio(beta);
  return 2.0 * std::numbers::pi * over_cos;
}

double partonic_weight(Channel channel, double beta, double theta)
{
  return partonic_shape(channel, beta, theta) / partonic_shape_norm(channel, beta);
}

TwoQubitState to_beam(const TwoQubitState& state, const Frame& frame)
{
  if (frame.tag == FrameTag::beam) {
    TwoQubitState out = state;
    out.frame = FrameTag::beam;
    return out;
  }
  return rotate_frame(state, frame, Frame{FrameTag::beam, frame.theta, frame.phi});
}

TwoQubitState from_beam(const TwoQubitState& beam_state, const Frame& frame)
{
  if (frame.tag == FrameTag::beam)
    return beam_state;
  return rotate_frame(beam_state, Frame{FrameTag::beam, frame.theta, frame.phi}, frame);
}

TwoQubitState mixed_state(std::span<const WeightedState> points, const Frame& target)
{
  if (points.empty())
    throw DomainError("mixed_state: no states to mix");
  Coeffs acc = Coeffs::Zero();
  double total = 0.0;
  for (const auto& p : points) {
    if (!(p.weight >= 0.0))
      throw DomainError("mixed_state: negative weight");
    if (p.weight == 0.0)
      continue;
    acc += p.weight * pack(to_beam(p.state, p.frame));
    total += p.weight;
  }
  if (!(total > 0.0))
    throw DomainError("mixed_state: all weights vanish");
  return from_beam(unpack(acc / total, FrameTag::beam), target);
}

namespace {

class PhaseSpaceIntegrator
{
public:
  PhaseSpaceIntegrator(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts, bool helicity)
    : lumi_(lumi), m_cut_(m_cut), opts_(opts), helicity_(helicity)
  {
    lumi_.validate(opts_.m_t);
    if (!(m_cut > 2.0 * opts_.m_t && m_cut <= lumi_.max_mass() && m_cut > lumi_.min_mass()))
      throw DomainError("mass cut " + std::to_string(m_cut) + " GeV outside the table range (" +
                        std::to_string(lumi_.min_mass()) + ", " + std::to_string(lumi_.max_mass()) + "]");
    if (!opts_.model)
      opts_.model = [](Channel ch, double b, double t) { return spin_state(ch, b, t); };
    if (opts_.phi_nodes < 1 || opts_.cos_nodes < 2 || opts_.mass_subintervals < 2)
      throw DomainError("integration grid sizes too small");
  }

  TwoQubitState run()
  {
    std::vector<double> knots;
    for (const auto& r : lumi_.rows())
      if (r.m_gev < m_cut_)
        knots.push_back(r.m_gev);
    knots.push_back(m_cut_);

    int n_sub = opts_.mass_subintervals + (opts_.mass_subintervals % 2);
    Coeffs prev = integrate_mass(knots, n_sub);
    for (int d = 0; d < opts_.max_doublings; ++d) {
      n_sub *= 2;
      const Coeffs next = integrate_mass(knots, n_sub);
      const double change = (next - prev).cwiseAbs().maxCoeff();
      prev = next;
      if (change <= opts_.tol)
        break;
    }
    return unpack(prev, helicity_ ? FrameTag::helicity : FrameTag::beam);
  }

private:
  // Normalized angular average of the channel state at fixed mass.
  const Coeffs& angular_average(Channel ch, double m)
  {
    auto& cache = ch == Channel::gg ? cache_gg_ : cache_qq_;
    if (auto it = cache.find(m); it != cache.end())
      return it->second;
    const double beta = beta_from_mass(m, opts_.m_t);
    int n = opts_.cos_nodes;
    Coeffs prev = angular_rule(ch, beta, n);
    for (int d = 0; d < opts_.max_doublings; ++d) {
      n *= 2;
      const Coeffs next = angular_rule(ch, beta, n);
      const double change = (next - prev).cwiseAbs().maxCoeff();
      prev = next;
      if (change <= 0.1 * opts_.tol)
        break;
    }
    return cache.emplace(m, prev).first->second;
  }

  Coeffs angular_rule(Channel ch, double beta, int n_cos)
  {
    const auto rule = gauss_legendre(n_cos, -1.0, 1.0);
    Coeffs acc = Coeffs::Zero();
    double norm = 0.0;
    const double dphi = 2.0 * std::numbers::pi / opts_.phi_nodes;
    for (int i = 0; i < n_cos; ++i) {
      const double theta = std::acos(std::clamp(rule.nodes[i], -1.0, 1.0));
      const double w = rule.weights[i] * partonic_shape(ch, beta, theta) * dphi;
      const TwoQubitState hel = opts_.model(ch, beta, theta);
      for (int k = 0; k < opts_.phi_nodes; ++k) {
        const double phi = k * dphi;
        const TwoQubitState s = helicity_ ? hel : rotate(hel, helicity_axes(theta, phi).transpose());
        acc += w * pack(s);
        norm += w;
      }
    }
    return acc / norm;
  }

  Coeffs integrate_mass(const std::vector<double>& knots, int n_sub)
  {
    Coeffs num = Coeffs::Zero();
    double den = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double a = knots[k], b = knots[k + 1];
      const double h = (b - a) / n_sub;
      for (int j = 0; j <= n_sub; ++j) {
        const double m = j == n_sub ? b : a + j * h;
        const double simpson = (j == 0 || j == n_sub) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const auto [wgg, wqq] = lumi_.weights_at(m);
        const double f = simpson * h / 3.0;
        if (wgg > 0.0) {
          num += f * wgg * angular_average(Channel::gg, m);
          den += f * wgg;
        }
        if (wqq > 0.0) {
          num += f * wqq * angular_average(Channel::qqbar, m);
          den += f * wqq;
        }
      }
    }
    if (!(den > 0.0))
      throw InputDataError("luminosity table has no weight below the mass cut");
    return num / den;
  }

  const LuminosityTable& lumi_;
  double m_cut_;
  IntegrationOptions opts_;
  bool helicity_;
  std::map<double, Coeffs> cache_gg_;
  std::map<double, Coeffs> cache_qq_;
};

} // namespace

TwoQubitState integrate_beam(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts)
{
  return PhaseSpaceIntegrator(lumi, m_cut, opts, false).run();
}

IntegratedTState integrated_state(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts)
{
  const TwoQubitState s = integrate_beam(lumi, m_cut, opts);
  const Matrix3& c = s.corr;
  double off = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        off = std::max(off, std::abs(c(i, j)));
  if (off >= 1e-9)
    throw InternalError("integrated state is not diagonal in the beam basis (off-diagonal " + std::to_string(off) + ")");
  if (std::abs(c(0, 0) - c(1, 1)) >= 1e-9)
    throw InternalError("integrated state is not symmetric around the beam axis");
  const IntegratedTState out{0.5 * (c(0, 0) + c(1, 1)), c(2, 2)};
  if (1.0 - out.c_z - 2.0 * std::abs(out.c_perp) < -kPsdTolerance || out.c_z < -1.0 - kPsdTolerance)
    throw ValidationError("integrated state outside the physical triangle");
  return out;
}

TwoQubitState integrated_matrix_helicity(const LuminosityTable& lumi, double m_cut, const IntegrationOptions& opts)
{
  const TwoQubitState s = PhaseSpaceIntegrator(lumi, m_cut, opts, true).run();
  require_physical(s, "integrated_matrix_helicity");
  return s;
}

std::vector<TrajectoryPoint> trajectory(const LuminosityTable& lumi, std::span<const double> cuts,
                                        const IntegrationOptions& opts)
{
  std::vector<TrajectoryPoint> out;
  out.reserve(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (i > 0 && !(cuts[i] > cuts[i - 1]))
      throw DomainError("trajectory: cuts must be strictly ascending");
    out.push_back({cuts[i], integrated_state(lumi, cuts[i], opts)});
  }
  return out;
}

TwoQubitState to_two_qubit(const IntegratedTState& s)
{
  return TwoQubitState::t_state(s.c_perp, s.c_perp, s.c_z);
}

} // namespace topcorr
