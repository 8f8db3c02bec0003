#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "topcorr/quadrature.hpp"
#include "topcorr/two_qubit.hpp"

namespace testing_support {

/// Random full-rank mixed state: rho = G G^dag / tr, G complex Gaussian 4x4.
inline topcorr::TwoQubitState random_state(std::mt19937_64& rng)
{
  std::normal_distribution<double> g;
  topcorr::DensityMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m(i, j) = {g(rng), g(rng)};
  topcorr::DensityMatrix4 rho = m * m.adjoint();
  rho /= rho.trace().real();
  return topcorr::from_density_matrix(rho);
}

/// Random state of lower rank, so that boundary and pure states are also covered.
inline topcorr::TwoQubitState random_state_rank(std::mt19937_64& rng, int rank)
{
  std::normal_distribution<double> g;
  Eigen::Matrix<std::complex<double>, 4, Eigen::Dynamic> m(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j)
      m(i, j) = {g(rng), g(rng)};
  topcorr::DensityMatrix4 rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return topcorr::from_density_matrix(rho);
}

/// Uniform draw from the tetrahedron of physical T-states.
inline Eigen::Vector3d random_t_triple(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const Eigen::Vector3d c(u(rng), u(rng), u(rng));
    const auto ev = topcorr::t_state_eigenvalues(c[0], c[1], c[2]);
    if (ev[0] >= 0 && ev[1] >= 0 && ev[2] >= 0 && ev[3] >= 0)
      return c;
  }
}

/// Random state with B+ = B- and symmetric C.
inline topcorr::TwoQubitState random_symmetric_state(std::mt19937_64& rng)
{
  while (true) {
    auto s = random_state(rng);
    s.bplus = s.bminus = 0.5 * (s.bplus + s.bminus);
    s.corr = (0.5 * (s.corr + s.corr.transpose())).eval();
    if (topcorr::validate_state(s).is_physical)
      return s;
  }
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng)
{
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

struct SpherePoint
{
  Eigen::Vector3d dir;
  double weight;
};

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta), trapezoid in phi.
/// Weights sum to 4 pi; exact for polynomials of low degree in the components.
inline std::vector<SpherePoint> sphere_rule(int n_cos = 6, int n_phi = 8)
{
  const auto gl = topcorr::gauss_legendre(n_cos, -1.0, 1.0);
  std::vector<SpherePoint> out;
  for (int i = 0; i < n_cos; ++i) {
    const double z = gl.nodes[i];
    const double r = std::sqrt(1 - z * z);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2 * std::numbers::pi * j / n_phi;
      out.push_back({Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z), gl.weights[i] * 2 * std::numbers::pi / n_phi});
    }
  }
  return out;
}

} // namespace testing_support
