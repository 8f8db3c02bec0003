#include "topcorr/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "topcorr/errors.hpp"

namespace topcorr {

QuadratureRule gauss_legendre(int n, double a, double b)
{
  if (n < 1)
    throw DomainError("gauss_legendre: need at least one node");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  if (n == 1)
    return {{mid}, {2.0 * half}};
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Tricomi estimate of the i-th root
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = mid;
  return rule;
}

namespace {

Vector3 spherical_point(double z, double phi)
{
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

constexpr double kGoldenAngle = 2.399963229728653; // pi (3 - sqrt 5)

} // namespace

std::vector<Vector3> fibonacci_sphere(int n)
{
  if (n < 1)
    throw DomainError("fibonacci_sphere: need at least one point");
  std::vector<Vector3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back(spherical_point(1.0 - (2.0 * i + 1.0) / n, kGoldenAngle * i));
  return pts;
}

std::vector<Vector3> fibonacci_hemisphere(int n)
{
  if (n < 1)
    throw DomainError("fibonacci_hemisphere: need at least one point");
  std::vector<Vector3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back(spherical_point(1.0 - (i + 0.5) / n, kGoldenAngle * i));
  return pts;
}

} // namespace topcorr
