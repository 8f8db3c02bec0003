#pragma once

#include <vector>

#include "topcorr/two_qubit.hpp"

namespace topcorr {

struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]. Nodes ascending.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n nearly uniform unit vectors on the sphere (spherical Fibonacci lattice).
std::vector<Vector3> fibonacci_sphere(int n);

/// n nearly uniform unit vectors on the upper hemisphere z > 0.
std::vector<Vector3> fibonacci_hemisphere(int n);

/// Neumaier-compensated running sum.
class CompensatedSum
{
public:
  void add(double x)
  {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x)
  {
    add(x);
    return *this;
  }
  void merge(const CompensatedSum& other)
  {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace topcorr
