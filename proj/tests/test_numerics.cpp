#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "topcorr/ellipsoid.hpp"
#include "topcorr/parallel.hpp"
#include "topcorr/quadrature.hpp"
#include "topcorr/rng.hpp"

using namespace topcorr;

TEST_SUITE("numerics")
{
  TEST_CASE("Gauss-Legendre")
  {
    for (int n : {1, 2, 5, 16, 64}) {
      const auto q = gauss_legendre(n, 0.0, 2.0);
      CHECK(q.nodes.size() == static_cast<std::size_t>(n));
      CHECK(std::is_sorted(q.nodes.begin(), q.nodes.end()));
      // exact to degree 2n - 1
      for (int p = 0; p < 2 * n; ++p) {
        double s = 0;
        for (int i = 0; i < n; ++i)
          s += q.weights[i] * std::pow(q.nodes[i], p);
        CHECK(s == doctest::Approx(std::pow(2.0, p + 1) / (p + 1)).epsilon(1e-13));
      }
    }
    const auto q = gauss_legendre(32, 0.0, std::numbers::pi);
    double s = 0;
    for (int i = 0; i < 32; ++i)
      s += q.weights[i] * std::sin(q.nodes[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("Fibonacci lattices")
  {
    const auto sphere = fibonacci_sphere(1000);
    CHECK(sphere.size() == 1000);
    Vector3 mean = Vector3::Zero();
    for (const auto& v : sphere) {
      CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
      mean += v;
    }
    CHECK(mean.norm() / 1000 < 1e-3);
    for (const auto& v : fibonacci_hemisphere(200))
      CHECK(v.z() > 0.0);
  }

  TEST_CASE("compensated sum")
  {
    CompensatedSum s;
    s += 1.0;
    for (int i = 0; i < 1000; ++i)
      s += 1e-16;
    s += -1.0;
    CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-10));
  }

  TEST_CASE("Philox4x32-10 known answers")
  {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("random streams")
  {
    RandomStream a(42, 7, 1), b(42, 7, 1), c(42, 8, 1), d(42, 7, 2);
    double mean = 0, sq = 0;
    bool differ_c = false, differ_d = false;
    for (int i = 0; i < 20000; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      differ_c |= x != c.uniform();
      differ_d |= x != d.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      mean += x;
      sq += x * x;
    }
    CHECK(differ_c);
    CHECK(differ_d);
    CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sq / 20000 == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  }

  TEST_CASE("parallel_for")
  {
    const unsigned saved = thread_limit();
    for (unsigned t : {1u, 2u, 4u}) {
      set_thread_limit(t);
      std::vector<int> out(1000, 0);
      parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
      CHECK(std::accumulate(out.begin(), out.end(), 0L) == 999L * 1000L);
      CHECK_THROWS_AS(parallel_for(100,
                                   [](std::size_t i) {
                                     if (i == 37)
                                       throw std::runtime_error("x");
                                   }),
                      std::runtime_error);
    }
    parallel_for(0, [](std::size_t) { FAIL("called"); });
    set_thread_limit(saved);
  }

  TEST_CASE("ellipsoid fit")
  {
    const Matrix3 rot = Eigen::AngleAxisd(0.7, Vector3(1, 2, 3).normalized()).toRotationMatrix();
    const Vector3 center(0.1, -0.2, 0.05);
    const Vector3 axes(0.8, 0.5, 0.3);
    std::vector<Vector3> pts;
    for (const auto& u : fibonacci_sphere(500))
      pts.push_back(center + rot * axes.asDiagonal() * u);
    const auto fit = fit_ellipsoid(pts);
    CHECK(fit.rank == 3);
    CHECK_FALSE(fit.ellipsoid.degenerate);
    CHECK((fit.ellipsoid.center - center).norm() < 1e-9);
    for (int i = 0; i < 3; ++i)
      CHECK(fit.ellipsoid.semiaxes[i] == doctest::Approx(axes[i]).epsilon(1e-9));
    CHECK(fit.ellipsoid.orientation.determinant() == doctest::Approx(1.0));
    for (double r : fit.residuals)
      CHECK(std::abs(r) < 1e-9);
    CHECK(std::abs(fit.ellipsoid.orientation.col(0).dot(rot.col(0))) == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<Vector3> flat;
    for (const auto& u : fibonacci_sphere(300))
      flat.push_back(center + rot * Vector3(0.6, 0.4, 0.0).asDiagonal() * u);
    const auto f2 = fit_ellipsoid(flat);
    CHECK(f2.rank == 2);
    CHECK(f2.ellipsoid.degenerate);
    CHECK(f2.ellipsoid.semiaxes[0] == doctest::Approx(0.6).epsilon(0.01));
    CHECK(f2.ellipsoid.semiaxes[1] == doctest::Approx(0.4).epsilon(0.01));
    CHECK((f2.ellipsoid.center - center).norm() < 1e-3);

    // points on the rim only
    std::vector<Vector3> rim;
    for (int k = 0; k < 60; ++k) {
      const double phi = 2 * std::numbers::pi * k / 60;
      rim.push_back(center + rot * Vector3(0.6 * std::cos(phi), 0.4 * std::sin(phi), 0.0));
    }
    const auto f3 = fit_ellipsoid(rim);
    CHECK(f3.rank == 2);
    CHECK(f3.ellipsoid.semiaxes[0] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(f3.ellipsoid.semiaxes[1] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(f2.ellipsoid.semiaxes[2] == doctest::Approx(0.0));

    std::vector<Vector3> seg;
    for (const auto& u : fibonacci_sphere(100))
      seg.push_back(center + Vector3(0, 0, 0.5 * u.z()));
    const auto f1 = fit_ellipsoid(seg);
    CHECK(f1.rank == 1);
    CHECK(f1.ellipsoid.semiaxes[0] == doctest::Approx(0.5).epsilon(0.02));

    std::vector<Vector3> point(10, center);
    const auto f0 = fit_ellipsoid(point);
    CHECK(f0.rank == 0);
    CHECK((f0.ellipsoid.center - center).norm() < 1e-12);

    const auto e = ellipsoid_from_shape(Vector3::Zero(), Vector3(4, 1, 0).asDiagonal());
    CHECK(e.semiaxes[0] == doctest::Approx(2.0));
    CHECK(e.semiaxes[1] == doctest::Approx(1.0));
    CHECK(e.degenerate);
    CHECK(proper_rotation(Vector3(1, 1, -1).asDiagonal()).determinant() == doctest::Approx(1.0));
  }
}
