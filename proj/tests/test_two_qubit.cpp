#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/reference.hpp"
#include "support.hpp"
#include "topcorr/errors.hpp"
#include "topcorr/two_qubit.hpp"

using namespace topcorr;
using testing_support::random_state;
using testing_support::random_unit;

TEST_SUITE("two_qubit")
{
  TEST_CASE("density matrix assembly")
  {
    const auto mm = to_density_matrix(TwoQubitState::maximally_mixed());
    CHECK((mm - 0.25 * DensityMatrix4::Identity()).norm() < 1e-15);

    // |Psi-> = (|01> - |10>)/sqrt 2
    Eigen::Vector4cd psi(0, 1, -1, 0);
    psi /= std::sqrt(2.0);
    CHECK((to_density_matrix(TwoQubitState::singlet()) - psi * psi.adjoint()).norm() < 1e-15);

    TwoQubitState s;
    s.bplus = Vector3(0, 0, 0.2);
    const auto rho = to_density_matrix(s);
    CHECK(rho(0, 0).real() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(rho(1, 1).real() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(rho(2, 2).real() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(rho(3, 3).real() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK((rho - DensityMatrix4(rho.diagonal().asDiagonal())).norm() < 1e-15);
  }

  TEST_CASE("inverse decomposition")
  {
    const auto mm = from_density_matrix(0.25 * DensityMatrix4::Identity());
    CHECK(mm.bplus.norm() == 0.0);
    CHECK(mm.corr.norm() == 0.0);
    const auto singlet = from_density_matrix(to_density_matrix(TwoQubitState::singlet()));
    CHECK((singlet.corr + Matrix3::Identity()).norm() < 1e-15);

    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
      const auto s = random_state(rng);
      CHECK(coefficient_distance(s, from_density_matrix(to_density_matrix(s))) < 1e-12);
    }

    DensityMatrix4 bad = 0.25 * DensityMatrix4::Identity();
    bad(0, 1) = 0.1;
    CHECK_THROWS_AS(from_density_matrix(bad), ValidationError);
    CHECK_THROWS_AS(from_density_matrix(0.5 * DensityMatrix4::Identity()), ValidationError);
  }

  TEST_CASE("validation")
  {
    CHECK(validate_state(TwoQubitState::singlet()).is_physical);
    const auto v = validate_state(TwoQubitState::t_state(1, 1, 1));
    CHECK_FALSE(v.is_physical);
    CHECK(v.min_eigenvalue == doctest::Approx(-0.5));
    // outside the triangle 1 - cz - 2|cp| >= 0
    CHECK_FALSE(validate_state(TwoQubitState::t_state(0.4, 0.4, 0.3)).is_physical);
    CHECK(validate_state(TwoQubitState::t_state(0.4, 0.4, 0.2)).is_physical);
    CHECK_THROWS_AS(require_physical(TwoQubitState::t_state(1, 1, 1), "test"), ValidationError);
  }

  TEST_CASE("T-state spectrum")
  {
    auto eq = [](std::array<double, 4> a, std::array<double, 4> b) {
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (int i = 0; i < 4; ++i)
        if (std::abs(a[i] - b[i]) > 1e-15)
          return false;
      return true;
    };
    CHECK(eq(t_state_eigenvalues(-1, -1, -1), {1, 0, 0, 0}));
    CHECK(eq(t_state_eigenvalues(0, 0, 0), {0.25, 0.25, 0.25, 0.25}));
    CHECK(eq(t_state_eigenvalues(1, 1, -1), {0, 0, 0, 1}));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 200; ++i) {
      const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
      const auto ev = t_state_eigenvalues(c1, c2, c3);
      CHECK(ev[0] + ev[1] + ev[2] + ev[3] == doctest::Approx(1.0).epsilon(1e-15));
      Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(to_density_matrix(TwoQubitState::t_state(c1, c2, c3)));
      std::array<double, 4> num;
      for (int k = 0; k < 4; ++k)
        num[k] = es.eigenvalues()[k];
      std::array<double, 4> sorted = ev;
      std::sort(sorted.begin(), sorted.end());
      for (int k = 0; k < 4; ++k)
        CHECK(num[k] == doctest::Approx(sorted[k]).epsilon(1e-12));
    }
  }

  TEST_CASE("entropies")
  {
    CHECK(von_neumann_entropy(to_density_matrix(TwoQubitState::singlet())) == doctest::Approx(0.0));
    CHECK(von_neumann_entropy(to_density_matrix(TwoQubitState::maximally_mixed())) == doctest::Approx(2.0));
    // eigenvalues (1/2, 1/6, 1/6, 1/6)
    const double werner = 0.5 + 0.5 * std::log2(6.0);
    CHECK(von_neumann_entropy(to_density_matrix(TwoQubitState::werner(1.0 / 3.0))) ==
          doctest::Approx(werner).epsilon(1e-12));
    CHECK(werner == doctest::Approx(1.79248125).epsilon(1e-8));

    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    // reference value from 50-digit arithmetic
    CHECK(binary_entropy(0.533333) == doctest::Approx(0.99679168).epsilon(1e-7));
    CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);

    CHECK(von_neumann_entropy(Vector3(0, 0, 1)) == 0.0);
    CHECK(von_neumann_entropy(Vector3(0, 0, 0)) == doctest::Approx(1.0));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      const auto s = testing_support::random_state_rank(rng, 1);
      CHECK(std::abs(von_neumann_entropy(to_density_matrix(s))) < 1e-9);
    }
  }

  TEST_CASE("reduced states agree with the partial trace")
  {
    CHECK(reduced_state(TwoQubitState::singlet(), Party::A).norm() == 0.0);
    TwoQubitState s;
    s.bplus = Vector3(0.1, 0, 0);
    CHECK(reduced_state(s, Party::A) == Vector3(0.1, 0, 0));

    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
      const auto st = random_state(rng);
      const auto rho = to_density_matrix(st);
      CHECK((reduced_state(st, Party::A) - oracle::bloch_of(oracle::partial_trace(rho, 0))).norm() < 1e-12);
      CHECK((reduced_state(st, Party::B) - oracle::bloch_of(oracle::partial_trace(rho, 1))).norm() < 1e-12);
    }
  }

  TEST_CASE("conditional states")
  {
    const auto z = Vector3::UnitZ();
    const auto c = conditional_state(TwoQubitState::singlet(), z, +1);
    CHECK((c.bloch - Vector3(0, 0, -1)).norm() < 1e-15);
    CHECK(c.prob == 0.5);

    TwoQubitState s;
    s.bplus = Vector3(0, 0, 0.1);
    s.bminus = Vector3(0, 0, 0.1);
    s.corr = Vector3(0, 0, 0.5).asDiagonal();
    const auto c2 = conditional_state(s, z, +1);
    CHECK(c2.bloch.z() == doctest::Approx(0.6 / 1.1).epsilon(1e-14));
    CHECK(c2.bloch.z() == doctest::Approx(0.54545).epsilon(1e-5));
    CHECK(c2.prob == doctest::Approx(0.55).epsilon(1e-15));
    const auto [m, p] = oracle::measure_b(to_density_matrix(s), z, +1);
    CHECK((oracle::bloch_of(m) - c2.bloch).norm() < 1e-12);
    CHECK(p == doctest::Approx(c2.prob).epsilon(1e-12));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
      const auto st = random_state(rng);
      const auto n = random_unit(rng);
      for (int sign : {+1, -1}) {
        const auto out = conditional_state(st, n, sign);
        const auto [ref, pr] = oracle::measure_b(to_density_matrix(st), n, sign);
        CHECK((out.bloch - oracle::bloch_of(ref)).norm() < 1e-12);
        CHECK(std::abs(out.prob - pr) < 1e-12);
      }
      CHECK(conditional_state(st, n, +1).prob + conditional_state(st, n, -1).prob == doctest::Approx(1.0));

      auto unpolarized = st;
      unpolarized.bminus.setZero();
      if (validate_state(unpolarized).is_physical)
        CHECK(conditional_state(unpolarized, n, +1).prob == 0.5);
    }

    CHECK_THROWS_AS(conditional_state(s, Vector3(0, 0, 2), +1), DomainError);
    TwoQubitState pure_b;
    pure_b.bminus = Vector3(0, 0, 1);
    CHECK_THROWS_AS(conditional_state(pure_b, z, -1), DegenerateMeasurementError);
  }

  TEST_CASE("frames")
  {
    const double pi = std::numbers::pi;
    for (double theta : {0.0, 0.3, pi / 2, 2.0, pi}) {
      const Frame hel{FrameTag::helicity, theta, 0.0};
      const Frame beam{FrameTag::beam, theta, 0.0};
      const auto axes = helicity_axes(theta);
      CHECK((axes * axes.transpose() - Matrix3::Identity()).norm() < 1e-14);
      CHECK(axes.determinant() == doctest::Approx(1.0));
      // z = cos(t) k + sin(t) r
      const Vector3 z = std::cos(theta) * axes.row(0).transpose() + std::sin(theta) * axes.row(2).transpose();
      CHECK((z - Vector3::UnitZ()).norm() < 1e-14);

      const auto singlet = rotate_frame(TwoQubitState::singlet(), hel, beam);
      CHECK((singlet.corr + Matrix3::Identity()).norm() < 1e-14);

      TwoQubitState zz;
      zz.corr = Vector3(0, 0, 1).asDiagonal();
      const auto h = rotate_frame(zz, beam, hel);
      CHECK(h.corr(0, 0) == doctest::Approx(std::cos(theta) * std::cos(theta)));
      CHECK(h.corr(2, 2) == doctest::Approx(std::sin(theta) * std::sin(theta)));
      CHECK(std::abs(h.corr(0, 2) - std::sin(theta) * std::cos(theta)) < 1e-14);
      CHECK(std::abs(h.corr(1, 1)) < 1e-14);
      CHECK(h.frame == FrameTag::helicity);
    }
    CHECK((helicity_axes(0.0).row(0).transpose() - Vector3::UnitZ()).norm() < 1e-15);
    CHECK((helicity_axes(0.0).row(2).transpose() - Vector3::UnitX()).norm() < 1e-15);
    CHECK_THROWS_AS(rotate_frame(TwoQubitState::singlet(), Frame{FrameTag::helicity, -0.1, 0.0},
                                 Frame{FrameTag::beam, -0.1, 0.0}),
                    DomainError);

    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
      const auto st = random_state(rng);
      const Frame hel{FrameTag::helicity, 1.1, 0.4};
      const Frame beam{FrameTag::beam, 1.1, 0.4};
      const auto r = rotate_frame(st, hel, beam);
      CHECK(von_neumann_entropy(to_density_matrix(r)) ==
            doctest::Approx(von_neumann_entropy(to_density_matrix(st))).epsilon(1e-10));
      CHECK(coefficient_distance(rotate_frame(r, beam, hel), st) < 1e-12);
    }
  }
}
