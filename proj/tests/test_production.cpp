#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/tree_amplitudes.hpp"
#include "support.hpp"
#include "topcorr/correlation_measures.hpp"
#include "topcorr/errors.hpp"
#include "topcorr/production.hpp"

using namespace topcorr;

namespace {

constexpr double kPi = std::numbers::pi;

double fidelity_with_singlet(const TwoQubitState& s)
{
  Eigen::Vector4cd psi(0, 1, -1, 0);
  psi /= std::sqrt(2.0);
  return (psi.adjoint() * to_density_matrix(s) * psi)(0, 0).real();
}

} // namespace

TEST_SUITE("production_models")
{
  TEST_CASE("kinematics")
  {
    CHECK(beta_from_mass(346.0) == 0.0);
    CHECK(beta_from_mass(489.3) == doctest::Approx(0.70711).epsilon(1e-4));
    CHECK(beta_from_mass(2 * std::sqrt(2.0) * 173.0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(mass_from_beta(beta_from_mass(700.0)) == doctest::Approx(700.0).epsilon(1e-14));
    CHECK_THROWS_AS(beta_from_mass(300.0), DomainError);
    CHECK_THROWS_AS(spin_state(Channel::gg, 1.5, 0.1), DomainError);
    CHECK_THROWS_AS(spin_state(Channel::gg, 0.5, 4.0), DomainError);
    CHECK(channel_from_string("qqbar") == Channel::qqbar);
    CHECK_THROWS_AS(channel_from_string("ud"), DomainError);
  }

  TEST_CASE("spin states agree with the tree-level amplitudes")
  {
    for (double beta : {0.0, 0.1, 0.35, 0.6, 0.85, 0.99}) {
      for (double theta : {0.0, 0.2, 0.7, kPi / 2, 2.1, 3.0, kPi}) {
        for (Channel ch : {Channel::gg, Channel::qqbar}) {
          const auto m = ch == Channel::gg ? oracle::gg_spin_matrix(beta, theta) : oracle::qqbar_spin_matrix(beta, theta);
          const auto ref = oracle::decompose(m);
          const auto s = spin_state(ch, beta, theta);
          CHECK(s.frame == FrameTag::helicity);
          CHECK(ref.bplus.norm() < 1e-12);
          CHECK(ref.bminus.norm() < 1e-12);
          CHECK((s.corr - oracle::to_helicity(ref.corr, theta)).cwiseAbs().maxCoeff() < 1e-10);
        }
        CHECK(oracle::gg_gauge_violation(beta, theta) < 1e-10);
      }
    }
  }

  TEST_CASE("anchors")
  {
    for (double theta : {0.0, 0.4, kPi / 2, 2.5}) {
      CHECK(fidelity_with_singlet(spin_state(Channel::gg, 0.0, theta)) > 1 - 1e-9);
      const auto q0 = spin_state(Channel::qqbar, 0.0, theta);
      const Vector3 p = helicity_axes(theta) * Vector3::UnitZ();
      CHECK((q0.corr - p * p.transpose()).norm() < 1e-12);
      CHECK(discord(q0).value < 1e-9);
    }
    const auto q = spin_state(Channel::qqbar, 0.7, 0.0);
    CHECK((q.corr - Vector3(1, 0, 0).asDiagonal().toDenseMatrix()).norm() < 1e-12);

    const auto gg = spin_state(Channel::gg, 0.999, kPi / 2);
    CHECK(is_entangled(gg).negativity > 0.49);
    CHECK(discord(gg).value > 0.95);
    const auto gg1 = spin_state(Channel::gg, 1 - 1e-7, kPi / 2);
    CHECK(discord(gg1).value > 0.999);
    CHECK(is_entangled(gg1).negativity == doctest::Approx(0.5).epsilon(1e-5));
  }

  TEST_CASE("qqbar discord matches the closed form")
  {
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        const double beta = (i + 0.5) / 12.0;
        const double theta = kPi * (j + 0.5) / 12.0;
        CHECK(std::abs(discord(spin_state(Channel::qqbar, beta, theta)).value -
                       qqbar_discord_closed_form(beta, theta)) < 1e-8);
        CHECK(is_bell_nonlocal(spin_state(Channel::qqbar, beta, theta)).horodecki > 1.0);
      }
    }
    CHECK(discord(spin_state(Channel::qqbar, 0.5, kPi / 4)).value == doctest::Approx(0.00321).epsilon(1e-3));
  }

  TEST_CASE("physicality and theta symmetry")
  {
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double beta = 0.999 * i / 10.0;
        const double theta = kPi * j / 10.0;
        for (Channel ch : {Channel::gg, Channel::qqbar}) {
          const auto a = spin_state(ch, beta, theta);
          const auto b = spin_state(ch, beta, kPi - theta);
          CHECK(validate_state(a).is_physical);
          CHECK((a.corr - a.corr.transpose()).norm() < 1e-14);
          for (int k = 0; k < 3; ++k)
            CHECK(a.corr(k, k) == doctest::Approx(b.corr(k, k)).epsilon(1e-12).scale(1.0));
          CHECK(std::abs(a.corr(0, 2)) == doctest::Approx(std::abs(b.corr(0, 2))).epsilon(1e-12).scale(1.0));
          CHECK(partonic_shape(ch, beta, theta) == doctest::Approx(partonic_shape(ch, beta, kPi - theta)));
        }
      }
    }
  }

  TEST_CASE("partonic weights")
  {
    CHECK(partonic_shape(Channel::qqbar, 0.9, kPi / 2) / partonic_shape(Channel::qqbar, 0.9, 0.0) ==
          doctest::Approx(0.595).epsilon(1e-12));
    CHECK(partonic_weight(Channel::qqbar, 0.0, 0.3) == doctest::Approx(1.0 / (4 * kPi)));
    CHECK(partonic_weight(Channel::qqbar, 0.0, 2.0) == doctest::Approx(1.0 / (4 * kPi)));
    for (Channel ch : {Channel::gg, Channel::qqbar}) {
      for (double beta : {0.0, 0.5, 0.95}) {
        const auto q = gauss_legendre(64, -1.0, 1.0);
        double s = 0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
          s += q.weights[i] * partonic_weight(ch, beta, std::acos(q.nodes[i]));
        CHECK(2 * kPi * s == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("mixtures")
  {
    const WeightedState single[] = {{TwoQubitState::werner(0.4), 1.0, {}}};
    CHECK(coefficient_distance(mixed_state(single), TwoQubitState::werner(0.4)) == 0.0);

    const WeightedState pair[] = {{TwoQubitState::singlet(), 1.0, {}},
                                  {TwoQubitState::t_state(1, 1, -1), 1.0, {}}};
    CHECK((mixed_state(pair).corr - Vector3(0, 0, -1).asDiagonal().toDenseMatrix()).norm() < 1e-15);

    CHECK_THROWS_AS(mixed_state(std::span<const WeightedState>{}), DomainError);
    const WeightedState zero[] = {{TwoQubitState::singlet(), 0.0, {}}};
    CHECK_THROWS_AS(mixed_state(zero), DomainError);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
      std::vector<WeightedState> pts;
      for (int k = 0; k < 4; ++k)
        pts.push_back({testing_support::random_state(rng), u(rng), {}});
      CHECK(validate_state(mixed_state(pts)).is_physical);
    }

    // helicity-frame inputs are rotated before averaging
    const Frame hel{FrameTag::helicity, 0.9, 0.0};
    const WeightedState h[] = {{spin_state(Channel::gg, 0.4, 0.9), 1.0, hel}};
    CHECK(coefficient_distance(mixed_state(h), to_beam(spin_state(Channel::gg, 0.4, 0.9), hel)) < 1e-15);
  }

  TEST_CASE("luminosity tables")
  {
    const auto t = LuminosityTable::parse_csv("# collider = toy\n# sqrt_s = 13000\nm_gev,weight_gg,weight_qq\n"
                                              "350,1,0.5\n400,2,0.5\n");
    CHECK(t.collider() == "toy");
    CHECK(t.sqrt_s() == 13000.0);
    CHECK(t.weights_at(375).first == doctest::Approx(1.5));
    CHECK(t.weights_at(500).first == 0.0);
    CHECK(LuminosityTable::parse_csv(t.to_csv()).rows().size() == 2);
    CHECK_THROWS_AS(LuminosityTable::parse_csv("m_gev,weight_gg,weight_qq\n400,1,1\n350,1,1\n").validate(173),
                    InputDataError);
    CHECK_THROWS_AS(LuminosityTable::parse_csv("m_gev,weight_gg,weight_qq\n350,1,x\n"), InputDataError);
    CHECK_THROWS_AS(LuminosityTable::parse_csv("m_gev,weight_gg,weight_qq\n350,1,1\n360,-1,1\n").validate(173),
                    InputDataError);
    for (const auto& name : LuminosityTable::builtin_names())
      CHECK_NOTHROW(LuminosityTable::builtin(name).validate(kDefaultTopMass));
    CHECK_THROWS_AS(LuminosityTable::builtin("nope"), ConfigError);
  }

  TEST_CASE("integrated states")
  {
    const auto thr_gg = LuminosityTable::builtin("threshold-gg");
    const auto thr_qq = LuminosityTable::builtin("threshold-qq");
    const auto gg = integrated_state(thr_gg, thr_gg.max_mass());
    CHECK(gg.c_perp == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(gg.c_z == doctest::Approx(-1.0).epsilon(1e-6));
    const auto qq = integrated_state(thr_qq, thr_qq.max_mass());
    CHECK(std::abs(qq.c_perp) < 1e-6);
    CHECK(qq.c_z == doctest::Approx(1.0).epsilon(1e-6));

    const auto lhc = LuminosityTable::builtin("lhc-toy");
    const auto beam = integrate_beam(lhc, lhc.max_mass());
    CHECK(beam.bplus.norm() < 1e-12);
    CHECK(std::abs(beam.corr(0, 0) - beam.corr(1, 1)) < 1e-9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j)
          CHECK(std::abs(beam.corr(i, j)) < 1e-9);

    const auto hel = integrated_matrix_helicity(lhc, 600.0);
    CHECK(hel.bplus.norm() < 1e-12);
    CHECK((hel.corr - hel.corr.transpose()).norm() < 1e-12);

    // a spin model with an antisymmetric admixture propagates into the helicity record
    IntegrationOptions opts;
    opts.model = [](Channel ch, double beta, double theta) {
      auto s = spin_state(ch, beta, theta);
      s.corr *= 0.9;
      s.corr(0, 1) += 0.01;
      s.corr(1, 0) -= 0.01;
      return s;
    };
    const auto odd = integrated_matrix_helicity(lhc, 600.0, opts);
    CHECK((odd.corr - odd.corr.transpose()).norm() > 1e-3);

    CHECK_THROWS_AS(integrated_state(lhc, 300.0), DomainError);
    CHECK_THROWS_AS(integrated_state(lhc, lhc.max_mass() + 10), DomainError);
  }

  TEST_CASE("trajectory")
  {
    const auto lhc = LuminosityTable::builtin("lhc-toy");
    std::vector<double> cuts;
    for (int i = 1; i <= 6; ++i)
      cuts.push_back(2 * kDefaultTopMass + i * (lhc.max_mass() - 2 * kDefaultTopMass) / 6);
    const auto tr = trajectory(lhc, cuts);
    REQUIRE(tr.size() == cuts.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto& s = tr[i].state;
      CHECK(1 - s.c_z - 2 * std::abs(s.c_perp) >= -1e-10);
      CHECK(s.c_z >= -1 - 1e-10);
      const auto single = integrated_state(lhc, cuts[i]);
      CHECK(std::abs(single.c_perp - s.c_perp) < 1e-9);
      CHECK(std::abs(single.c_z - s.c_z) < 1e-9);
      if (i > 0) {
        CHECK(std::abs(s.c_z - tr[i - 1].state.c_z) < 0.5);
        CHECK(std::abs(s.c_perp - tr[i - 1].state.c_perp) < 0.5);
      }
    }
    const double unsorted[] = {500.0, 400.0};
    CHECK_THROWS_AS(trajectory(lhc, unsorted), DomainError);
    const auto t = to_two_qubit(tr.back().state);
    CHECK(t.corr(0, 0) == tr.back().state.c_perp);
    CHECK(validate_state(t).is_physical);
  }
}
