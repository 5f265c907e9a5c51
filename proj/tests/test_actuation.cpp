#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "sth/actuation.hpp"
#include "test_support.hpp"

using namespace sth;
using sth::test::deg;
using sth::test::reference_params;

namespace {

// Elementary rotations written out by hand, independent of Eigen::AngleAxis.
Eigen::Matrix3d rz(double a) {
  Eigen::Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

Eigen::Matrix3d rx(double a) {
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}

}  // namespace

TEST_CASE("rotor positions lie on the arm circle") {
  const auto p = reference_params();
  CHECK((rotor_position(p, 1) - Eigen::Vector3d(0.385, 0, 0)).norm() < 1e-15);
  CHECK((rotor_position(p, 4) - Eigen::Vector3d(-0.385, 0, 0)).norm() < 1e-15);

  // l (cos 60, sin 60, 0)
  const Eigen::Vector3d p2 = rotor_position(p, 2);
  CHECK(p2.x() == doctest::Approx(0.1925).epsilon(1e-12));
  CHECK(p2.y() == doctest::Approx(0.33342).epsilon(1e-5));
  CHECK(p2.z() == 0.0);
  CHECK((p2 - rotor_position(p, 1)).norm() == doctest::Approx(0.385).epsilon(1e-12));

  for (int i = 1; i <= 6; ++i) {
    const Eigen::Vector3d pi = rotor_position(p, i);
    CHECK(pi.z() == 0.0);
    CHECK(pi.norm() == doctest::Approx(p.arm_length).epsilon(1e-14));
  }
  CHECK_THROWS_AS(rotor_position(p, 0), std::out_of_range);
  CHECK_THROWS_AS(rotor_position(p, 7), std::out_of_range);
}

TEST_CASE("rotor axes") {
  for (int i = 1; i <= 6; ++i) {
    CHECK((rotor_axis(deg(0), i) - Eigen::Vector3d::UnitZ()).norm() < 1e-15);
  }

  const double a = std::numbers::pi / 6.0;
  const Eigen::Vector3d direct1 = rz(0) * rx(-a) * Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d direct4 = rz(std::numbers::pi) * rx(a) * Eigen::Vector3d::UnitZ();
  CHECK((direct1 - Eigen::Vector3d(0, 0.5, std::sqrt(3.0) / 2)).norm() < 1e-15);
  CHECK((direct4 - Eigen::Vector3d(0, 0.5, std::sqrt(3.0) / 2)).norm() < 1e-15);
  CHECK((rotor_axis(deg(30), 1) - direct1).norm() < 1e-15);
  CHECK((rotor_axis(deg(30), 4) - direct4).norm() < 1e-15);
  CHECK(rotor_axis(deg(30), 4).z() == doctest::Approx(0.86603).epsilon(1e-5));

  SUBCASE("unit norm and vertical component cos(alpha) on a grid") {
    for (int k = 0; k < 900; ++k) {
      const double d = 0.1 * k;
      for (int i = 1; i <= 6; ++i) {
        const Eigen::Vector3d z = rotor_axis(deg(d), i);
        CHECK(std::abs(z.norm() - 1.0) < 1e-14);
        CHECK(std::abs(z.z() - std::cos(deg2rad(d))) < 1e-14);
        CHECK((z - rz((i - 1) * std::numbers::pi / 3) * rx((i % 2 ? -1 : 1) * deg2rad(d)) *
                       Eigen::Vector3d::UnitZ())
                  .norm() < 1e-14);
      }
    }
  }
  CHECK_THROWS_AS(rotor_axis(deg(10), 0), std::out_of_range);
}

TEST_CASE("actuation matrices: closed form") {
  const auto p = reference_params();

  const auto m0 = build_actuation_matrices(p, deg(0));
  CHECK(m0.force.topRows<2>().cwiseAbs().maxCoeff() == 0.0);
  CHECK((m0.force.row(2).array() - p.thrust_coeff).abs().maxCoeff() < 1e-18);

  const auto m30 = build_actuation_matrices(p, deg(30));
  CHECK(m30.force(1, 0) == doctest::Approx(7.5e-4).epsilon(1e-12));
  CHECK((m30.force.col(0) - p.thrust_coeff * rotor_axis(deg(30), 1)).norm() < 1e-18);

  for (int k = 0; k < 1000; ++k) {
    const double d = 89.999 * k / 999.0;
    const auto m = build_actuation_matrices(p, deg(d));
    const auto per_rotor = assemble_from_rotors(p, deg(d));
    CHECK((m.force - per_rotor.force).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m.moment - per_rotor.moment).cwiseAbs().maxCoeff() < 1e-12);
    for (int c = 0; c < 3; ++c) {
      CHECK((m.moment.col(c) + m.moment.col(c + 3)).norm() < 1e-15);
      CHECK((m.force.col(c) - m.force.col(c + 3)).norm() < 1e-17);
      CHECK(std::abs(m.force.col(c).norm() - p.thrust_coeff) < 1e-16);
    }
    CHECK((m.force.row(2).array() - p.thrust_coeff * std::cos(deg2rad(d))).abs().maxCoeff() <
          1e-18);
  }
}

TEST_CASE("rank classification") {
  const auto p = reference_params();
  CHECK(classify_actuation(build_actuation_matrices(p, deg(0))) ==
        ActuationClass::UnderActuatedCollinear);
  CHECK(classify_actuation(build_actuation_matrices(p, deg(30))) ==
        ActuationClass::FullyActuated);

  // Lateral singular values scale with sin(alpha) ~ 1e-9, far below 1e-6.
  const auto tiny = build_actuation_matrices(p, TiltAngle::from_radians(1e-9));
  CHECK(classify_actuation(tiny, 1e-6) == ActuationClass::UnderActuatedCollinear);
  CHECK(numeric_rank(tiny.force, 1e-6) == 1);
  // At the default 1e-9 threshold the same platform still reads rank 3 once
  // sin(alpha) clears it.
  CHECK(classify_actuation(build_actuation_matrices(p, TiltAngle::from_radians(1e-6))) ==
        ActuationClass::FullyActuated);

  for (int k = 0; k < 1000; ++k) {
    const double d = 89.999 * k / 999.0;
    const auto m = build_actuation_matrices(p, deg(d));
    CHECK(numeric_rank(m.moment) == 3);
    CHECK(numeric_rank(m.force) == (k == 0 ? 1 : 3));
    CHECK((numeric_rank(m.stacked()) == 6) == (k != 0));
  }

  CHECK_THROWS_AS(numeric_rank(Eigen::MatrixXd::Identity(3, 3), 0.0), std::invalid_argument);
  CHECK(numeric_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
}

TEST_CASE("wrench") {
  const auto p = reference_params();
  const double u = p.input_max;

  const auto zero = wrench(build_actuation_matrices(p, deg(30)), InputVector::uniform(0, u));
  CHECK(zero.force.norm() == 0.0);
  CHECK(zero.moment.norm() == 0.0);

  // Per-rotor sum of thrusts at full input, no tilt.
  const auto w0 = wrench(build_actuation_matrices(p, deg(0)), InputVector::uniform(u, u));
  Eigen::Vector3d per_rotor = Eigen::Vector3d::Zero();
  for (int i = 1; i <= 6; ++i) per_rotor += p.thrust_coeff * u * rotor_axis(deg(0), i);
  CHECK((w0.force - per_rotor).norm() < 1e-12);
  CHECK(w0.force.z() == doctest::Approx(104.976).epsilon(1e-12));

  const auto m30 = assemble_from_rotors(p, deg(30));
  const auto w30 = wrench(build_actuation_matrices(p, deg(30)), InputVector::uniform(u, u));
  CHECK(w30.moment.norm() < 1e-12);
  CHECK((m30.moment * Vector6d::Constant(u)).norm() < 1e-12);

  SUBCASE("linearity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto mat = build_actuation_matrices(p, deg(40));
    for (int trial = 0; trial < 200; ++trial) {
      const Vector6d u1 = Vector6d::NullaryExpr([&] { return unit(rng) * u; });
      const Vector6d u2 = Vector6d::NullaryExpr([&] { return unit(rng) * u; });
      const double a = unit(rng), b = 1.0 - a;
      const auto lhs = wrench(mat, InputVector(a * u1 + b * u2, u));
      const auto w1 = wrench(mat, InputVector(u1, u));
      const auto w2 = wrench(mat, InputVector(u2, u));
      CHECK((lhs.force - (a * w1.force + b * w2.force)).norm() < 1e-10);
      CHECK((lhs.moment - (a * w1.moment + b * w2.moment)).norm() < 1e-10);
    }
  }

  Vector6d bad = Vector6d::Zero();
  bad(2) = u * 1.01;
  CHECK_THROWS_AS(InputVector(bad, u), ValidationError);
  bad(2) = -1.0;
  CHECK_THROWS_AS(InputVector(bad, u), ValidationError);
}

TEST_CASE("rigid body derivatives") {
  const auto p = reference_params();
  RigidBodyState s;

  const auto fall = rigid_body_derivatives(s, p, build_actuation_matrices(p, deg(30)),
                                           InputVector::uniform(0, p.input_max));
  CHECK((fall.linear - Eigen::Vector3d(0, 0, -p.gravity)).norm() < 1e-15);
  CHECK(fall.angular.norm() == 0.0);

  SUBCASE("hover trim with equal split") {
    for (const double d : {10.0, 30.0, 50.0, 65.0}) {
      const double trim = p.weight() / (6.0 * p.thrust_coeff * std::cos(deg2rad(d)));
      const auto acc = rigid_body_derivatives(s, p, build_actuation_matrices(p, deg(d)),
                                              InputVector::uniform(trim, p.input_max));
      CHECK(acc.linear.norm() < 1e-9);
      CHECK(acc.angular.norm() < 1e-9);
    }
  }

  SUBCASE("spin about a principal axis has no gyroscopic torque") {
    s.angular_rate = {0, 0, 1};
    s.inertia = Eigen::Vector3d(1, 1, 2).asDiagonal();
    const auto acc = rigid_body_derivatives(s, p, build_actuation_matrices(p, deg(30)),
                                            InputVector::uniform(0, p.input_max));
    CHECK(acc.angular.norm() == 0.0);
  }

  SUBCASE("gyroscopic torque matches -J^-1 (w x Jw)") {
    s.angular_rate = {0.3, -0.2, 0.5};
    s.inertia = Eigen::Vector3d(0.1, 0.12, 0.2).asDiagonal();
    const auto acc = rigid_body_derivatives(s, p, build_actuation_matrices(p, deg(30)),
                                            InputVector::uniform(0, p.input_max));
    const Eigen::Vector3d w = s.angular_rate;
    const Eigen::Vector3d expected =
        -s.inertia.inverse() * w.cross(s.inertia * w);
    CHECK((acc.angular - expected).norm() < 1e-14);
  }

  SUBCASE("rotated body tilts the thrust") {
    s.rotation = Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitX()).toRotationMatrix();
    const auto mat = build_actuation_matrices(p, deg(30));
    const auto u = InputVector::uniform(2000.0, p.input_max);
    const auto acc = rigid_body_derivatives(s, p, mat, u);
    const Eigen::Vector3d expected =
        -p.gravity * Eigen::Vector3d::UnitZ() + s.rotation * (mat.force * u.values()) / p.mass;
    CHECK((acc.linear - expected).norm() < 1e-12);
  }

  SUBCASE("invalid state is rejected") {
    s.rotation(0, 0) = 2.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = RigidBodyState{};
    s.inertia = Eigen::Vector3d(1, -1, 1).asDiagonal();
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = RigidBodyState{};
    s.inertia(0, 1) = 0.05;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = RigidBodyState{};
    s.rotation = -Eigen::Matrix3d::Identity();
    CHECK_THROWS_AS(s.validate(), ValidationError);
  }
}

TEST_CASE("parameter and angle validation") {
  PlatformParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.moment_arm_ratio() == doctest::Approx(1.5e-3 / 4.59e-5 * 0.385));

  p.mass = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("mass"), ValidationError);
  p = PlatformParams{};
  p.drag_coeff = 2e-3;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("thrust_coeff"), ValidationError);
  p = PlatformParams{};
  p.input_max = 0.0;
  CHECK_NOTHROW(p.validate());
  p.input_max = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  CHECK_NOTHROW(TiltAngle::from_degrees(0.0));
  CHECK_NOTHROW(TiltAngle::from_degrees(89.999));
  CHECK_THROWS_AS(TiltAngle::from_degrees(90.0), ValidationError);
  CHECK_THROWS_AS(TiltAngle::from_degrees(-0.1), ValidationError);
  CHECK_THROWS_AS(TiltAngle::from_radians(std::numbers::pi / 2), ValidationError);
  CHECK(TiltAngle::from_degrees(45).radians() == doctest::Approx(std::numbers::pi / 4));
}
