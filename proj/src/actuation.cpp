#include "sth/actuation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace sth {

namespace {

void check_rotor_index(int rotor) {
  if (rotor < 1 || rotor > kRotorCount) {
    throw std::out_of_range("rotor index must be in 1..6, got " + std::to_string(rotor));
  }
}

Eigen::Matrix3d rot_z(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

Eigen::Matrix3d rot_x(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

double arm_heading(int rotor) { return (rotor - 1) * std::numbers::pi / 3.0; }

// +1 (CCW) for odd rotors. This is the sign pattern under which the
// rotor-by-rotor sum reproduces the closed-form moment matrix.
double spin_sign(int rotor) { return rotor % 2 == 1 ? 1.0 : -1.0; }

}  // namespace

Eigen::Vector3d rotor_position(const PlatformParams& params, int rotor) {
  check_rotor_index(rotor);
  return params.arm_length * (rot_z(arm_heading(rotor)) * Eigen::Vector3d::UnitX());
}

Eigen::Vector3d rotor_axis(TiltAngle alpha, int rotor) {
  check_rotor_index(rotor);
  const double cant = (rotor % 2 == 0 ? 1.0 : -1.0) * alpha.radians();
  return rot_z(arm_heading(rotor)) * rot_x(cant) * Eigen::Vector3d::UnitZ();
}

Matrix6d ActuationMatrices::stacked() const {
  Matrix6d c;
  c.topRows<3>() = force;
  c.bottomRows<3>() = moment;
  return c;
}

ActuationMatrices build_actuation_matrices(const PlatformParams& params, TiltAngle alpha) {
  params.validate();
  const double s = std::sin(alpha.radians());
  const double c = std::cos(alpha.radians());
  const double h = std::sqrt(3.0) / 2.0;
  const double r = params.moment_arm_ratio();

  ActuationMatrices mat;
  // clang-format off
  mat.force << 0.0,   h * s, -h * s, 0.0,   h * s, -h * s,
               s,  -0.5 * s, -0.5 * s, s, -0.5 * s, -0.5 * s,
               c,      c,      c,     c,      c,      c;
  mat.force *= params.thrust_coeff;

  const double a = h * (r * c - s);      // sqrt(3)/2 (r c - s)
  const double b = r * c - s;
  const double z = r * s + c;
  mat.moment << 0.0,       a,        a,   0.0,      -a,        -a,
                 -b, -0.5 * b,  0.5 * b,    b,  0.5 * b,  -0.5 * b,
                  z,       -z,        z,   -z,        z,        -z;
  // clang-format on
  mat.moment *= params.drag_coeff;
  return mat;
}

ActuationMatrices assemble_from_rotors(const PlatformParams& params, TiltAngle alpha) {
  params.validate();
  ActuationMatrices mat;
  for (int i = 1; i <= kRotorCount; ++i) {
    const Eigen::Vector3d axis = rotor_axis(alpha, i);
    const Eigen::Vector3d pos = rotor_position(params, i);
    mat.force.col(i - 1) = params.thrust_coeff * axis;
    mat.moment.col(i - 1) =
        params.thrust_coeff * pos.cross(axis) + spin_sign(i) * params.drag_coeff * axis;
  }
  return mat;
}

const char* to_string(ActuationClass c) {
  switch (c) {
    case ActuationClass::UnderActuatedCollinear:
      return "under-actuated (collinear)";
    case ActuationClass::FullyActuated:
      return "fully actuated";
    case ActuationClass::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rank tolerance must be > 0");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

ActuationClass classify_actuation(const ActuationMatrices& mat, double rel_tol) {
  const int rank_c = numeric_rank(mat.stacked(), rel_tol);
  if (rank_c == 6) return ActuationClass::FullyActuated;
  const int rank_f = numeric_rank(mat.force, rel_tol);
  if (rank_f < 3) return ActuationClass::UnderActuatedCollinear;
  return ActuationClass::Degenerate;
}

InputVector::InputVector(const Vector6d& values, double input_max)
    : values_(values), input_max_(input_max) {
  if (!std::isfinite(input_max) || input_max < 0.0) {
    throw ValidationError("input bound must be finite and >= 0");
  }
  for (int i = 0; i < kRotorCount; ++i) {
    if (!std::isfinite(values(i)) || values(i) < 0.0 || values(i) > input_max) {
      throw ValidationError("input u_" + std::to_string(i + 1) + " = " +
                            std::to_string(values(i)) + " outside [0, " +
                            std::to_string(input_max) + "]");
    }
  }
}

Wrench wrench(const ActuationMatrices& mat, const InputVector& u) {
  return {mat.force * u.values(), mat.moment * u.values()};
}

void RigidBodyState::validate(double tol) const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).norm() > tol ||
      std::abs(rotation.determinant() - 1.0) > tol) {
    throw ValidationError("rotation is not a proper orthonormal matrix");
  }
  if ((inertia - inertia.transpose()).norm() > tol * inertia.norm()) {
    throw ValidationError("inertia is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError("inertia is not positive definite");
  }
}

Accelerations rigid_body_derivatives(const RigidBodyState& state,
                                     const PlatformParams& params,
                                     const ActuationMatrices& mat,
                                     const InputVector& u) {
  state.validate();
  params.validate();
  const Wrench w = wrench(mat, u);
  Accelerations acc;
  acc.linear = -params.gravity * Eigen::Vector3d::UnitZ() +
               state.rotation * w.force / params.mass;
  const Eigen::Vector3d gyro = state.angular_rate.cross(state.inertia * state.angular_rate);
  acc.angular = state.inertia.llt().solve(w.moment - gyro);
  return acc;
}

}  // namespace sth
