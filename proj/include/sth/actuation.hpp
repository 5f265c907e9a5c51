#pragma once

#include <Eigen/Dense>

#include "sth/params.hpp"

namespace sth {

inline constexpr int kRotorCount = 6;

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix36d = Eigen::Matrix<double, 3, 6>;
using Matrix63d = Eigen::Matrix<double, 6, 3>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Default relative singular-value threshold for numeric rank decisions.
inline constexpr double kDefaultRankTolerance = 1e-9;

/// Rotor hub position in the body frame, rotor index in 1..6.
Eigen::Vector3d rotor_position(const PlatformParams& params, int rotor);

/// Unit spin axis of a rotor, rotor index in 1..6. Odd rotors are canted by
/// -alpha about their arm, even rotors by +alpha.
Eigen::Vector3d rotor_axis(TiltAngle alpha, int rotor);

/// Control force and moment input matrices mapping squared rotor speeds to
/// body-frame force [N] and moment [N m].
struct ActuationMatrices {
  Matrix36d force;
  Matrix36d moment;

  /// 6x6 stack of force over moment.
  [[nodiscard]] Matrix6d stacked() const;
};

/// Closed-form matrices for alternating spin directions (kappa_i = (-1)^i).
ActuationMatrices build_actuation_matrices(const PlatformParams& params, TiltAngle alpha);

/// Same matrices assembled rotor by rotor from thrust, thrust moment and drag
/// moment. Independent of the closed form; used for cross-checking.
ActuationMatrices assemble_from_rotors(const PlatformParams& params, TiltAngle alpha);

enum class ActuationClass { UnderActuatedCollinear, FullyActuated, Degenerate };

const char* to_string(ActuationClass c);

/// Number of singular values above rel_tol times the largest one.
int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = kDefaultRankTolerance);

/// FullyActuated iff rank(C) = 6; UnderActuatedCollinear iff rank(F) < 3 and
/// rank(C) < 6; anything else is Degenerate.
ActuationClass classify_actuation(const ActuationMatrices& mat,
                                  double rel_tol = kDefaultRankTolerance);

/// Squared rotor speeds, each within [0, input_max].
class InputVector {
 public:
  /// Throws ValidationError if any component leaves [0, input_max].
  InputVector(const Vector6d& values, double input_max);

  static InputVector uniform(double value, double input_max) {
    return InputVector(Vector6d::Constant(value), input_max);
  }

  [[nodiscard]] const Vector6d& values() const { return values_; }
  [[nodiscard]] double input_max() const { return input_max_; }

 private:
  Vector6d values_;
  double input_max_;
};

struct Wrench {
  Eigen::Vector3d force;
  Eigen::Vector3d moment;
};

Wrench wrench(const ActuationMatrices& mat, const InputVector& u);

/// Rigid-body state used by the Newton-Euler model.
struct RigidBodyState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d angular_rate = Eigen::Vector3d::Zero();
  /// Simulation default only; the maneuverability metrics never use inertia.
  Eigen::Matrix3d inertia = Eigen::Vector3d(0.1, 0.1, 0.2).asDiagonal();

  /// Rotation must be orthonormal with det +1, inertia symmetric positive
  /// definite.
  void validate(double tol = 1e-9) const;
};

struct Accelerations {
  Eigen::Vector3d linear;   // world frame [m/s^2]
  Eigen::Vector3d angular;  // body frame [rad/s^2]
};

Accelerations rigid_body_derivatives(const RigidBodyState& state,
                                     const PlatformParams& params,
                                     const ActuationMatrices& mat,
                                     const InputVector& u);

}  // namespace sth
