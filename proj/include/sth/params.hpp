#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace sth {

/// Raised when a parameter set or angle violates its domain.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical parameters of a star-shaped tilted hexarotor.
///
/// Defaults reproduce the reference platform (3.5 kg, 0.385 m arms,
/// rotors bounded at 108 Hz). Rotor speeds are in Hz, so the input bound
/// `input_max` is a bound on the squared speed in Hz^2.
struct PlatformParams {
  double mass = 3.5;               // [kg]
  double arm_length = 0.385;       // [m]
  double thrust_coeff = 1.5e-3;    // c_f [N/Hz^2]
  double drag_coeff = 4.59e-5;     // c_tau [N m/Hz^2]
  double input_max = 108.0 * 108.0;  // [Hz^2]
  double gravity = 9.81;           // [m/s^2]

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  [[nodiscard]] double weight() const { return mass * gravity; }

  /// r = (c_f / c_tau) * arm_length, the moment-arm ratio of the moment matrix.
  [[nodiscard]] double moment_arm_ratio() const {
    return thrust_coeff / drag_coeff * arm_length;
  }
};

/// Fixed cant angle of the rotors about their arms, in [0, pi/2).
class TiltAngle {
 public:
  static TiltAngle from_radians(double radians);
  static TiltAngle from_degrees(double degrees);

  [[nodiscard]] double radians() const { return radians_; }
  [[nodiscard]] double degrees() const { return radians_ * 180.0 / std::numbers::pi; }

 private:
  explicit TiltAngle(double radians) : radians_(radians) {}
  double radians_;
};

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace sth
