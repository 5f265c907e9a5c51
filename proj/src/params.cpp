#include "sth/params.hpp"

#include <cmath>

namespace sth {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

void PlatformParams::validate() const {
  require_positive(mass, "mass");
  require_positive(arm_length, "arm_length");
  require_positive(thrust_coeff, "thrust_coeff");
  require_positive(drag_coeff, "drag_coeff");
  require_positive(gravity, "gravity");
  if (!std::isfinite(input_max) || input_max < 0.0) {
    throw ValidationError("input_max must be finite and >= 0");
  }
  if (!(thrust_coeff > drag_coeff)) {
    throw ValidationError("thrust_coeff must exceed drag_coeff");
  }
}

TiltAngle TiltAngle::from_radians(double radians) {
  if (!std::isfinite(radians) || radians < 0.0 || radians >= std::numbers::pi / 2.0) {
    throw ValidationError("tilt angle must lie in [0, 90) degrees, got " +
                          std::to_string(rad2deg(radians)) + " deg");
  }
  return TiltAngle(radians);
}

TiltAngle TiltAngle::from_degrees(double degrees) {
  if (!std::isfinite(degrees) || degrees < 0.0 || degrees >= 90.0) {
    throw ValidationError("tilt angle must lie in [0, 90) degrees, got " +
                          std::to_string(degrees) + " deg");
  }
  return TiltAngle(deg2rad(degrees));
}

}  // namespace sth
