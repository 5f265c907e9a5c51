#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sth/params.hpp"

namespace sth {

/// How many rotor pairs must work to balance gravity at level attitude.
/// A: one pair suffices; B: two pairs; C: all three; D: the platform cannot
/// hover.
enum class HoverCase { A, B, C, D };

char to_char(HoverCase c);

/// Raised when a hovering-plane quantity is requested in case D.
class InfeasibleHoverError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Tilt angles [rad] where the case changes. An entry is empty when the
/// corresponding transition never happens in [0, pi/2), e.g. `a_to_b` is
/// empty when the rotors are too weak for case A even at zero tilt.
struct CaseBoundaries {
  std::optional<double> a_to_b;
  std::optional<double> b_to_c;
  std::optional<double> c_to_d;
};

/// arccos(mg / (2 k c_f u_max)) for k = 1, 2, 3.
CaseBoundaries case_boundaries(const PlatformParams& params);

/// Intervals are closed below in u_max: u_max == mg/(2 c_f cos a) is case A.
HoverCase classify_hover_case(const PlatformParams& params, TiltAngle alpha);

/// Volume of the zero-moment force parallelepiped,
/// 12 sqrt(3) (c_f u_max)^3 cos(a) sin(a)^2 [N^3].
double zero_moment_volume(const PlatformParams& params, TiltAngle alpha);

struct SliceVertex {
  Eigen::Vector2d force;         // (f_x, f_y) [N]
  Eigen::Vector3d coords;        // generating zero-moment inputs [Hz^2]
};

/// Hovering-plane cross-section of the zero-moment force polytope.
/// Vertices are counterclockwise, starting at the one with the largest f_y
/// (ties broken by the larger f_x).
struct HoverSlice {
  HoverCase hover_case;
  std::vector<SliceVertex> vertices;
};

/// Extreme points for the active case. Throws InfeasibleHoverError in case D.
HoverSlice hover_slice_vertices(const PlatformParams& params, TiltAngle alpha);

/// Extreme points using the formulas of a given case regardless of which
/// case is active. Used to check continuity at case boundaries.
HoverSlice slice_vertices_for_case(const PlatformParams& params, TiltAngle alpha,
                                   HoverCase which);

/// Shoelace area of an ordered polygon. Fewer than 3 points gives 0.
double polygon_area(std::span<const Eigen::Vector2d> polygon);

double hover_slice_area(const HoverSlice& slice);

/// Closed-form slice area of a given case.
double hover_area_for_case(const PlatformParams& params, TiltAngle alpha, HoverCase which);

struct SliceRadii {
  double inner;  // inscribed circle about the origin [N]
  double outer;  // circumscribed circle about the origin [N]
};

/// Generic distances: inner = nearest edge, outer = farthest vertex.
/// Throws std::domain_error if the origin lies outside the polygon.
SliceRadii slice_radii(const HoverSlice& slice);

/// Per-case closed forms read off the extreme points.
SliceRadii radii_for_case(const PlatformParams& params, TiltAngle alpha, HoverCase which);

/// Auxiliary quantities of the extra-hovering volume construction.
/// `small_height`, `small_side` and `small_area` describe the three corner
/// pyramids cut from the big pyramid; they are only physically meaningful in
/// case B.
struct ExtraHoverGeometry {
  double max_thrust;     // h_max = 6 c_f u_max cos(a) [N]
  double excess_thrust;  // h_+ = h_max - mg [N]
  double small_height;   // h_tri = h_+ - 2 c_f u_max cos(a) [N]
  double edge_angle;     // psi, angle between generator edges and vertical [rad]
  double segment;        // a_bar = h_tri tan(psi) [N]
  double small_side;     // l_tri = 2 sin(60 deg) a_bar [N]
  double small_area;     // (sqrt(3)/4) l_tri^2 [N^2]
};

/// Throws InfeasibleHoverError in case D.
ExtraHoverGeometry extra_hover_geometry(const PlatformParams& params, TiltAngle alpha);

/// Volume of zero-moment forces with f_z >= mg. Returns 0 in case D.
double extra_hover_volume(const PlatformParams& params, TiltAngle alpha);

/// Closed form of a given case regardless of the active one.
double extra_hover_volume_for_case(const PlatformParams& params, TiltAngle alpha,
                                   HoverCase which);

struct MetricsRecord {
  double alpha;  // [rad]
  HoverCase hover_case;
  double zero_moment_volume;  // V_FB [N^3]
  double hover_area;          // A_FBh [N^2]
  double inner_radius;        // r_i [N]
  double outer_radius;        // r_o [N]
  double extra_hover_volume;  // V_FBh [N^3]
  bool feasible;    // false in case D
  bool degenerate;  // true at zero tilt, where the slice collapses to a point
};

MetricsRecord metrics_record(const PlatformParams& params, TiltAngle alpha);

}  // namespace sth
