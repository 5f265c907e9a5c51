#include "sth/hover_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sth {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Shorthands shared by every closed form.
struct Terms {
  double s, c, t;
  double mg;
  double cfu;        // c_f * u_max [N]
  double u_max;
  double coord_sum;  // mg / (2 c_f cos a): required sum of zero-moment inputs
};

Terms terms(const PlatformParams& params, TiltAngle alpha) {
  params.validate();
  const double a = alpha.radians();
  Terms k{};
  k.s = std::sin(a);
  k.c = std::cos(a);
  k.t = std::tan(a);
  k.mg = params.weight();
  k.cfu = params.thrust_coeff * params.input_max;
  k.u_max = params.input_max;
  k.coord_sum = k.mg / (2.0 * params.thrust_coeff * k.c);
  return k;
}

// In-plane force generated by zero-moment inputs (rows 1-2 of F [I;I]).
Eigen::Vector2d plane_force(const PlatformParams& params, const Terms& k,
                            const Eigen::Vector3d& u) {
  const double cf = params.thrust_coeff;
  return {cf * kSqrt3 * k.s * (u(1) - u(2)), cf * k.s * (2.0 * u(0) - u(1) - u(2))};
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

char to_char(HoverCase c) {
  switch (c) {
    case HoverCase::A:
      return 'A';
    case HoverCase::B:
      return 'B';
    case HoverCase::C:
      return 'C';
    case HoverCase::D:
      return 'D';
  }
  return '?';
}

CaseBoundaries case_boundaries(const PlatformParams& params) {
  params.validate();
  const double mg = params.weight();
  const auto boundary = [&](int pairs) -> std::optional<double> {
    const double cosine = mg / (2.0 * pairs * params.thrust_coeff * params.input_max);
    if (!(cosine <= 1.0)) return std::nullopt;
    return std::acos(cosine);
  };
  return {boundary(1), boundary(2), boundary(3)};
}

HoverCase classify_hover_case(const PlatformParams& params, TiltAngle alpha) {
  const Terms k = terms(params, alpha);
  const double cf = params.thrust_coeff;
  if (k.u_max >= k.mg / (2.0 * cf * k.c)) return HoverCase::A;
  if (k.u_max >= k.mg / (4.0 * cf * k.c)) return HoverCase::B;
  if (k.u_max >= k.mg / (6.0 * cf * k.c)) return HoverCase::C;
  return HoverCase::D;
}

double zero_moment_volume(const PlatformParams& params, TiltAngle alpha) {
  const Terms k = terms(params, alpha);
  return 12.0 * kSqrt3 * k.cfu * k.cfu * k.cfu * k.c * k.s * k.s;
}

HoverSlice slice_vertices_for_case(const PlatformParams& params, TiltAngle alpha,
                                   HoverCase which) {
  const Terms k = terms(params, alpha);
  const double sum = k.coord_sum;
  const double u = k.u_max;

  std::vector<Eigen::Vector3d> coords;
  switch (which) {
    case HoverCase::A:
      // One rotor pair carries the whole weight.
      coords = {{sum, 0, 0}, {0, 0, sum}, {0, sum, 0}};
      break;
    case HoverCase::B:
      // One pair saturated, a second pair takes the rest.
      coords = {{u, sum - u, 0}, {u, 0, sum - u}, {sum - u, 0, u},
                {0, sum - u, u}, {0, u, sum - u}, {sum - u, u, 0}};
      break;
    case HoverCase::C:
      // Two pairs saturated.
      coords = {{u, u, sum - 2 * u}, {u, sum - 2 * u, u}, {sum - 2 * u, u, u}};
      break;
    case HoverCase::D:
      throw InfeasibleHoverError("no hovering slice: platform cannot balance its weight");
  }

  HoverSlice slice{which, {}};
  slice.vertices.reserve(coords.size());
  for (const auto& cu : coords) {
    slice.vertices.push_back({plane_force(params, k, cu), cu});
  }
  return slice;
}

HoverSlice hover_slice_vertices(const PlatformParams& params, TiltAngle alpha) {
  return slice_vertices_for_case(params, alpha, classify_hover_case(params, alpha));
}

double polygon_area(std::span<const Eigen::Vector2d> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    twice += cross2(polygon[j], polygon[(j + 1) % n]);
  }
  return 0.5 * std::abs(twice);
}

double hover_slice_area(const HoverSlice& slice) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(slice.vertices.size());
  for (const auto& v : slice.vertices) pts.push_back(v.force);
  return polygon_area(pts);
}

double hover_area_for_case(const PlatformParams& params, TiltAngle alpha, HoverCase which) {
  const Terms k = terms(params, alpha);
  const double full = 0.75 * kSqrt3 * (k.mg * k.t) * (k.mg * k.t);
  switch (which) {
    case HoverCase::A:
      return full;
    case HoverCase::B: {
      const double cut = 0.5 * k.mg * k.t - k.cfu * k.s;
      return full - 9.0 * kSqrt3 * cut * cut;
    }
    case HoverCase::C: {
      const double side = 3.0 * k.cfu * k.s - 0.5 * k.mg * k.t;
      return 3.0 * kSqrt3 * side * side;
    }
    case HoverCase::D:
      return 0.0;
  }
  return 0.0;
}

SliceRadii slice_radii(const HoverSlice& slice) {
  const auto& v = slice.vertices;
  const std::size_t n = v.size();
  if (n == 0) return {0.0, 0.0};

  double scale = 0.0;
  for (const auto& p : v) scale = std::max(scale, p.force.norm());
  const Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  if (n >= 3) {
    // Counterclockwise polygon: the origin must be left of (or on) every edge.
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Vector2d& a = v[j].force;
      const Eigen::Vector2d& b = v[(j + 1) % n].force;
      if (cross2(b - a, origin - a) < -1e-12 * scale * scale) {
        throw std::domain_error("origin lies outside the hovering slice");
      }
    }
  }

  SliceRadii r{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    r.outer = std::max(r.outer, v[j].force.norm());
    r.inner = std::min(r.inner, point_segment_distance(origin, v[j].force, v[(j + 1) % n].force));
  }
  return r;
}

SliceRadii radii_for_case(const PlatformParams& params, TiltAngle alpha, HoverCase which) {
  const Terms k = terms(params, alpha);
  switch (which) {
    case HoverCase::A:
      return {0.5 * k.mg * k.t, k.mg * k.t};
    case HoverCase::B: {
      const double bottom = 0.5 * k.mg * k.t;
      const double top = std::abs(3.0 * k.cfu * k.s - 0.5 * k.mg * k.t);
      const double fx = kSqrt3 * k.cfu * k.s;
      const double fy = k.mg * k.t - 3.0 * k.cfu * k.s;
      return {std::min(bottom, top), std::hypot(fx, fy)};
    }
    case HoverCase::C:
      return {std::abs(3.0 * k.cfu * k.s - 0.5 * k.mg * k.t),
              std::abs(k.mg * k.t - 6.0 * k.cfu * k.s)};
    case HoverCase::D:
      return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

ExtraHoverGeometry extra_hover_geometry(const PlatformParams& params, TiltAngle alpha) {
  if (classify_hover_case(params, alpha) == HoverCase::D) {
    throw InfeasibleHoverError("no extra-hovering volume: platform cannot balance its weight");
  }
  const Terms k = terms(params, alpha);
  ExtraHoverGeometry g{};
  g.max_thrust = 6.0 * k.cfu * k.c;
  g.excess_thrust = g.max_thrust - k.mg;
  // Each generator has length 2 c_f u_max and leans by alpha from vertical.
  g.small_height = g.excess_thrust - 2.0 * k.cfu * k.c;
  g.edge_angle = std::atan(k.t);
  g.segment = g.small_height * std::tan(g.edge_angle);
  g.small_side = 2.0 * std::sin(std::numbers::pi / 3.0) * g.segment;
  g.small_area = 0.25 * kSqrt3 * g.small_side * g.small_side;
  return g;
}

double extra_hover_volume_for_case(const PlatformParams& params, TiltAngle alpha,
                                   HoverCase which) {
  if (which == HoverCase::D) return 0.0;
  const Terms k = terms(params, alpha);
  const double area = hover_area_for_case(params, alpha, which);
  switch (which) {
    case HoverCase::A:
      return zero_moment_volume(params, alpha) - area * k.mg / 3.0;
    case HoverCase::B: {
      // Pyramid over the extended triangle minus three corner pyramids.
      const double excess = 6.0 * k.cfu * k.c - k.mg;
      const double h_small = excess - 2.0 * k.cfu * k.c;
      const double side = 2.0 * std::sin(std::numbers::pi / 3.0) * h_small * k.t;
      const double small_area = 0.25 * kSqrt3 * side * side;
      return (area + 3.0 * small_area) * excess / 3.0 - small_area * h_small;
    }
    case HoverCase::C: {
      const double excess = 6.0 * k.cfu * k.c - k.mg;
      return area * excess / 3.0;
    }
    case HoverCase::D:
      break;
  }
  return 0.0;
}

double extra_hover_volume(const PlatformParams& params, TiltAngle alpha) {
  return extra_hover_volume_for_case(params, alpha, classify_hover_case(params, alpha));
}

MetricsRecord metrics_record(const PlatformParams& params, TiltAngle alpha) {
  MetricsRecord rec{};
  rec.alpha = alpha.radians();
  rec.hover_case = classify_hover_case(params, alpha);
  rec.zero_moment_volume = zero_moment_volume(params, alpha);
  rec.feasible = rec.hover_case != HoverCase::D;
  rec.degenerate = std::sin(alpha.radians()) == 0.0;
  if (!rec.feasible || rec.degenerate) return rec;

  const HoverSlice slice = hover_slice_vertices(params, alpha);
  rec.hover_area = hover_slice_area(slice);
  const SliceRadii radii = slice_radii(slice);
  rec.inner_radius = radii.inner;
  rec.outer_radius = radii.outer;
  rec.extra_hover_volume = extra_hover_volume(params, alpha);
  return rec;
}

}  // namespace sth
