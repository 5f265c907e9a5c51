#include "sth/hull.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace sth::hull {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

struct Face {
  std::array<int, 3> idx;
  Eigen::Vector3d normal;  // unit, outward
  double offset;           // normal . point on plane
};

Face make_face(const std::vector<Eigen::Vector3d>& pts, int a, int b, int c) {
  Eigen::Vector3d n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
  const double len = n.norm();
  if (len > 0.0) n /= len;
  return {{a, b, c}, n, n.dot(pts[a])};
}

}  // namespace

std::vector<Eigen::Vector2d> convex_hull_2d(std::span<const Eigen::Vector2d> points,
                                            double rel_tol) {
  std::vector<Eigen::Vector2d> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  double extent = 0.0;
  for (const auto& p : pts) extent = std::max(extent, (p - pts.front()).norm());
  const double tol = rel_tol * extent * extent;

  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p) <= tol) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= tol) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double Hull3d::volume() const {
  if (faces.empty()) return 0.0;
  Eigen::Vector3d ref = Eigen::Vector3d::Zero();
  for (const auto& f : faces) ref += vertices[f[0]];
  ref /= static_cast<double>(faces.size());
  double six_v = 0.0;
  for (const auto& f : faces) {
    const Eigen::Vector3d a = vertices[f[0]] - ref;
    const Eigen::Vector3d b = vertices[f[1]] - ref;
    const Eigen::Vector3d c = vertices[f[2]] - ref;
    six_v += a.dot(b.cross(c));
  }
  return six_v / 6.0;
}

bool Hull3d::contains(const Eigen::Vector3d& p, double tol) const {
  if (faces.empty()) return false;
  for (const auto& f : faces) {
    const Face face = make_face(vertices, f[0], f[1], f[2]);
    if (face.normal.dot(p) - face.offset > tol) return false;
  }
  return true;
}

Hull3d convex_hull_3d(std::span<const Eigen::Vector3d> points, double rel_tol) {
  Hull3d out;
  out.vertices.assign(points.begin(), points.end());
  const auto& pts = out.vertices;
  const int n = static_cast<int>(pts.size());
  if (n < 4) return out;

  Eigen::Vector3d lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double eps = rel_tol * (hi - lo).norm();
  if (!(eps > 0.0)) return out;

  // Seed tetrahedron from successively farthest points.
  const auto argmax = [n](auto&& score) {
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i < n; ++i) {
      const double v = score(i);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    return std::pair{best, best_v};
  };
  const int i0 = 0;
  const auto [i1, d1] = argmax([&](int i) { return (pts[i] - pts[i0]).norm(); });
  if (d1 <= eps) return out;
  const Eigen::Vector3d dir = (pts[i1] - pts[i0]) / d1;
  const auto [i2, d2] = argmax([&](int i) {
    const Eigen::Vector3d v = pts[i] - pts[i0];
    return (v - v.dot(dir) * dir).norm();
  });
  if (d2 <= eps) return out;
  const Eigen::Vector3d plane_n = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  const auto [i3, d3] = argmax([&](int i) { return std::abs(plane_n.dot(pts[i] - pts[i0])); });
  if (d3 <= eps) return out;

  std::vector<Face> faces;
  const Eigen::Vector3d inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
  const auto add_oriented = [&](int a, int b, int c) {
    Face f = make_face(pts, a, b, c);
    if (f.normal.dot(inside) - f.offset > 0.0) f = make_face(pts, a, c, b);
    faces.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  std::vector<char> visible;
  std::set<std::pair<int, int>> edges;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].normal.dot(pts[p]) - faces[f].offset > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;

    edges.clear();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const auto& ix = faces[f].idx;
      for (int e = 0; e < 3; ++e) edges.insert({ix[e], ix[(e + 1) % 3]});
    }
    std::vector<Face> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) next.push_back(faces[f]);
    }
    for (const auto& [a, b] : edges) {
      // Horizon: the twin edge belongs to a face that stays.
      if (!edges.contains({b, a})) next.push_back(make_face(pts, a, b, p));
    }
    faces = std::move(next);
  }

  out.faces.reserve(faces.size());
  for (const auto& f : faces) out.faces.push_back(f.idx);
  return out;
}

}  // namespace sth::hull
