#include "sth/geometry_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "sth/hover_metrics.hpp"
#include "sth/hull.hpp"

namespace sth::oracle {

namespace {

// Inputs that sum to a constant keep f_z fixed only if every generator has
// the same vertical component; the star layout guarantees it.
double vertical_gain(const Eigen::Matrix3d& h) {
  const double g = h(2, 0);
  const double scale = h.row(2).cwiseAbs().maxCoeff();
  if ((h.row(2).array() - g).abs().maxCoeff() > 1e-12 * scale) {
    throw std::domain_error("generators have unequal vertical components");
  }
  return g;
}

double segment_distance_to_origin(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a.norm();
  const double t = std::clamp(-a.dot(ab) / len2, 0.0, 1.0);
  return (a + t * ab).norm();
}

}  // namespace

SampledPolytope sample_zero_moment_forces(const ZeroMomentBasis& basis, double u_max, int n,
                                          std::size_t max_points) {
  if (n < 2) throw std::invalid_argument("sampling resolution must be >= 2");
  const auto count = static_cast<std::size_t>(n) * n * n;
  if (count / n / n != static_cast<std::size_t>(n) || count > max_points) {
    throw std::length_error("requested " + std::to_string(n) + "^3 samples exceeds the cap of " +
                            std::to_string(max_points));
  }
  SampledPolytope poly{{}, n};
  poly.points.reserve(count);
  const Eigen::Matrix3d gen = u_max * basis.force_map;
  const double step = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        // Index n-1 maps to exactly 1 so the corners are exact.
        const Eigen::Vector3d eps(i == n - 1 ? 1.0 : i * step, j == n - 1 ? 1.0 : j * step,
                                  k == n - 1 ? 1.0 : k * step);
        poly.points.push_back(gen * eps);
      }
    }
  }
  return poly;
}

double oracle_volume(const SampledPolytope& poly) {
  return hull::convex_hull_3d(poly.points).volume();
}

SliceEstimate oracle_slice(const ZeroMomentBasis& basis, const PlatformParams& params, int n) {
  if (n < 1) throw std::invalid_argument("slice resolution must be >= 1");
  params.validate();
  const Eigen::Matrix3d& h = basis.force_map;
  const double gain = vertical_gain(h);
  const double u_max = params.input_max;
  const double total = params.weight() / gain;
  if (!(gain > 0.0) || total > 3.0 * u_max) {
    throw InfeasibleHoverError("no admissible zero-moment input balances the weight");
  }

  // Every admissible input lies in both {u_k >= lo} and {u_k <= hi} on the
  // plane sum u_k = total. The lattice covers whichever of the two simplices
  // is smaller, so its resolution tracks the size of the feasible region.
  const double lo = std::max(0.0, total - 2.0 * u_max);
  const double hi = std::min(u_max, total);
  const double lower_size = total - 3.0 * lo;
  const double upper_size = 3.0 * hi - total;
  const bool from_below = lower_size <= upper_size;
  const double step = (from_below ? lower_size : upper_size) / n;
  const double slack = 1e-12 * std::max(u_max, total);
  const Eigen::Matrix<double, 2, 3> planar = h.topRows<2>();
  std::vector<Eigen::Vector2d> forces;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const Eigen::Vector3d offset = step * Eigen::Vector3d(i, j, n - i - j);
      const Eigen::Vector3d u = from_below ? (Eigen::Vector3d::Constant(lo) + offset).eval()
                                           : (Eigen::Vector3d::Constant(hi) - offset).eval();
      if (u.minCoeff() >= -slack && u.maxCoeff() <= u_max + slack) {
        forces.push_back(planar * u);
      }
    }
  }
  if (forces.empty()) {
    throw InfeasibleHoverError("simplex lattice too coarse: no admissible sample");
  }

  SliceEstimate est{};
  est.samples = forces.size();
  est.hull = hull::convex_hull_2d(forces);
  const auto& hv = est.hull;

  // Fan triangulation from the first vertex.
  double twice = 0.0;
  for (std::size_t j = 1; j + 1 < hv.size(); ++j) {
    const Eigen::Vector2d a = hv[j] - hv[0];
    const Eigen::Vector2d b = hv[j + 1] - hv[0];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  est.area = 0.5 * std::abs(twice);

  est.inner_radius = hv.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  est.outer_radius = 0.0;
  for (std::size_t j = 0; j < hv.size(); ++j) {
    est.outer_radius = std::max(est.outer_radius, hv[j].norm());
    est.inner_radius =
        std::min(est.inner_radius, segment_distance_to_origin(hv[j], hv[(j + 1) % hv.size()]));
  }
  if (hv.size() < 3) est.inner_radius = 0.0;

  const Eigen::Vector3d d[3] = {{1, -1, 0}, {0, 1, -1}, {1, 0, -1}};
  for (const auto& dir : d) est.spacing = std::max(est.spacing, (planar * dir).norm() * step);
  return est;
}

double oracle_extra_hover_volume(const ZeroMomentBasis& basis, const PlatformParams& params,
                                 int n) {
  if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
  params.validate();
  const Eigen::Matrix3d gen = params.input_max * basis.force_map;
  const double mg = params.weight();
  const Eigen::RowVector3d vertical = gen.row(2);
  if ((vertical.array() < 0.0).any()) {
    throw std::domain_error("generators with negative vertical component");
  }
  if (vertical.sum() < mg) return 0.0;

  // Cells with eps_k below lo(k) cannot reach mg even with the other two
  // inputs saturated; grid only the box [lo, 1]^3.
  Eigen::Vector3d lo;
  for (int k = 0; k < 3; ++k) {
    const double rest = vertical.sum() - vertical(k);
    lo(k) = vertical(k) > 0.0 ? std::clamp((mg - rest) / vertical(k), 0.0, 1.0) : 0.0;
  }
  const Eigen::Vector3d width = Eigen::Vector3d::Ones() - lo;
  const Eigen::Vector3d cell = width / n;

  std::size_t hits = 0;
  for (int i = 0; i < n; ++i) {
    const double zi = vertical(0) * (lo(0) + (i + 0.5) * cell(0));
    for (int j = 0; j < n; ++j) {
      const double zij = zi + vertical(1) * (lo(1) + (j + 0.5) * cell(1));
      for (int k = 0; k < n; ++k) {
        if (zij + vertical(2) * (lo(2) + (k + 0.5) * cell(2)) >= mg) ++hits;
      }
    }
  }
  const double fraction = static_cast<double>(hits) / (static_cast<double>(n) * n * n) *
                          width.prod();
  return std::abs(gen.determinant()) * fraction;
}

double monte_carlo_extra_hover_volume(const ZeroMomentBasis& basis,
                                      const PlatformParams& params, std::size_t samples,
                                      std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be > 0");
  params.validate();
  const Eigen::Matrix3d gen = params.input_max * basis.force_map;
  const double mg = params.weight();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Vector3d eps(unit(rng), unit(rng), unit(rng));
    if ((gen * eps)(2) >= mg) ++hits;
  }
  return std::abs(gen.determinant()) * static_cast<double>(hits) / static_cast<double>(samples);
}

double relative_error(double closed_form, double oracle) {
  const double diff = std::abs(closed_form - oracle);
  if (oracle != 0.0) return diff / std::abs(oracle);
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

ComparisonResult compare(const std::string& metric, const MetricFn& closed_form,
                         const MetricFn& oracle, std::span<const double> alphas_deg,
                         double tol, int resolution) {
  if (alphas_deg.empty()) throw std::invalid_argument("comparison grid is empty");
  ComparisonResult result{{}, 0.0, true};
  for (const double deg : alphas_deg) {
    const TiltAngle alpha = TiltAngle::from_degrees(deg);
    OracleReport rep{metric, deg, 0.0, 0.0, 0.0, resolution, false};
    std::optional<double> c, o;
    try {
      c = closed_form(alpha);
      o = oracle(alpha);
    } catch (const InfeasibleHoverError&) {
      c.reset();
    }
    if (!c || !o) {
      rep.skipped = true;
    } else {
      rep.closed_form = *c;
      rep.oracle = *o;
      rep.rel_err = relative_error(*c, *o);
      result.worst_rel_err = std::max(result.worst_rel_err, rep.rel_err);
      if (!(rep.rel_err <= tol)) result.passed = false;
    }
    result.reports.push_back(std::move(rep));
  }
  return result;
}

}  // namespace sth::oracle
