#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sth/decomposition.hpp"
#include "sth/params.hpp"

// Brute-force counterparts of the closed-form metrics. No closed-form metric
// is used here: every quantity is measured from samples of the admissible
// zero-moment inputs pushed through the force map.
namespace sth::oracle {

/// Default cap on resolution^3 for the dense polytope sampler.
inline constexpr std::size_t kDefaultMaxSamples = 50'000'000;

/// Grid samples u_max * H * eps with eps on {0, 1/(n-1), ..., 1}^3.
struct SampledPolytope {
  std::vector<Eigen::Vector3d> points;
  int resolution;
};

/// Throws std::invalid_argument for n < 2 and std::length_error when n^3
/// exceeds max_points.
SampledPolytope sample_zero_moment_forces(const ZeroMomentBasis& basis, double u_max, int n,
                                          std::size_t max_points = kDefaultMaxSamples);

/// Volume of the convex hull of the samples; 0 if they are coplanar.
double oracle_volume(const SampledPolytope& poly);

struct SliceEstimate {
  double area;          // [N^2]
  double inner_radius;  // nearest hull edge to the origin [N]
  double outer_radius;  // farthest hull vertex [N]
  std::vector<Eigen::Vector2d> hull;  // counterclockwise extreme points
  double spacing;       // largest distance between neighbouring samples [N]
  std::size_t samples;
};

/// Samples {sum u_k = const, 0 <= u_k <= u_max} on a simplex lattice with n
/// steps per edge, where the sum is fixed by requiring f_z = mg, and measures
/// the 2D hull of the in-plane forces. The lattice covers the smaller of the
/// simplices {u_k >= max(0, sum - 2 u_max)} and {u_k <= min(u_max, sum)},
/// both of which contain every admissible input.
/// Throws InfeasibleHoverError when no admissible input lifts the weight.
SliceEstimate oracle_slice(const ZeroMomentBasis& basis, const PlatformParams& params, int n);

/// |det(u_max H)| times the fraction of [0,1]^3 whose force has f_z >= mg,
/// counted on an n^3 cell-midpoint grid. The grid covers only the sub-box
/// of [0,1]^3 that can reach mg, scaled by its volume. Deterministic; 0 when
/// nothing clears the hovering plane.
double oracle_extra_hover_volume(const ZeroMomentBasis& basis, const PlatformParams& params,
                                 int n);

/// Monte Carlo version of the same count with an explicit seed. Cross-check
/// only.
double monte_carlo_extra_hover_volume(const ZeroMomentBasis& basis,
                                      const PlatformParams& params, std::size_t samples,
                                      std::uint64_t seed);

struct OracleReport {
  std::string metric;
  double alpha_deg;
  double closed_form;
  double oracle;
  double rel_err;
  int resolution;
  bool skipped;  // case D or otherwise undefined at this angle
};

struct ComparisonResult {
  std::vector<OracleReport> reports;
  double worst_rel_err;
  bool passed;
};

/// Returns nullopt where the metric is undefined (e.g. case D).
using MetricFn = std::function<std::optional<double>(TiltAngle)>;

/// Relative error is measured against the oracle value. Fails if any
/// non-skipped entry exceeds tol. Throws std::invalid_argument on an empty
/// grid.
ComparisonResult compare(const std::string& metric, const MetricFn& closed_form,
                         const MetricFn& oracle, std::span<const double> alphas_deg,
                         double tol, int resolution);

double relative_error(double closed_form, double oracle);

}  // namespace sth::oracle
