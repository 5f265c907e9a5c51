#pragma once

#include <stdexcept>

#include "sth/actuation.hpp"

namespace sth {

/// Zero-moment input subspace and the force map restricted to it.
///
/// `basis` spans ker(M). For the star-shaped layout it is [I3; I3]: driving
/// rotors k and k+3 equally cancels their moments for every tilt angle.
/// `force_map` is F * basis; its columns generate the zero-moment force
/// polytope.
struct ZeroMomentBasis {
  Matrix63d basis;
  Eigen::Matrix3d force_map;
};

ZeroMomentBasis zero_moment_basis(const ActuationMatrices& mat);

/// Orthonormal basis of the row space of M (6x3), taken from the right
/// singular vectors. Orthogonal to ker(M), so [A B] is well conditioned.
struct MomentRowBasis {
  Matrix63d basis;
};

/// Throws std::domain_error if M is rank deficient at rel_tol.
MomentRowBasis moment_row_basis(const ActuationMatrices& mat,
                                double rel_tol = kDefaultRankTolerance);

/// u = A * moment_coords + B * zero_moment_coords.
struct InputSplit {
  Vector6d moment_part;
  Vector6d zero_moment_part;
  Eigen::Vector3d moment_coords;
  Eigen::Vector3d zero_moment_coords;
};

class SingularSplitError : public std::runtime_error {
 public:
  SingularSplitError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  [[nodiscard]] double condition_number() const { return condition_; }

 private:
  double condition_;
};

InputSplit split_input(const InputVector& u, const MomentRowBasis& a, const ZeroMomentBasis& b);

struct DecouplingResult {
  bool decoupled;
  /// ||F A||_2 / ||F||_2
  double residual;
};

/// True iff the moment-generating inputs produce no force:
/// ||F A||_2 < tol * ||F||_2.
DecouplingResult decoupling_check(const ActuationMatrices& mat, const MomentRowBasis& a,
                                  double tol = 1e-9);

}  // namespace sth
