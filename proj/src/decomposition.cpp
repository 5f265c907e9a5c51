#include "sth/decomposition.hpp"

#include <string>

#include <Eigen/SVD>

namespace sth {

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

ZeroMomentBasis zero_moment_basis(const ActuationMatrices& mat) {
  ZeroMomentBasis zm;
  zm.basis.topRows<3>().setIdentity();
  zm.basis.bottomRows<3>().setIdentity();
  zm.force_map = mat.force * zm.basis;
  return zm;
}

MomentRowBasis moment_row_basis(const ActuationMatrices& mat, double rel_tol) {
  const Eigen::JacobiSVD<Matrix36d> svd(mat.moment, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(2) <= rel_tol * sv(0)) {
    throw std::domain_error("moment matrix is rank deficient; row space is not 3-dimensional");
  }
  return {svd.matrixV().leftCols<3>()};
}

InputSplit split_input(const InputVector& u, const MomentRowBasis& a, const ZeroMomentBasis& b) {
  Matrix6d ab;
  ab.leftCols<3>() = a.basis;
  ab.rightCols<3>() = b.basis;

  const Eigen::JacobiSVD<Matrix6d> svd(ab);
  const auto& sv = svd.singularValues();
  const double cond = sv(5) > 0.0 ? sv(0) / sv(5) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) {
    throw SingularSplitError("[A B] is singular (condition number " + std::to_string(cond) + ")",
                             cond);
  }

  const Vector6d coords = ab.partialPivLu().solve(u.values());
  InputSplit split;
  split.moment_coords = coords.head<3>();
  split.zero_moment_coords = coords.tail<3>();
  split.moment_part = a.basis * split.moment_coords;
  split.zero_moment_part = b.basis * split.zero_moment_coords;
  return split;
}

DecouplingResult decoupling_check(const ActuationMatrices& mat, const MomentRowBasis& a,
                                  double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("decoupling tolerance must be > 0");
  const double f_norm = spectral_norm(mat.force);
  const double fa_norm = spectral_norm(mat.force * a.basis);
  const double residual = f_norm > 0.0 ? fa_norm / f_norm : fa_norm;
  return {residual < tol, residual};
}

}  // namespace sth
