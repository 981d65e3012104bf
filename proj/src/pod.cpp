#include "alemor/pod.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "alemor/errors.hpp"

namespace alemor {

namespace {

constexpr double kNoiseFloor = 1e-9; // relative singular-value cutoff for residual modes

// Smallest N with sqrt(tail energy / total energy) <= tol, at least 1.
int truncation_rank(const Eigen::VectorXd& sv, double tol) {
  const double total = sv.squaredNorm();
  if (total <= 0.0) return 1;
  double tail = total;
  for (int n = 0; n < sv.size(); ++n) {
    tail -= sv(n) * sv(n);
    if (std::sqrt(std::max(tail, 0.0) / total) <= tol) return n + 1;
  }
  return static_cast<int>(sv.size());
}

} // namespace

PodBasis pod(const Eigen::MatrixXd& snapshots, double tolerance, double dx) {
  if (snapshots.cols() == 0 || snapshots.rows() == 0)
    throw Error(ErrorCode::Numeric, "pod: empty snapshot matrix");
  if (!(tolerance >= 0.0) || !(dx > 0.0))
    throw Error(ErrorCode::Config, "pod: tolerance must be >= 0 and dx > 0");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(snapshots, Eigen::ComputeThinU);
  const int n = truncation_rank(svd.singularValues(), tolerance);

  PodBasis basis;
  basis.tolerance = tolerance;
  basis.dx = dx;
  // Euclidean-orthonormal SVD vectors rescaled to unit discrete-L2 norm.
  basis.modes = svd.matrixU().leftCols(n) / std::sqrt(dx);
  basis.singular_values = svd.singularValues().head(n);
  return basis;
}

PodBasis pod_greedy_update(const PodBasis& rb, const Eigen::MatrixXd& trajectory_columns,
                           double tolerance, int max_new_modes) {
  if (rb.dim() == 0) {
    PodBasis seeded = pod(trajectory_columns, tolerance, rb.dx > 0.0 ? rb.dx : 1.0);
    if (seeded.dim() > max_new_modes) {
      seeded.modes = seeded.modes.leftCols(max_new_modes).eval();
      seeded.singular_values = seeded.singular_values.head(max_new_modes).eval();
    }
    return seeded;
  }

  // Residuals of the L2 projection onto the current basis.
  Eigen::MatrixXd residuals =
      trajectory_columns -
      rb.modes * (rb.dx * (rb.modes.transpose() * trajectory_columns));

  const double scale = trajectory_columns.norm();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(residuals, Eigen::ComputeThinU);
  int n_new = 0;
  while (n_new < max_new_modes && n_new < svd.singularValues().size() &&
         svd.singularValues()(n_new) > kNoiseFloor * scale)
    ++n_new;
  if (n_new == 0) return rb;

  Eigen::MatrixXd merged(rb.modes.rows(), rb.dim() + n_new);
  merged.leftCols(rb.dim()) = rb.modes;
  merged.rightCols(n_new) = svd.matrixU().leftCols(n_new) / std::sqrt(rb.dx);

  // Second POD to re-orthonormalize and drop redundancy.
  PodBasis updated = pod(merged, 1e-12, rb.dx);
  updated.tolerance = tolerance;
  // The merged columns have unit L2 norm, so the second POD cannot shrink
  // the basis below the previous dimension unless columns coincide.
  return updated;
}

} // namespace alemor
