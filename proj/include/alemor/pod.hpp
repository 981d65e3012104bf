#ifndef ALEMOR_POD_HPP
#define ALEMOR_POD_HPP

#include <Eigen/Core>

namespace alemor {

/// Truncated POD basis, orthonormal in the discrete L2 inner product
/// <u, v> = dx * u.v so that mode norms do not depend on the grid size.
struct PodBasis {
  Eigen::MatrixXd modes; // n_dof x N
  Eigen::VectorXd singular_values;
  double tolerance = 0.0;
  double dx = 1.0;

  int dim() const { return static_cast<int>(modes.cols()); }

  /// L2 projection coefficients of a state onto the basis.
  Eigen::VectorXd project(const Eigen::VectorXd& u) const {
    return dx * (modes.transpose() * u);
  }

  Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs) const { return modes * coeffs; }
};

/// POD with the relative-energy criterion: keep the smallest N such that
/// sqrt(sum_{i>N} s_i^2 / sum_i s_i^2) <= tolerance (at least one mode).
PodBasis pod(const Eigen::MatrixXd& snapshots, double tolerance, double dx);

/// POD-Greedy basis extension: POD of the projection residuals of the
/// trajectory appended (up to `max_new_modes`, skipping noise-level modes),
/// then a second POD re-orthonormalizes the union.
PodBasis pod_greedy_update(const PodBasis& rb, const Eigen::MatrixXd& trajectory_columns,
                           double tolerance, int max_new_modes);

} // namespace alemor

#endif
