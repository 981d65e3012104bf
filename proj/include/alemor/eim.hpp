#ifndef ALEMOR_EIM_HPP
#define ALEMOR_EIM_HPP

#include <vector>

#include <Eigen/Core>

namespace alemor {

/// Hierarchical empirical-interpolation space: basis vectors rho_m, magic
/// cell indices, and the unit-lower-triangular collocation matrix
/// B(i,j) = rho_j[magic_i]. The last `n_extra` members of the sequence are
/// the auxiliary bases reserved for the error indicator; the interpolation
/// space proper is the leading `main_dim()` members.
struct EimSpace {
  Eigen::MatrixXd basis; // n_dof x size
  std::vector<int> magic_dofs;
  Eigen::MatrixXd interp; // size x size, unit lower triangular
  int n_extra = 0;

  int size() const { return static_cast<int>(basis.cols()); }
  int main_dim() const { return size() - n_extra; }

  /// Forward-substitution solve of the triangular collocation system given
  /// the target's values at the first m magic DoFs.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& magic_values, int m) const;

  /// Values of a full vector at the first m magic DoFs.
  Eigen::VectorXd magic_values(const Eigen::VectorXd& v, int m) const;

  /// Interpolant of v in the leading m-dimensional space.
  Eigen::VectorXd interpolate(const Eigen::VectorXd& v, int m) const;

  /// Discrete-L2 interpolation error of v against the leading m bases.
  double interpolation_error(const Eigen::VectorXd& v, int m, double dx) const;
};

/// Appends one basis: magic DoF at the argmax of the interpolation residual
/// of `target` against the full current sequence, basis normalized to 1
/// there. Returns false (space unchanged) when the residual is below the
/// dependence threshold 1e-14 relative to the target.
bool eim_update(EimSpace& space, const Eigen::VectorXd& target);

} // namespace alemor

#endif
