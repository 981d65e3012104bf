#include "alemor/eim.hpp"

#include <cmath>

#include "alemor/errors.hpp"

namespace alemor {

Eigen::VectorXd EimSpace::coefficients(const Eigen::VectorXd& magic_values, int m) const {
  if (m > size() || magic_values.size() < m)
    throw Error(ErrorCode::Numeric, "eim: coefficient solve beyond space size");
  Eigen::VectorXd sigma(m);
  for (int i = 0; i < m; ++i) {
    double s = magic_values(i);
    for (int j = 0; j < i; ++j) s -= interp(i, j) * sigma(j);
    if (interp(i, i) == 0.0)
      throw Error(ErrorCode::Numeric, "eim: corrupt space (zero triangular diagonal)");
    sigma(i) = s / interp(i, i);
  }
  return sigma;
}

Eigen::VectorXd EimSpace::magic_values(const Eigen::VectorXd& v, int m) const {
  Eigen::VectorXd vals(m);
  for (int i = 0; i < m; ++i) vals(i) = v(magic_dofs[i]);
  return vals;
}

Eigen::VectorXd EimSpace::interpolate(const Eigen::VectorXd& v, int m) const {
  if (m == 0) return Eigen::VectorXd::Zero(v.size());
  return basis.leftCols(m) * coefficients(magic_values(v, m), m);
}

double EimSpace::interpolation_error(const Eigen::VectorXd& v, int m, double dx) const {
  return std::sqrt(dx) * (v - interpolate(v, m)).norm();
}

bool eim_update(EimSpace& space, const Eigen::VectorXd& target) {
  const Eigen::VectorXd r = target - space.interpolate(target, space.size());
  int argmax = 0;
  r.cwiseAbs().maxCoeff(&argmax);
  const double peak = std::abs(r(argmax));
  if (peak < 1e-14 * std::max(1.0, target.cwiseAbs().maxCoeff())) return false;

  const int m = space.size();
  space.basis.conservativeResize(target.size(), m + 1);
  space.basis.col(m) = r / r(argmax);
  space.magic_dofs.push_back(argmax);

  Eigen::MatrixXd interp = Eigen::MatrixXd::Zero(m + 1, m + 1);
  interp.topLeftCorner(m, m) = space.interp;
  for (int j = 0; j <= m; ++j) interp(m, j) = space.basis(argmax, j);
  // The new basis vanishes at all previous magic DoFs (it is an
  // interpolation residual), keeping the matrix unit lower triangular.
  space.interp = interp;
  return true;
}

} // namespace alemor
