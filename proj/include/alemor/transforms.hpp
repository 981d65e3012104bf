#ifndef ALEMOR_TRANSFORMS_HPP
#define ALEMOR_TRANSFORMS_HPP

#include <Eigen/Core>

#include "alemor/grid.hpp"

namespace alemor {

enum class TransformKind { Translation, Dilatation };

/// Analytic calibration map family T(theta,.): reference domain R -> Omega,
/// with inverse, space Jacobian and theta-derivative.
///
/// Translation wraps both coordinates and theta modulo the (periodic) domain
/// length. Dilatation is the hyperbolic map on [0,1] with T(theta,0)=0,
/// T(theta,1)=1, T(theta,0.5)=theta; theta is admissible in [0.02, 0.98]
/// (scaled to the domain) and rejected outside.
class TransformMap {
public:
  TransformMap(TransformKind kind, const Grid& domain, const Grid& reference);

  TransformKind kind() const { return kind_; }

  double forward(double theta, double y) const;
  double inverse(double theta, double x) const;

  /// d T^{-1}/dx evaluated at x = T(theta, y).
  double inv_jacobian(double theta, double y) const;

  /// dT/dtheta at (theta, y).
  double theta_sensitivity(double theta, double y) const;

  /// Admissible calibration interval in physical coordinates.
  double theta_min() const;
  double theta_max() const;

  /// Nearest admissible theta (Translation is unrestricted).
  double clamp_theta(double theta) const;

  const Grid& domain() const { return domain_; }
  const Grid& reference() const { return reference_; }

private:
  void check_theta(double theta_hat) const;

  TransformKind kind_;
  Grid domain_;
  Grid reference_;
};

/// Linear interpolation of cell-center values at position x; periodic wrap
/// or clamped beyond the first/last center.
double sample_linear(const Eigen::VectorXd& values, const Grid& grid, double x, bool periodic);

/// Reference-grid samples of an Omega state: v(y) = u(T(theta, y)).
Eigen::VectorXd pull_back(const TransformMap& map, double theta,
                          const Eigen::VectorXd& state_on_omega, bool periodic);

/// Omega-grid samples of a reference state: u(x) = v(T^{-1}(theta, x)).
Eigen::VectorXd push_forward(const TransformMap& map, double theta,
                             const Eigen::VectorXd& state_on_ref, bool periodic);

} // namespace alemor

#endif
