#include "alemor/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "alemor/errors.hpp"

namespace alemor {

namespace {

constexpr double kDilatationMargin = 0.02;

// Wrap x into [left, left + length).
double wrap_into(double x, double left, double length) {
  double t = std::fmod(x - left, length);
  if (t < 0.0) t += length;
  return left + t;
}

} // namespace

TransformMap::TransformMap(TransformKind kind, const Grid& domain, const Grid& reference)
    : kind_(kind), domain_(domain), reference_(reference) {
  if (domain.length() <= 0.0 || reference.length() <= 0.0)
    throw Error(ErrorCode::Config, "transform domains must have positive length");
}

void TransformMap::check_theta(double theta_hat) const {
  if (kind_ != TransformKind::Dilatation) return;
  if (theta_hat < kDilatationMargin || theta_hat > 1.0 - kDilatationMargin)
    throw Error(ErrorCode::Numeric,
                "dilatation calibration point " + std::to_string(theta_hat) +
                    " (normalized) outside admissible [0.02, 0.98]");
}

double TransformMap::theta_min() const {
  if (kind_ == TransformKind::Translation) return -std::numeric_limits<double>::infinity();
  return domain_.x_left + kDilatationMargin * domain_.length();
}

double TransformMap::theta_max() const {
  if (kind_ == TransformKind::Translation) return std::numeric_limits<double>::infinity();
  return domain_.x_left + (1.0 - kDilatationMargin) * domain_.length();
}

double TransformMap::clamp_theta(double theta) const {
  if (kind_ == TransformKind::Translation) return theta;
  return std::min(std::max(theta, theta_min()), theta_max());
}

double TransformMap::forward(double theta, double y) const {
  if (kind_ == TransformKind::Translation)
    return wrap_into(y + theta, domain_.x_left, domain_.length());
  const double th = (theta - domain_.x_left) / domain_.length();
  check_theta(th);
  const double yh = (y - reference_.x_left) / reference_.length();
  const double den = (2.0 * th - 1.0) * yh + 1.0 - th;
  return domain_.x_left + domain_.length() * (yh * th / den);
}

double TransformMap::inverse(double theta, double x) const {
  if (kind_ == TransformKind::Translation)
    return wrap_into(x - theta, reference_.x_left, reference_.length());
  const double th = (theta - domain_.x_left) / domain_.length();
  check_theta(th);
  const double xh = (x - domain_.x_left) / domain_.length();
  const double den = (2.0 * th - 1.0) * xh - th;
  return reference_.x_left + reference_.length() * (xh * (th - 1.0) / den);
}

double TransformMap::inv_jacobian(double theta, double y) const {
  if (kind_ == TransformKind::Translation) return 1.0;
  const double th = (theta - domain_.x_left) / domain_.length();
  check_theta(th);
  const double yh = (y - reference_.x_left) / reference_.length();
  const double den = (2.0 * th - 1.0) * yh + 1.0 - th;
  // Reciprocal of dT/dy = (Lx/Ly) * th*(1-th)/den^2.
  return (reference_.length() / domain_.length()) * den * den / (th * (1.0 - th));
}

double TransformMap::theta_sensitivity(double theta, double y) const {
  if (kind_ == TransformKind::Translation) return 1.0;
  const double th = (theta - domain_.x_left) / domain_.length();
  check_theta(th);
  const double yh = (y - reference_.x_left) / reference_.length();
  const double den = (2.0 * th - 1.0) * yh + 1.0 - th;
  // dT/dtheta with both measured in physical units (the Lx factors cancel).
  return yh * (1.0 - yh) / (den * den);
}

double sample_linear(const Eigen::VectorXd& values, const Grid& grid, double x, bool periodic) {
  const long n = values.size();
  if (n != grid.n_cells) throw Error(ErrorCode::Numeric, "sample_linear: size mismatch");
  if (n == 1) return values(0);
  if (periodic) {
    const double L = grid.length();
    double t = (wrap_into(x, grid.x_left, L) - grid.centers[0]) / grid.dx;
    if (t < 0.0) t += static_cast<double>(n);
    const long i = static_cast<long>(std::floor(t)) % n;
    const double frac = t - std::floor(t);
    const long ip = (i + 1) % n;
    return (1.0 - frac) * values(i) + frac * values(ip);
  }
  if (x <= grid.centers[0]) return values(0);
  if (x >= grid.centers[n - 1]) return values(n - 1);
  const double t = (x - grid.centers[0]) / grid.dx;
  const long i = std::min(static_cast<long>(std::floor(t)), n - 2);
  const double frac = t - static_cast<double>(i);
  return (1.0 - frac) * values(i) + frac * values(i + 1);
}

Eigen::VectorXd pull_back(const TransformMap& map, double theta,
                          const Eigen::VectorXd& state_on_omega, bool periodic) {
  const Grid& ref = map.reference();
  Eigen::VectorXd v(ref.n_cells);
  for (long i = 0; i < ref.n_cells; ++i)
    v(i) = sample_linear(state_on_omega, map.domain(), map.forward(theta, ref.centers[i]),
                         periodic);
  return v;
}

Eigen::VectorXd push_forward(const TransformMap& map, double theta,
                             const Eigen::VectorXd& state_on_ref, bool periodic) {
  const Grid& dom = map.domain();
  Eigen::VectorXd u(dom.n_cells);
  for (long i = 0; i < dom.n_cells; ++i)
    u(i) = sample_linear(state_on_ref, map.reference(), map.inverse(theta, dom.centers[i]),
                         periodic);
  return u;
}

} // namespace alemor
