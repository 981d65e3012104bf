#ifndef ALEMOR_FLUX_HPP
#define ALEMOR_FLUX_HPP

#include <algorithm>
#include <cmath>

#include "alemor/errors.hpp"

namespace alemor {

enum class FluxKind { LinearAdvection, Burgers, BuckleyLeverett };

/// Scalar flux family F(u); `a` is the flux coefficient (mu[0] in all presets).
struct FluxSpec {
  FluxKind kind = FluxKind::LinearAdvection;
  double a = 1.0;

  double value(double u) const {
    switch (kind) {
      case FluxKind::LinearAdvection:
        return a * u;
      case FluxKind::Burgers:
        return 0.5 * a * u * u;
      case FluxKind::BuckleyLeverett: {
        const double d = u * u + a * (1.0 - u) * (1.0 - u);
        return u * u / d;
      }
    }
    return 0.0;
  }

  /// F'(u), analytic for all three families.
  double speed(double u) const {
    switch (kind) {
      case FluxKind::LinearAdvection:
        return a;
      case FluxKind::Burgers:
        return a * u;
      case FluxKind::BuckleyLeverett: {
        const double d = u * u + a * (1.0 - u) * (1.0 - u);
        return 2.0 * a * u * (1.0 - u) / (d * d);
      }
    }
    return 0.0;
  }

  void validate() const {
    if (kind == FluxKind::BuckleyLeverett && !(a > 0.0))
      throw Error(ErrorCode::Config,
                  "BuckleyLeverett flux requires a > 0, got a=" + std::to_string(a));
  }
};

enum class BcKind { Periodic, InflowOutflow, DirichletZero };

struct BoundaryCondition {
  BcKind kind = BcKind::Periodic;
  double left_value = 0.0; // inflow value, used by InflowOutflow only
};

/// Rusanov (local Lax-Friedrichs) interface flux.
inline double rusanov_flux(double u_left, double u_right, const FluxSpec& flux) {
  const double s = std::max(std::abs(flux.speed(u_left)), std::abs(flux.speed(u_right)));
  return 0.5 * (flux.value(u_left) + flux.value(u_right)) - 0.5 * s * (u_right - u_left);
}

} // namespace alemor

#endif
