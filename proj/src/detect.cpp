#include "alemor/detect.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "alemor/errors.hpp"

namespace alemor {

namespace {

[[noreturn]] void degenerate(const char* what, long k) {
  throw Error(ErrorCode::Numeric, std::string("feature detection failed: ") + what +
                                      " in snapshot at time index " + std::to_string(k));
}

// Sub-cell peak refinement: fit a parabola through (u_{i-1}, u_i, u_{i+1})
// and return the vertex offset in cells, clamped to half a cell.
double parabolic_offset(double um, double u0, double up) {
  const double den = um - 2.0 * u0 + up;
  if (std::abs(den) < 1e-14 * (std::abs(um) + std::abs(u0) + std::abs(up) + 1e-300)) return 0.0;
  double d = 0.5 * (um - up) / den;
  return std::min(std::max(d, -0.5), 0.5);
}

double extremum_theta(const Eigen::VectorXd& u, const Grid& grid, bool periodic, bool maximum,
                      long k) {
  const long n = u.size();
  long best = 0;
  for (long i = 1; i < n; ++i) {
    if (maximum ? u(i) > u(best) : u(i) < u(best)) best = i;
  }
  const double spread = u.maxCoeff() - u.minCoeff();
  if (spread < 1e-13 * (std::abs(u(best)) + 1e-300))
    degenerate(maximum ? "no distinct maximum" : "no distinct minimum", k);
  double um, up;
  if (periodic) {
    um = u((best - 1 + n) % n);
    up = u((best + 1) % n);
  } else if (best == 0 || best == n - 1) {
    return grid.centers[best];
  } else {
    um = u(best - 1);
    up = u(best + 1);
  }
  return grid.centers[best] + parabolic_offset(um, u(best), up) * grid.dx;
}

// Interfaces i = 0..m-1 between cell i and cell i+1 (with the wrap-around
// interface last when periodic); returns the jump u_{i+1} - u_i.
double interface_jump(const Eigen::VectorXd& u, long i, long n) {
  return u((i + 1) % n) - u(i);
}

double interface_pos(const Grid& grid, long i) {
  return grid.centers[i] + 0.5 * grid.dx;
}

double steepest_theta(const Eigen::VectorXd& u, const Grid& grid, bool periodic, bool descent_only,
                      bool has_prev, double prev, long k) {
  const long n = u.size();
  const long m = periodic ? n : n - 1;
  double best_val = -1.0;
  for (long i = 0; i < m; ++i) {
    const double jump = interface_jump(u, i, n);
    const double val = descent_only ? -jump : std::abs(jump);
    if (val > best_val) best_val = val;
  }
  if (best_val <= 1e-13 * (u.cwiseAbs().maxCoeff() + 1e-300))
    degenerate(descent_only ? "no descending jump" : "no jump", k);
  // Among near-maximal interfaces pick the one closest to the previous point.
  const double tol = best_val * (1.0 - 1e-12);
  double best_pos = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (long i = 0; i < m; ++i) {
    const double jump = interface_jump(u, i, n);
    const double val = descent_only ? -jump : std::abs(jump);
    if (val < tol) continue;
    const double pos = interface_pos(grid, i);
    double dist = has_prev ? std::abs(pos - prev) : 0.0;
    if (has_prev && periodic) dist = std::min(dist, grid.length() - dist);
    if (dist < best_dist) {
      best_dist = dist;
      best_pos = pos;
      if (!has_prev) break; // first, lowest-index maximum
    }
  }
  return best_pos;
}

double zero_crossing_theta(const Eigen::VectorXd& u, const Grid& grid, bool periodic,
                           bool has_prev, double prev, long k) {
  const long n = u.size();
  const long m = periodic ? n : n - 1;
  const double target = has_prev ? prev : 0.5 * (grid.x_left + grid.x_right);
  double best_pos = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (long i = 0; i < m; ++i) {
    const double ul = u(i), ur = u((i + 1) % n);
    if (ul == ur || ul * ur > 0.0) continue;
    const double frac = ul / (ul - ur); // linear sub-cell root
    double pos = grid.centers[i] + frac * grid.dx;
    if (periodic) pos = grid.x_left + std::fmod(pos - grid.x_left, grid.length());
    double dist = std::abs(pos - target);
    if (periodic) dist = std::min(dist, grid.length() - dist);
    if (dist < best_dist) {
      best_dist = dist;
      best_pos = pos;
      found = true;
    }
  }
  if (!found) degenerate("no zero crossing", k);
  return best_pos;
}

} // namespace

std::vector<double> detect_theta(DetectorKind detector, const Trajectory& trajectory,
                                 const Grid& grid, bool periodic) {
  const long K = trajectory.states.rows();
  if (K == 0) throw Error(ErrorCode::Numeric, "feature detection on empty trajectory");
  std::vector<double> theta(K);
  for (long k = 0; k < K; ++k) {
    const Eigen::VectorXd u = trajectory.state(k);
    const bool has_prev = k > 0;
    const double prev = has_prev ? theta[k - 1] : 0.0;
    switch (detector) {
      case DetectorKind::ArgMax:
        theta[k] = extremum_theta(u, grid, periodic, true, k);
        break;
      case DetectorKind::ArgMin:
        theta[k] = extremum_theta(u, grid, periodic, false, k);
        break;
      case DetectorKind::SteepestPoint:
        theta[k] = steepest_theta(u, grid, periodic, false, has_prev, prev, k);
        break;
      case DetectorKind::SteepestDescent:
        theta[k] = steepest_theta(u, grid, periodic, true, has_prev, prev, k);
        break;
      case DetectorKind::ZeroCrossing:
        theta[k] = zero_crossing_theta(u, grid, periodic, has_prev, prev, k);
        break;
    }
    if (periodic && k > 0) {
      const double L = grid.length();
      theta[k] += L * std::round((theta[k - 1] - theta[k]) / L);
    }
  }
  return theta;
}

} // namespace alemor
