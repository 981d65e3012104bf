#include "alemor/evolution.hpp"

#include <cmath>
#include <unordered_map>

#include "alemor/errors.hpp"
#include "alemor/fom.hpp"

namespace alemor {

EvolutionOperator::EvolutionOperator(FluxSpec flux, BoundaryCondition bc, Grid grid)
    : mode_(RomMode::Eulerian), flux_(flux), bc_(bc), grid_(std::move(grid)) {
  flux_.validate();
}

EvolutionOperator::EvolutionOperator(FluxSpec flux, BoundaryCondition bc, TransformMap map,
                                     const CalibrationModel* calibration, GeometricScheme scheme)
    : mode_(RomMode::Ale),
      flux_(flux),
      bc_(bc),
      grid_(map.reference()),
      map_(std::move(map)),
      calibration_(calibration),
      scheme_(scheme) {
  flux_.validate();
  if (!calibration_)
    throw Error(ErrorCode::Config, "moving-frame operator requires a calibration model");
}

EvolutionOperator::StepContext EvolutionOperator::context(double t,
                                                          const Eigen::VectorXd& mu) const {
  if (mode_ == RomMode::Eulerian) return {};
  StepContext ctx;
  ctx.theta = map_->clamp_theta(calibration_->theta(t, mu));
  ctx.theta_dot = calibration_->theta_dot(t, mu);
  return ctx;
}

Eigen::VectorXd EvolutionOperator::apply_at(const std::vector<int>& cells,
                                            const std::function<double(int)>& value,
                                            const StepContext& ctx, long* flux_evals) const {
  const int n = grid_.n_cells;
  const bool periodic = bc_.kind == BcKind::Periodic;

  // State, flux value and wave speed at each distinct stencil point; one flux
  // evaluation per point regardless of how many cells share it.
  struct Point {
    double u, f, s;
  };
  std::unordered_map<int, Point> points;
  points.reserve(cells.size() * 3);
  // Returned by value: rehashing on insert would invalidate references.
  auto point = [&](int j) -> Point {
    if (periodic) j = (j % n + n) % n;
    auto it = points.find(j);
    if (it != points.end()) return it->second;
    double u;
    if (j < 0)
      u = bc_.kind == BcKind::InflowOutflow ? bc_.left_value : 0.0;
    else if (j >= n)
      u = bc_.kind == BcKind::InflowOutflow ? value(n - 1) : 0.0;
    else
      u = value(j);
    if (flux_evals) ++*flux_evals;
    return points.emplace(j, Point{u, flux_.value(u), flux_.speed(u)}).first->second;
  };

  auto interface_flux = [&](const Point& l, const Point& r) {
    const double s = std::max(std::abs(l.s), std::abs(r.s));
    return 0.5 * (l.f + r.f) - 0.5 * s * (r.u - l.u);
  };

  Eigen::VectorXd out(static_cast<long>(cells.size()));
  for (size_t c = 0; c < cells.size(); ++c) {
    const int i = cells[c];
    const Point pm = point(i - 1);
    const Point p0 = point(i);
    const Point pp = point(i + 1);
    double op = (interface_flux(p0, pp) - interface_flux(pm, p0)) / grid_.dx;
    if (mode_ == RomMode::Ale) {
      const double y = grid_.centers[i];
      const double w = map_->theta_sensitivity(ctx.theta, y) * ctx.theta_dot;
      double dv;
      switch (scheme_) {
        case GeometricScheme::Upwind:
          // Transport term +w dv/dy: information travels from the right when
          // w > 0, so difference toward the upwind side.
          dv = w > 0.0 ? pp.u - p0.u : p0.u - pm.u;
          break;
        case GeometricScheme::Central:
          dv = 0.5 * (pp.u - pm.u);
          break;
      }
      op = map_->inv_jacobian(ctx.theta, y) * (op - w * dv / grid_.dx);
    }
    out(static_cast<long>(c)) = op;
  }
  return out;
}

Eigen::VectorXd EvolutionOperator::apply(const Eigen::VectorXd& state,
                                         const StepContext& ctx) const {
  std::vector<int> all(grid_.n_cells);
  for (int i = 0; i < grid_.n_cells; ++i) all[i] = i;
  return apply_at(all, [&](int j) { return state(j); }, ctx);
}

Trajectory EvolutionOperator::solve(const Eigen::VectorXd& initial_state,
                                    const Eigen::VectorXd& mu, double dt, int n_steps) const {
  if (initial_state.size() != grid_.n_cells)
    throw Error(ErrorCode::Config, "evolution solve: state size does not match the grid");
  Trajectory traj;
  traj.params = mu;
  traj.times.resize(n_steps + 1);
  traj.states.resize(n_steps + 1, grid_.n_cells);
  traj.states.row(0) = initial_state.transpose();
  traj.times[0] = 0.0;
  Eigen::VectorXd u = initial_state;
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * dt;
    u -= dt * apply(u, context(t, mu));
    if (!u.allFinite())
      throw Error(ErrorCode::SolverBlowup,
                  "solver blowup (non-finite state) at step " + std::to_string(k + 1));
    traj.states.row(k + 1) = u.transpose();
    traj.times[k + 1] = (k + 1) * dt;
  }
  return traj;
}

Trajectory solve_ale_fom(const Eigen::VectorXd& initial_state_omega, const Eigen::VectorXd& mu,
                         const FluxSpec& flux, const BoundaryCondition& bc,
                         const TransformMap& map, const CalibrationModel& calibration, double dt,
                         int n_steps, GeometricScheme scheme) {
  EvolutionOperator op(flux, bc, map, &calibration, scheme);
  const bool periodic = bc.kind == BcKind::Periodic;
  const double theta0 = map.clamp_theta(calibration.theta(0.0, mu));
  const Eigen::VectorXd v0 = pull_back(map, theta0, initial_state_omega, periodic);
  return op.solve(v0, mu, dt, n_steps);
}

} // namespace alemor
