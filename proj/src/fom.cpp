#include "alemor/fom.hpp"

#include <cmath>
#include <string>

#include "alemor/errors.hpp"

namespace alemor {

namespace {
constexpr double kSpeedFloor = 1e-12;
}

double cfl_timestep(const std::vector<std::pair<Eigen::VectorXd, FluxSpec>>& initial_states,
                    const Grid& grid, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0)
    throw Error(ErrorCode::Config, "cfl must lie in (0, 1], got " + std::to_string(cfl));
  if (initial_states.empty())
    throw Error(ErrorCode::Config, "cfl_timestep needs at least one initial state");

  double max_speed = 0.0;
  for (const auto& [state, flux] : initial_states)
    for (int i = 0; i < state.size(); ++i)
      max_speed = std::max(max_speed, std::abs(flux.speed(state(i))));

  if (max_speed <= kSpeedFloor)
    throw Error(ErrorCode::Numeric,
                "all wave speeds below floor; supply a nonzero-speed training state");
  return cfl * grid.dx / std::max(max_speed, kSpeedFloor);
}

Eigen::VectorXd evolve_step(const Eigen::VectorXd& state, const FluxSpec& flux,
                            const BoundaryCondition& bc, const Grid& grid, double dt) {
  const int n = static_cast<int>(state.size());
  Eigen::VectorXd next(n);
  const double lam = dt / grid.dx;

  // interface fluxes, left ghost first
  double f_prev = rusanov_flux(ghost_left(state, bc), state(0), flux);
  for (int i = 0; i < n; ++i) {
    const double u_right = (i + 1 < n) ? state(i + 1) : ghost_right(state, bc);
    const double f_next = rusanov_flux(state(i), u_right, flux);
    next(i) = state(i) - lam * (f_next - f_prev);
    f_prev = f_next;
  }

  if (!next.allFinite())
    throw Error(ErrorCode::SolverBlowup, "non-finite state after evolve_step");
  return next;
}

Trajectory solve_fom(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& mu,
                     const FluxSpec& flux, const BoundaryCondition& bc, const Grid& grid,
                     double dt, int n_steps) {
  if (n_steps < 0) throw Error(ErrorCode::Config, "n_steps must be >= 0");
  Trajectory traj;
  traj.params = mu;
  traj.times.resize(n_steps + 1);
  traj.states.resize(n_steps + 1, initial_state.size());
  traj.states.row(0) = initial_state.transpose();
  Eigen::VectorXd u = initial_state;
  traj.times[0] = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    try {
      u = evolve_step(u, flux, bc, grid, dt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SolverBlowup)
        throw Error(ErrorCode::SolverBlowup,
                    "solver blowup at step " + std::to_string(k) + ": " + e.what());
      throw;
    }
    traj.states.row(k) = u.transpose();
    traj.times[k] = k * dt;
  }
  return traj;
}

} // namespace alemor
