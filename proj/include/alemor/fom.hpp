#ifndef ALEMOR_FOM_HPP
#define ALEMOR_FOM_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "alemor/flux.hpp"
#include "alemor/grid.hpp"
#include "alemor/trajectory.hpp"

namespace alemor {

/// Ghost-cell values implementing the boundary operator.
inline double ghost_left(const Eigen::VectorXd& u, const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BcKind::Periodic: return u(u.size() - 1);
    case BcKind::InflowOutflow: return bc.left_value;
    case BcKind::DirichletZero: return 0.0;
  }
  return 0.0;
}

inline double ghost_right(const Eigen::VectorXd& u, const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BcKind::Periodic: return u(0);
    case BcKind::InflowOutflow: return u(u.size() - 1); // outflow copies last cell
    case BcKind::DirichletZero: return 0.0;
  }
  return 0.0;
}

/// Shared time step: dt = cfl * min over supplied initial states and cells of
/// dx / |F'(u0)|, with a 1e-12 wave-speed floor in the denominator.
/// Throws if no state exceeds the floor anywhere.
double cfl_timestep(const std::vector<std::pair<Eigen::VectorXd, FluxSpec>>& initial_states,
                    const Grid& grid, double cfl);

/// One forward-Euler step with Rusanov interface fluxes.
Eigen::VectorXd evolve_step(const Eigen::VectorXd& state, const FluxSpec& flux,
                            const BoundaryCondition& bc, const Grid& grid, double dt);

/// Full-order Eulerian solve for a given initial state.
Trajectory solve_fom(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& mu,
                     const FluxSpec& flux, const BoundaryCondition& bc, const Grid& grid,
                     double dt, int n_steps);

} // namespace alemor

#endif
