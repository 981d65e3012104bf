#ifndef ALEMOR_EVOLUTION_HPP
#define ALEMOR_EVOLUTION_HPP

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "alemor/calibration.hpp"
#include "alemor/flux.hpp"
#include "alemor/grid.hpp"
#include "alemor/trajectory.hpp"
#include "alemor/transforms.hpp"

namespace alemor {

enum class RomMode { Eulerian, Ale };

/// Discretization of the geometric (grid-speed) transport term in the moving
/// frame: upwinded by the sign of the grid speed (default) or central.
enum class GeometricScheme { Upwind, Central };

/// The discrete per-cell evolution operator op such that the explicit update
/// reads u^{k+1}_i = u^k_i - dt * op_i. One code path serves the Eulerian
/// full-order solver, the moving-frame full-order solver, and the online
/// magic-cell evaluations, so the reduced model replays the exact operator.
class EvolutionOperator {
public:
  /// Eulerian operator: Rusanov flux differences on the physical grid.
  EvolutionOperator(FluxSpec flux, BoundaryCondition bc, Grid grid);

  /// Moving-frame operator on the reference grid of `map`, with the grid
  /// speed supplied by the calibration model (not owned; must outlive this).
  EvolutionOperator(FluxSpec flux, BoundaryCondition bc, TransformMap map,
                    const CalibrationModel* calibration,
                    GeometricScheme scheme = GeometricScheme::Upwind);

  RomMode mode() const { return mode_; }
  const Grid& grid() const { return grid_; }
  const FluxSpec& flux() const { return flux_; }
  const BoundaryCondition& bc() const { return bc_; }

  /// Per-step geometry: calibration point and its time derivative (zero in
  /// Eulerian mode). Dilatation predictions are clamped to the admissible
  /// range before use.
  struct StepContext {
    double theta = 0.0;
    double theta_dot = 0.0;
  };
  StepContext context(double t, const Eigen::VectorXd& mu) const;

  /// Operator values at the requested cells. `value(j)` must return the state
  /// at interior cell j; ghost cells (-1 and n) are resolved internally from
  /// the boundary condition. Each distinct stencil point incurs exactly one
  /// flux evaluation, accumulated into *flux_evals when given.
  Eigen::VectorXd apply_at(const std::vector<int>& cells,
                           const std::function<double(int)>& value, const StepContext& ctx,
                           long* flux_evals = nullptr) const;

  /// Full-grid operator.
  Eigen::VectorXd apply(const Eigen::VectorXd& state, const StepContext& ctx) const;

  /// Explicit time loop from the given initial state on this operator's grid.
  Trajectory solve(const Eigen::VectorXd& initial_state, const Eigen::VectorXd& mu, double dt,
                   int n_steps) const;

private:
  RomMode mode_;
  FluxSpec flux_;
  BoundaryCondition bc_;
  Grid grid_;
  std::optional<TransformMap> map_;
  const CalibrationModel* calibration_ = nullptr;
  GeometricScheme scheme_ = GeometricScheme::Upwind;
};

/// Moving-frame full-order solve: pulls the physical initial state back to
/// the reference frame at theta(0) and advances with the moving-frame
/// operator.
Trajectory solve_ale_fom(const Eigen::VectorXd& initial_state_omega, const Eigen::VectorXd& mu,
                         const FluxSpec& flux, const BoundaryCondition& bc,
                         const TransformMap& map, const CalibrationModel& calibration, double dt,
                         int n_steps, GeometricScheme scheme = GeometricScheme::Upwind);

} // namespace alemor

#endif
