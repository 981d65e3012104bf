#ifndef ALEMOR_ONLINE_HPP
#define ALEMOR_ONLINE_HPP

#include <vector>

#include <Eigen/Core>

#include "alemor/reduced_model.hpp"

namespace alemor {

/// Reduced time history plus the error-indicator bookkeeping. The per-step
/// ingredients (xi coefficients, residual norms, increments) are kept so the
/// accumulated indicator can be cross-checked by direct summation.
struct OnlineTrace {
  Eigen::MatrixXd coeffs; // (n_steps+1) x N, one reduced state per row
  std::vector<double> times;

  Eigen::MatrixXd xi;             // n_steps x n_extra
  Eigen::VectorXd residual_norms; // n_steps: ||dt R^k||_L2
  Eigen::VectorXd step_terms;     // n_steps: indicator increments
  double initial_term = 0.0;      // ||u^0 - P u^0||_L2, seeds the recursion
  double indicator = 0.0;

  long flux_evals = 0;          // total across all steps
  long max_step_flux_evals = 0; // worst single step
  double wall_seconds = 0.0;

  bool diverged = false;
  int diverged_step = -1;
};

/// Advances the reduced coefficients with the collocated operator: per step
/// the evolution operator is evaluated at the magic cells only, the
/// triangular collocation system is solved in the extended space, and the
/// error indicator is accumulated. Throws RomDivergence when the indicator
/// exceeds `divergence_factor * model.tolerance` unless `throw_on_divergence`
/// is false, in which case the trace is returned with the divergence flag.
OnlineTrace online_solve(const ReducedModel& model, const Eigen::VectorXd& mu, int n_steps = -1,
                         bool throw_on_divergence = true, double divergence_factor = 1e6);

/// Physical-frame state at time index k (push-forward in the moving frame).
Eigen::VectorXd reconstruct_state(const ReducedModel& model, const OnlineTrace& trace,
                                  const Eigen::VectorXd& mu, int k);

} // namespace alemor

#endif
