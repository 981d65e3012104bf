#include "alemor/online.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "alemor/errors.hpp"
#include "alemor/presets.hpp"

namespace alemor {

OnlineTrace online_solve(const ReducedModel& model, const Eigen::VectorXd& mu, int n_steps,
                         bool throw_on_divergence, double divergence_factor) {
  const auto t_start = std::chrono::steady_clock::now();
  if (n_steps < 0) n_steps = model.n_steps;
  const int n_rb = model.rb.dim();
  const int m_main = model.eim.main_dim();
  const int m_total = model.eim.size();
  const int n_extra = model.eim.n_extra;
  if (n_rb == 0 || m_main == 0)
    throw Error(ErrorCode::Config, "reduced model has an empty basis");
  if (model.projected_basis.rows() != n_rb || model.projected_basis.cols() != m_total)
    throw Error(ErrorCode::Config, "reduced model was not finalized");

  const EvolutionOperator op = model.make_operator(mu);
  const Eigen::MatrixXd& modes = model.rb.modes;

  // Stability constant of the indicator recursion eta <- C eta + increment.
  const double lip = model.lipschitz;

  // Gram factor of the RB-orthogonal residual: sigma' (G - P'P) sigma.
  const Eigen::MatrixXd residual_gram =
      model.eim_gram.topLeftCorner(m_main, m_main) -
      model.projected_basis.leftCols(m_main).transpose() * model.projected_basis.leftCols(m_main);

  OnlineTrace trace;
  trace.coeffs.setZero(n_steps + 1, n_rb);
  trace.times.resize(n_steps + 1);
  trace.xi.setZero(n_steps, n_extra);
  trace.residual_norms.setZero(n_steps);
  trace.step_terms.setZero(n_steps);

  Eigen::VectorXd c = model.initial_coefficients(mu);
  trace.coeffs.row(0) = c.transpose();
  trace.times[0] = 0.0;

  // Seed the recursion with the initial projection error: the per-step terms
  // only track evolution consistency and are blind to a poorly captured u^0.
  {
    const Eigen::VectorXd u0 = model.frame_initial_state(mu);
    trace.initial_term = std::sqrt(model.grid.dx) * (u0 - modes * c).norm();
    trace.indicator = trace.initial_term;
  }

  const double abort_level = divergence_factor * model.tolerance;
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * model.dt;
    const EvolutionOperator::StepContext ctx = op.context(t, mu);
    const auto value = [&](int j) { return modes.row(j).dot(c); };

    long step_evals = 0;
    const Eigen::VectorXd op_magic = op.apply_at(model.eim.magic_dofs, value, ctx, &step_evals);
    trace.flux_evals += step_evals;
    trace.max_step_flux_evals = std::max(trace.max_step_flux_evals, step_evals);

    // Extended collocation solve: the leading block is unit lower triangular,
    // so sigma.head(m_main) coincides with the main-space solution.
    const Eigen::VectorXd sigma = model.eim.coefficients(op_magic, m_total);
    const Eigen::VectorXd sigma_main = sigma.head(m_main);
    const Eigen::VectorXd xi = sigma.tail(n_extra);

    const double quad = sigma_main.dot(residual_gram * sigma_main);
    const double residual_norm = model.dt * std::sqrt(std::max(quad, 0.0));
    double term = residual_norm;
    for (int m = 0; m < n_extra; ++m) term += model.dt * std::abs(xi(m)) * model.extra_norms(m);

    trace.xi.row(k) = xi.transpose();
    trace.residual_norms(k) = residual_norm;
    trace.step_terms(k) = term;
    trace.indicator = lip * trace.indicator + term;

    c -= model.dt * (model.projected_basis.leftCols(m_main) * sigma_main);
    trace.coeffs.row(k + 1) = c.transpose();
    trace.times[k + 1] = (k + 1) * model.dt;

    if (!c.allFinite() || trace.indicator > abort_level) {
      trace.diverged = true;
      trace.diverged_step = k + 1;
      if (throw_on_divergence) {
        std::ostringstream msg;
        msg << "reduced solve diverged at step " << k + 1 << " (indicator " << trace.indicator
            << ")";
        throw Error(ErrorCode::RomDivergence, msg.str());
      }
      break;
    }
  }

  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

Eigen::VectorXd reconstruct_state(const ReducedModel& model, const OnlineTrace& trace,
                                  const Eigen::VectorXd& mu, int k) {
  Eigen::VectorXd state = model.rb.reconstruct(trace.coeffs.row(k).transpose());
  if (model.mode == RomMode::Ale) {
    TransformMap map(model.transform, model.grid, model.grid);
    const double theta = map.clamp_theta(model.calibration->theta(trace.times[k], mu));
    state = push_forward(map, theta, state, preset(model.preset_name).periodic());
  }
  return state;
}

} // namespace alemor
