#ifndef ALEMOR_REDUCED_MODEL_HPP
#define ALEMOR_REDUCED_MODEL_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alemor/calibration.hpp"
#include "alemor/eim.hpp"
#include "alemor/evolution.hpp"
#include "alemor/pod.hpp"

namespace alemor {

enum class GreedyStatus { Converged, Stalled };

struct GreedyIterationLog {
  int iteration = 0;
  Eigen::VectorXd mu_max;
  double max_indicator = 0.0;
  int n_rb = 0;
  int n_eim = 0;
  bool rollback = false;
};

/// Offline product of the PODEI-Greedy: RB + EIM spaces with the precomputed
/// online auxiliaries (projected bases, Gram matrix, magic-cell halos).
struct ReducedModel {
  std::string preset_name;
  RomMode mode = RomMode::Eulerian;
  TransformKind transform = TransformKind::Translation;
  GeometricScheme scheme = GeometricScheme::Upwind;

  Grid grid; // reference grid in Ale mode (coincides with the physical grid)
  double dt = 0.0;
  int n_steps = 0;
  double tolerance = 1e-3;
  double lipschitz = 1.0;

  PodBasis rb;
  EimSpace eim;
  std::shared_ptr<const CalibrationModel> calibration; // null in Eulerian mode

  GreedyStatus status = GreedyStatus::Converged;
  std::string status_reason;
  std::vector<GreedyIterationLog> history;

  // Online auxiliaries, filled by finalize().
  Eigen::MatrixXd projected_basis; // N x size: RB coefficients of each rho_m
  Eigen::MatrixXd eim_gram;        // size x size: <rho_i, rho_j>_L2
  Eigen::VectorXd extra_norms;     // n_extra: ||rho'_m||_L2

  int n_rb() const { return rb.dim(); }
  int n_eim() const { return eim.main_dim(); }

  /// Recomputes the online auxiliaries from rb/eim; call after any change.
  void finalize();

  /// Evolution operator matching this model's frame (shares the FOM path).
  EvolutionOperator make_operator(const Eigen::VectorXd& mu) const;

  /// Initial state in this model's frame (pulled back in Ale mode).
  Eigen::VectorXd frame_initial_state(const Eigen::VectorXd& mu) const;

  /// Reduced initial coefficients for a parameter (pull-back in Ale mode).
  Eigen::VectorXd initial_coefficients(const Eigen::VectorXd& mu) const;

  void save(std::ostream& out) const;
  static ReducedModel load(std::istream& in);
  void save_file(const std::string& path) const;
  static ReducedModel load_file(const std::string& path);
};

} // namespace alemor

#endif
