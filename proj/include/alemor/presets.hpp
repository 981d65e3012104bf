#ifndef ALEMOR_PRESETS_HPP
#define ALEMOR_PRESETS_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "alemor/detect.hpp"
#include "alemor/flux.hpp"
#include "alemor/grid.hpp"
#include "alemor/transforms.hpp"

namespace alemor {

enum class LearnerKind { PiecewiseLinear, Polynomial, Mlp };

/// One of the five benchmark problems, with its parameter box, flux,
/// boundary condition, feature tracker, calibration transform and the
/// desk-scale defaults (grid size, horizon, training/validation/test sets)
/// used by the workbench.
struct Preset {
  std::string name;
  FluxKind flux_kind;
  BcKind bc_kind;
  DetectorKind detector;
  TransformKind transform;
  LearnerKind learner;
  int poly_degree = 2;
  int n_params = 0;
  std::vector<std::pair<double, double>> box; // per-parameter ranges, mu[0] first
  double x_left = 0.0;
  double x_right = 1.0;

  double t_final = 0.0; // default horizon
  int n_cells = 400;    // default desk grid

  std::vector<std::vector<double>> greedy_grid; // per-dimension nodes
  std::vector<std::vector<double>> calib_grid;
  std::vector<std::vector<double>> valid_grid;
  std::vector<std::vector<double>> test_points; // explicit points

  double initial_value(double x, const Eigen::VectorXd& mu) const;
  Eigen::VectorXd initial_state(const Eigen::VectorXd& mu, const Grid& grid) const;
  FluxSpec flux_spec(const Eigen::VectorXd& mu) const;
  BoundaryCondition boundary(const Eigen::VectorXd& mu) const;
  Grid default_grid() const { return Grid::uniform(n_cells, x_left, x_right); }
  bool periodic() const { return bc_kind == BcKind::Periodic; }

  /// Rejects mu of wrong size or outside the parameter box.
  void check_mu(const Eigen::VectorXd& mu) const;
};

const Preset& preset(const std::string& name);
std::vector<std::string> preset_names();

/// Cell-center evaluations of u0(., mu); validates the parameter box.
Eigen::VectorXd initial_condition(const std::string& preset_name, const Eigen::VectorXd& mu,
                                  const Grid& grid);

/// Tensor product of per-dimension node lists.
std::vector<Eigen::VectorXd> tensor_grid(const std::vector<std::vector<double>>& nodes);

} // namespace alemor

#endif
