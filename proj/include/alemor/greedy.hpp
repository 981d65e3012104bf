#ifndef ALEMOR_GREEDY_HPP
#define ALEMOR_GREEDY_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alemor/reduced_model.hpp"

namespace alemor {

struct GreedyConfig {
  double tolerance = 1e-3; // target for the max indicator over the training set
  int n_max = 200;         // reduced-basis size cap
  int eim_max = 150;       // collocation (main) size cap
  double eps_eim_init = 0.1; // relative target of the collocation warm start
  int n_extra = 5;           // auxiliary collocation bases for the indicator
  double lipschitz = 1.0;    // indicator recursion constant
  int patience = 30;         // iterations without progress before stalling
  int modes_per_update = 1;  // basis vectors added per accepted extension
  int eim_init_stride = 0;   // time subsampling of warm-start snapshots; 0 = auto
  int fom_cache_capacity = 12;
  GeometricScheme scheme = GeometricScheme::Upwind;
  std::ostream* log = nullptr; // optional progress stream
};

/// Collocation warm start: greedy selection over the snapshot columns until
/// the worst relative interpolation error falls below eps_rel, then n_extra
/// further iterations to stock the auxiliary bases.
EimSpace eim_init(const Eigen::MatrixXd& snapshots, double eps_rel, int n_extra, double dx);

/// Simultaneous basis/collocation greedy driven by the online error
/// indicator. Each iteration targets the worst training parameter and its
/// worst time step, grows the collocation space from the exact operator
/// there, extends the basis from the full-order trajectory (with rollback
/// when the extension does not improve the sweep), and stops at the
/// tolerance or with a recorded stall reason.
ReducedModel podei_greedy(const std::string& preset_name, RomMode mode,
                          const std::vector<Eigen::VectorXd>& train_set, const Grid& grid,
                          double dt, int n_steps,
                          std::shared_ptr<const CalibrationModel> calibration,
                          const GreedyConfig& config);

} // namespace alemor

#endif
