#ifndef ALEMOR_TRAJECTORY_HPP
#define ALEMOR_TRAJECTORY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace alemor {

/// All time snapshots of one parametric solve. Row k of `states` is the
/// state at time `times[k]`; row 0 is the initial condition.
struct Trajectory {
  Eigen::VectorXd params;
  std::vector<double> times;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> states;

  int n_steps() const { return static_cast<int>(times.size()) - 1; }
  int n_cells() const { return static_cast<int>(states.cols()); }

  Eigen::VectorXd state(int k) const { return states.row(k).transpose(); }

  /// Snapshots as columns (n_cells x K+1), the layout the reduction code uses.
  Eigen::MatrixXd snapshot_columns() const { return states.transpose(); }
};

/// Versioned CSV persistence: `# alemor-trajectory v1` header with preset id,
/// parameters, dt, n_cells and K, followed by one row of cell values per step.
void save_trajectory(std::ostream& out, const Trajectory& traj, const std::string& preset);
Trajectory load_trajectory(std::istream& in, std::string* preset = nullptr);

void save_trajectory_file(const std::string& path, const Trajectory& traj,
                          const std::string& preset);
Trajectory load_trajectory_file(const std::string& path, std::string* preset = nullptr);

} // namespace alemor

#endif
