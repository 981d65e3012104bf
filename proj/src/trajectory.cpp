#include "alemor/trajectory.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "alemor/errors.hpp"

namespace alemor {

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

} // namespace

void save_trajectory(std::ostream& out, const Trajectory& traj, const std::string& preset) {
  out << "# alemor-trajectory v1\n";
  out << "# preset=" << preset << "\n";
  out << std::setprecision(17);
  out << "# mu=";
  for (int i = 0; i < traj.params.size(); ++i) out << (i ? "," : "") << traj.params(i);
  out << "\n";
  const double dt = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
  out << "# dt=" << dt << "\n";
  out << "# n_cells=" << traj.states.cols() << "\n";
  out << "# n_steps=" << traj.n_steps() << "\n";
  for (int k = 0; k < traj.states.rows(); ++k) {
    for (int i = 0; i < traj.states.cols(); ++i)
      out << (i ? "," : "") << traj.states(k, i);
    out << "\n";
  }
}

Trajectory load_trajectory(std::istream& in, std::string* preset) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# alemor-trajectory v1", 0) != 0)
    throw Error(ErrorCode::Config, "not an alemor-trajectory v1 file");

  Trajectory traj;
  double dt = 0.0;
  long n_cells = -1, n_steps = -1;
  while (in.peek() == '#' && std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(2, eq - 2);
    const std::string val = line.substr(eq + 1);
    if (key == "preset" && preset) *preset = val;
    else if (key == "mu") {
      auto v = parse_row(val);
      traj.params = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
    } else if (key == "dt") dt = std::stod(val);
    else if (key == "n_cells") n_cells = std::stol(val);
    else if (key == "n_steps") n_steps = std::stol(val);
  }
  if (n_cells <= 0 || n_steps < 0)
    throw Error(ErrorCode::Config, "trajectory header missing n_cells/n_steps");

  traj.states.resize(n_steps + 1, n_cells);
  traj.times.resize(n_steps + 1);
  for (long k = 0; k <= n_steps; ++k) {
    if (!std::getline(in, line))
      throw Error(ErrorCode::Config, "trajectory truncated at row " + std::to_string(k));
    auto row = parse_row(line);
    if (static_cast<long>(row.size()) != n_cells)
      throw Error(ErrorCode::Config, "trajectory row has wrong width");
    for (long i = 0; i < n_cells; ++i) traj.states(k, i) = row[i];
    traj.times[k] = k * dt;
  }
  return traj;
}

void save_trajectory_file(const std::string& path, const Trajectory& traj,
                          const std::string& preset) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot open for writing: " + path);
  save_trajectory(out, traj, preset);
}

Trajectory load_trajectory_file(const std::string& path, std::string* preset) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open: " + path);
  return load_trajectory(in, preset);
}

} // namespace alemor
