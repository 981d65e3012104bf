#include "alemor/reduced_model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "alemor/errors.hpp"
#include "alemor/presets.hpp"

namespace alemor {

namespace {

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << " " << m.cols() << "\n";
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  long rows = 0, cols = 0;
  in >> rows >> cols;
  if (!in || rows < 0 || cols < 0) throw Error(ErrorCode::Config, "malformed matrix block");
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) in >> m(i, j);
  if (!in) throw Error(ErrorCode::Config, "truncated matrix block");
  return m;
}

} // namespace

void ReducedModel::finalize() {
  const double dx = grid.dx;
  if (eim.size() > 0 && rb.dim() > 0) {
    projected_basis = dx * (rb.modes.transpose() * eim.basis);
    eim_gram = dx * (eim.basis.transpose() * eim.basis);
  } else {
    projected_basis.resize(rb.dim(), eim.size());
    eim_gram.resize(eim.size(), eim.size());
  }
  extra_norms.resize(eim.n_extra);
  for (int m = 0; m < eim.n_extra; ++m)
    extra_norms(m) = std::sqrt(dx) * eim.basis.col(eim.main_dim() + m).norm();
}

EvolutionOperator ReducedModel::make_operator(const Eigen::VectorXd& mu) const {
  const Preset& p = preset(preset_name);
  if (mode == RomMode::Eulerian)
    return EvolutionOperator(p.flux_spec(mu), p.boundary(mu), grid);
  TransformMap map(transform, grid, grid);
  return EvolutionOperator(p.flux_spec(mu), p.boundary(mu), map, calibration.get(), scheme);
}

Eigen::VectorXd ReducedModel::frame_initial_state(const Eigen::VectorXd& mu) const {
  Eigen::VectorXd u0 = initial_condition(preset_name, mu, grid);
  if (mode == RomMode::Ale) {
    if (!calibration) throw Error(ErrorCode::Config, "moving-frame model lacks a calibration map");
    TransformMap map(transform, grid, grid);
    const double theta0 = map.clamp_theta(calibration->theta(0.0, mu));
    u0 = pull_back(map, theta0, u0, preset(preset_name).periodic());
  }
  return u0;
}

Eigen::VectorXd ReducedModel::initial_coefficients(const Eigen::VectorXd& mu) const {
  return rb.project(frame_initial_state(mu));
}

void ReducedModel::save(std::ostream& out) const {
  out << std::setprecision(17);
  out << "# alemor-model v1\n";
  out << "preset " << preset_name << "\n";
  out << "mode " << (mode == RomMode::Ale ? "ale" : "eulerian") << "\n";
  out << "transform " << (transform == TransformKind::Dilatation ? "dilatation" : "translation")
      << "\n";
  out << "scheme " << (scheme == GeometricScheme::Central ? "central" : "upwind") << "\n";
  out << "grid " << grid.n_cells << " " << grid.x_left << " " << grid.x_right << "\n";
  out << "time " << dt << " " << n_steps << "\n";
  out << "tolerance " << tolerance << "\n";
  out << "lipschitz " << lipschitz << "\n";
  out << "status " << (status == GreedyStatus::Converged ? "converged" : "stalled") << "\n";
  out << "reason " << (status_reason.empty() ? "-" : status_reason) << "\n";
  out << "rb " << rb.tolerance << " " << rb.dx << "\n";
  write_matrix(out, rb.modes);
  write_matrix(out, rb.singular_values);
  out << "eim " << eim.n_extra << " " << eim.magic_dofs.size() << "\n";
  for (size_t i = 0; i < eim.magic_dofs.size(); ++i)
    out << (i ? " " : "") << eim.magic_dofs[i];
  out << "\n";
  write_matrix(out, eim.basis);
  write_matrix(out, eim.interp);
  out << "history " << history.size() << "\n";
  for (const GreedyIterationLog& log : history) {
    out << log.iteration << " " << log.max_indicator << " " << log.n_rb << " " << log.n_eim << " "
        << (log.rollback ? 1 : 0) << " " << log.mu_max.size();
    for (long i = 0; i < log.mu_max.size(); ++i) out << " " << log.mu_max(i);
    out << "\n";
  }
  if (calibration) {
    out << "calibration 1\n";
    calibration->save(out);
  } else {
    out << "calibration 0\n";
  }
}

ReducedModel ReducedModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# alemor-model v1", 0) != 0)
    throw Error(ErrorCode::Config, "not a reduced-model file");

  ReducedModel model;
  std::string key, word;
  in >> key >> model.preset_name;
  in >> key >> word;
  model.mode = (word == "ale") ? RomMode::Ale : RomMode::Eulerian;
  in >> key >> word;
  model.transform = (word == "dilatation") ? TransformKind::Dilatation : TransformKind::Translation;
  in >> key >> word;
  model.scheme = (word == "central") ? GeometricScheme::Central : GeometricScheme::Upwind;
  int n_cells = 0;
  double x_left = 0.0, x_right = 0.0;
  in >> key >> n_cells >> x_left >> x_right;
  model.grid = Grid::uniform(n_cells, x_left, x_right);
  in >> key >> model.dt >> model.n_steps;
  in >> key >> model.tolerance;
  in >> key >> model.lipschitz;
  in >> key >> word;
  model.status = (word == "stalled") ? GreedyStatus::Stalled : GreedyStatus::Converged;
  in >> key;
  std::getline(in >> std::ws, model.status_reason);
  if (model.status_reason == "-") model.status_reason.clear();
  in >> key >> model.rb.tolerance >> model.rb.dx;
  model.rb.modes = read_matrix(in);
  model.rb.singular_values = read_matrix(in);
  size_t n_magic = 0;
  in >> key >> model.eim.n_extra >> n_magic;
  model.eim.magic_dofs.resize(n_magic);
  for (size_t i = 0; i < n_magic; ++i) in >> model.eim.magic_dofs[i];
  model.eim.basis = read_matrix(in);
  model.eim.interp = read_matrix(in);
  size_t n_history = 0;
  in >> key >> n_history;
  model.history.resize(n_history);
  for (GreedyIterationLog& log : model.history) {
    int rollback = 0;
    long n_mu = 0;
    in >> log.iteration >> log.max_indicator >> log.n_rb >> log.n_eim >> rollback >> n_mu;
    log.rollback = rollback != 0;
    log.mu_max.resize(n_mu);
    for (long i = 0; i < n_mu; ++i) in >> log.mu_max(i);
  }
  int has_calibration = 0;
  in >> key >> has_calibration;
  if (!in) throw Error(ErrorCode::Config, "truncated reduced-model file");
  if (has_calibration) {
    in >> std::ws;
    model.calibration = load_calibration_model(in);
  }
  model.finalize();
  return model;
}

void ReducedModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path);
  save(out);
}

ReducedModel ReducedModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path);
  return load(in);
}

} // namespace alemor
