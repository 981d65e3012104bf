#include "alemor/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "alemor/detect.hpp"
#include "alemor/errors.hpp"
#include "alemor/fom.hpp"
#include "alemor/pod.hpp"

namespace alemor {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "bad numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double x = parse_double(key, value);
  if (x != std::floor(x)) throw Error(ErrorCode::Config, "'" + key + "' must be an integer");
  return static_cast<int>(x);
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

LearnerKind parse_learner(const std::string& value) {
  if (value == "piecewise-linear" || value == "pwl") return LearnerKind::PiecewiseLinear;
  if (value == "polynomial" || value == "poly") return LearnerKind::Polynomial;
  if (value == "mlp") return LearnerKind::Mlp;
  throw Error(ErrorCode::Config, "unknown learner: " + value);
}

const char* learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::PiecewiseLinear: return "piecewise-linear";
    case LearnerKind::Polynomial: return "polynomial";
    case LearnerKind::Mlp: return "mlp";
  }
  return "?";
}

double time_l2(const Eigen::VectorXd& v, double dx) { return std::sqrt(dx) * v.norm(); }

} // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "preset") {
    preset_name = value;
  } else if (key == "mode") {
    if (value == "ale")
      mode = RomMode::Ale;
    else if (value == "eulerian")
      mode = RomMode::Eulerian;
    else
      throw Error(ErrorCode::Config, "mode must be 'ale' or 'eulerian', got: " + value);
  } else if (key == "n_cells") {
    n_cells = parse_int(key, value);
  } else if (key == "t_final") {
    t_final = parse_double(key, value);
  } else if (key == "cfl") {
    cfl = parse_double(key, value);
  } else if (key == "gate_factor") {
    gate_factor = parse_double(key, value);
  } else if (key == "learner") {
    learner = parse_learner(value);
    learner_overridden = true;
  } else if (key == "poly_degree") {
    poly_degree = parse_int(key, value);
  } else if (key == "tolerance") {
    greedy.tolerance = parse_double(key, value);
  } else if (key == "n_max") {
    greedy.n_max = parse_int(key, value);
  } else if (key == "eim_max") {
    greedy.eim_max = parse_int(key, value);
  } else if (key == "eps_eim_init") {
    greedy.eps_eim_init = parse_double(key, value);
  } else if (key == "n_extra") {
    greedy.n_extra = parse_int(key, value);
  } else if (key == "lipschitz") {
    greedy.lipschitz = parse_double(key, value);
  } else if (key == "patience") {
    greedy.patience = parse_int(key, value);
  } else if (key == "modes_per_update") {
    greedy.modes_per_update = parse_int(key, value);
  } else if (key == "eim_init_stride") {
    greedy.eim_init_stride = parse_int(key, value);
  } else if (key == "fom_cache_capacity") {
    greedy.fom_cache_capacity = parse_int(key, value);
  } else if (key == "scheme") {
    if (value == "upwind")
      greedy.scheme = GeometricScheme::Upwind;
    else if (value == "central")
      greedy.scheme = GeometricScheme::Central;
    else
      throw Error(ErrorCode::Config, "scheme must be 'upwind' or 'central', got: " + value);
  } else if (key == "mlp_epochs") {
    mlp.epochs = parse_int(key, value);
  } else if (key == "mlp_batch") {
    mlp.batch_size = parse_int(key, value);
  } else if (key == "mlp_learning_rate") {
    mlp.learning_rate = parse_double(key, value);
  } else if (key == "seed") {
    mlp.seed = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "output_dir") {
    output_dir = value;
  } else {
    throw Error(ErrorCode::Config, "unknown config key: " + key);
  }
}

void ExperimentConfig::validate() const {
  const Preset& p = preset(preset_name); // throws on unknown preset
  if (n_cells < 0 || (n_cells > 0 && n_cells < 4))
    throw Error(ErrorCode::Config, "n_cells must be at least 4");
  if (cfl <= 0 || cfl > 1) throw Error(ErrorCode::Config, "cfl must be in (0, 1]");
  if (greedy.tolerance <= 0) throw Error(ErrorCode::Config, "tolerance must be positive");
  if (greedy.eps_eim_init <= 0) throw Error(ErrorCode::Config, "eps_eim_init must be positive");
  if (gate_factor <= 0) throw Error(ErrorCode::Config, "gate_factor must be positive");
  if (greedy.n_extra < 1) throw Error(ErrorCode::Config, "n_extra must be at least 1");
  (void)p;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config file " + path);
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config,
                  path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const std::string& item : overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, "override must be key=value: " + item);
    config.set(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  if (config.preset_name.empty()) throw Error(ErrorCode::Config, "config sets no preset");
  config.validate();
  return config;
}

ExperimentConfig ExperimentConfig::from_overrides(const std::vector<std::string>& overrides) {
  ExperimentConfig config;
  for (const std::string& item : overrides) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, "override must be key=value: " + item);
    config.set(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  if (config.preset_name.empty()) throw Error(ErrorCode::Config, "no preset given");
  config.validate();
  return config;
}

void ExperimentConfig::echo(std::ostream& out) const {
  const Preset& p = preset(preset_name);
  out << std::setprecision(17);
  out << "preset = " << preset_name << "\n";
  out << "mode = " << (mode == RomMode::Ale ? "ale" : "eulerian") << "\n";
  out << "n_cells = " << (n_cells > 0 ? n_cells : p.n_cells) << "\n";
  out << "t_final = " << (t_final >= 0 ? t_final : p.t_final) << "\n";
  out << "cfl = " << cfl << "\n";
  out << "gate_factor = " << gate_factor << "\n";
  out << "learner = " << learner_name(learner_overridden ? learner : p.learner) << "\n";
  out << "poly_degree = " << (poly_degree >= 0 ? poly_degree : p.poly_degree) << "\n";
  out << "tolerance = " << greedy.tolerance << "\n";
  out << "n_max = " << greedy.n_max << "\n";
  out << "eim_max = " << greedy.eim_max << "\n";
  out << "eps_eim_init = " << greedy.eps_eim_init << "\n";
  out << "n_extra = " << greedy.n_extra << "\n";
  out << "lipschitz = " << greedy.lipschitz << "\n";
  out << "patience = " << greedy.patience << "\n";
  out << "modes_per_update = " << greedy.modes_per_update << "\n";
  out << "eim_init_stride = " << greedy.eim_init_stride << "\n";
  out << "scheme = " << (greedy.scheme == GeometricScheme::Central ? "central" : "upwind") << "\n";
  out << "seed = " << mlp.seed << "\n";
}

TimeGrid shared_time_grid(const Preset& p, const Grid& grid, double cfl, double t_final) {
  std::vector<std::pair<Eigen::VectorXd, FluxSpec>> states;
  const auto add_set = [&](const std::vector<Eigen::VectorXd>& mus) {
    for (const Eigen::VectorXd& mu : mus) states.push_back({p.initial_state(mu, grid), p.flux_spec(mu)});
  };
  add_set(tensor_grid(p.greedy_grid));
  add_set(tensor_grid(p.calib_grid));
  add_set(tensor_grid(p.valid_grid));
  for (const std::vector<double>& point : p.test_points) {
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(point.data(), point.size());
    states.push_back({p.initial_state(mu, grid), p.flux_spec(mu)});
  }
  const double dt0 = cfl_timestep(states, grid, cfl);
  TimeGrid tg;
  tg.n_steps = std::max(1, static_cast<int>(std::ceil(t_final / dt0)));
  tg.dt = t_final / tg.n_steps;
  return tg;
}

CalibrationDataset detect_dataset(const Preset& p, const Grid& grid,
                                  const std::vector<Eigen::VectorXd>& mus, const TimeGrid& tg) {
  CalibrationDataset data;
  for (const Eigen::VectorXd& mu : mus) {
    const Trajectory traj = solve_fom(p.initial_state(mu, grid), mu, p.flux_spec(mu),
                                      p.boundary(mu), grid, tg.dt, tg.n_steps);
    const std::vector<double> thetas = detect_theta(p.detector, traj, grid, p.periodic());
    for (size_t k = 0; k < thetas.size(); ++k) data.add(traj.times[k], mu, thetas[k]);
  }
  return data;
}

OfflineArtifacts run_offline(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const Preset& p = preset(config.preset_name);
  const int n_cells = config.n_cells > 0 ? config.n_cells : p.n_cells;
  const double t_final = config.t_final >= 0 ? config.t_final : p.t_final;
  const Grid grid = Grid::uniform(n_cells, p.x_left, p.x_right);
  const TimeGrid tg = shared_time_grid(p, grid, config.cfl, t_final);
  log << "offline: preset " << config.preset_name << ", "
      << (config.mode == RomMode::Ale ? "moving frame" : "eulerian") << ", n_cells " << n_cells
      << ", dt " << tg.dt << ", n_steps " << tg.n_steps << "\n";

  const bool write_out = !config.output_dir.empty();
  if (write_out) std::filesystem::create_directories(config.output_dir);
  if (write_out) {
    std::ofstream echo(config.output_dir + "/config.txt");
    config.echo(echo);
  }

  OfflineArtifacts result;
  std::shared_ptr<const CalibrationModel> calibration;
  if (config.mode == RomMode::Ale) {
    const LearnerKind learner = config.learner_overridden ? config.learner : p.learner;
    const int degree = config.poly_degree >= 0 ? config.poly_degree : p.poly_degree;
    const CalibrationDataset train = detect_dataset(p, grid, tensor_grid(p.calib_grid), tg);
    log << "calibration: " << train.samples.size() << " samples, learner "
        << learner_name(learner) << "\n";
    std::unique_ptr<CalibrationModel> fitted = fit_calibration(learner, train, degree, config.mlp);
    if (fitted->flagged()) log << "calibration: ill-conditioned fit flagged\n";

    const CalibrationDataset valid = detect_dataset(p, grid, tensor_grid(p.valid_grid), tg);
    result.calibration_error = validation_error(*fitted, valid);
    const double gate = config.gate_factor * grid.dx;
    log << "calibration: validation error " << result.calibration_error << " (gate " << gate
        << ")\n";
    if (write_out) {
      train.save_file(config.output_dir + "/calibration_train.csv");
      valid.save_file(config.output_dir + "/calibration_valid.csv");
      fitted->save_file(config.output_dir + "/calibration_model.txt");
    }
    if (!(result.calibration_error < gate)) {
      std::ostringstream msg;
      msg << "calibration gate failed: validation error " << result.calibration_error
          << " >= " << gate;
      throw Error(ErrorCode::CalibrationGate, msg.str());
    }
    calibration = std::move(fitted);
  }

  GreedyConfig greedy_config = config.greedy;
  greedy_config.log = &log;
  result.model = podei_greedy(config.preset_name, config.mode, tensor_grid(p.greedy_grid), grid,
                              tg.dt, tg.n_steps, calibration, greedy_config);
  result.time_grid = tg;
  log << "greedy: " << (result.model.status == GreedyStatus::Converged ? "converged" : "stalled")
      << (result.model.status_reason.empty() ? "" : " (" + result.model.status_reason + ")")
      << ", n_rb " << result.model.n_rb() << ", n_eim " << result.model.n_eim() << "\n";

  if (write_out) {
    result.model.save_file(config.output_dir + "/model.txt");
    std::ofstream hist(config.output_dir + "/greedy_history.csv");
    hist << std::setprecision(17) << "iteration,max_indicator,n_rb,n_eim,rollback,mu\n";
    for (const GreedyIterationLog& row : result.model.history) {
      hist << row.iteration << "," << row.max_indicator << "," << row.n_rb << "," << row.n_eim
           << "," << (row.rollback ? 1 : 0) << ",";
      for (long i = 0; i < row.mu_max.size(); ++i) hist << (i ? " " : "") << row.mu_max(i);
      hist << "\n";
    }
  }
  return result;
}

std::vector<ReportRow> run_report(const ReducedModel& model,
                                  const std::vector<Eigen::VectorXd>& test_mus,
                                  const std::string& snapshot_dir) {
  const Preset& p = preset(model.preset_name);
  if (!snapshot_dir.empty()) std::filesystem::create_directories(snapshot_dir);
  std::vector<ReportRow> rows;
  for (size_t i = 0; i < test_mus.size(); ++i) {
    const Eigen::VectorXd& mu = test_mus[i];
    const EvolutionOperator op = model.make_operator(mu);
    const Eigen::VectorXd u0 = model.frame_initial_state(mu);

    Trajectory fom;
    double fom_seconds = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      fom = op.solve(u0, mu, model.dt, model.n_steps);
      fom_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    fom_seconds /= 3.0;

    const OnlineTrace trace = online_solve(model, mu);

    // Final-time comparison in the physical frame.
    const int K = model.n_steps;
    Eigen::VectorXd fom_final = fom.state(K);
    Eigen::VectorXd rom_final = reconstruct_state(model, trace, mu, K);
    if (model.mode == RomMode::Ale) {
      TransformMap map(model.transform, model.grid, model.grid);
      const double theta = map.clamp_theta(model.calibration->theta(K * model.dt, mu));
      fom_final = push_forward(map, theta, fom_final, p.periodic());
    }

    ReportRow row;
    std::ostringstream id;
    id << model.preset_name << "/" << i;
    row.test_id = id.str();
    row.n_rb = model.n_rb();
    row.n_eim = model.n_eim();
    row.fom_seconds = fom_seconds;
    row.rb_seconds = trace.wall_seconds;
    row.ratio = trace.wall_seconds / fom_seconds;
    row.error = time_l2(rom_final - fom_final, model.grid.dx) /
                std::max(time_l2(fom_final, model.grid.dx), 1e-300);
    row.indicator = trace.indicator;
    row.flux_evals = trace.flux_evals;
    row.max_step_flux_evals = trace.max_step_flux_evals;
    const double u0_max = initial_condition(model.preset_name, mu, model.grid).maxCoeff();
    row.overshoot = rom_final.maxCoeff() - u0_max;
    rows.push_back(row);

    if (!snapshot_dir.empty()) {
      std::ofstream snap(snapshot_dir + "/final_" + std::to_string(i) + ".csv");
      snap << std::setprecision(17) << "x,fom,rom\n";
      for (int j = 0; j < model.grid.n_cells; ++j)
        snap << model.grid.centers[j] << "," << fom_final(j) << "," << rom_final(j) << "\n";
    }
  }
  return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << std::setprecision(17)
      << "test_id,n_rb,n_eim,fom_seconds,rb_seconds,ratio,error,indicator,flux_evals,"
         "max_step_flux_evals,overshoot\n";
  for (const ReportRow& row : rows) {
    out << row.test_id << "," << row.n_rb << "," << row.n_eim << "," << row.fom_seconds << ","
        << row.rb_seconds << "," << row.ratio << "," << row.error << "," << row.indicator << ","
        << row.flux_evals << "," << row.max_step_flux_evals << "," << row.overshoot << "\n";
  }
}

KolmogorovReport run_kolmogorov_demo(std::ostream& log) {
  const int n_cells = 1000;
  const int n_steps = 1400;
  const double tol = 1e-5;
  const Grid grid = Grid::uniform(n_cells, 0.0, 1.0);

  KolmogorovReport report;

  // Unit-speed advection of a smooth periodic bump: exact-solution snapshots.
  {
    const double t_final = 0.35;
    Eigen::MatrixXd snaps(n_cells, n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
      const double t = t_final * k / n_steps;
      for (int j = 0; j < n_cells; ++j) {
        const double s = std::sin(M_PI * (grid.centers[j] - t - 0.2));
        snaps(j, k) = std::exp(-10.0 * s * s);
      }
    }
    report.smooth_wave = pod(snaps, tol, grid.dx).dim();
    log << "smooth advected wave: " << report.smooth_wave << " modes\n";
  }

  // The same transport applied to a jump: exact (undiffused) moving shock.
  {
    const double t_final = 0.245;
    Eigen::MatrixXd snaps(n_cells, n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
      const double t = t_final * k / n_steps;
      for (int j = 0; j < n_cells; ++j) snaps(j, k) = grid.centers[j] - t < 0.5 ? 1.0 : 0.0;
    }
    report.exact_shock = pod(snaps, tol, grid.dx).dim();
    log << "exact moving shock: " << report.exact_shock << " modes\n";
  }

  // The same jump evolved by the (diffusive) full-order scheme.
  {
    const double t_final = 0.07;
    Eigen::VectorXd u0(n_cells);
    for (int j = 0; j < n_cells; ++j) u0(j) = grid.centers[j] < 0.5 ? 1.0 : 0.0;
    const FluxSpec flux{FluxKind::LinearAdvection, 1.0};
    const BoundaryCondition bc{BcKind::InflowOutflow, 1.0};
    const Trajectory traj =
        solve_fom(u0, Eigen::VectorXd::Ones(1), flux, bc, grid, t_final / n_steps, n_steps);
    report.rusanov_shock = pod(traj.snapshot_columns(), tol, grid.dx).dim();
    log << "diffused moving shock: " << report.rusanov_shock << " modes\n";
  }

  return report;
}

} // namespace alemor
