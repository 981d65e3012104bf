#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "alemor/detect.hpp"
#include "alemor/errors.hpp"
#include "alemor/fom.hpp"
#include "alemor/online.hpp"
#include "alemor/presets.hpp"
#include "alemor/workbench.hpp"

namespace {

using namespace alemor;

Eigen::VectorXd parse_mu(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Config, "bad parameter list: " + text);
    }
  }
  if (values.empty()) throw Error(ErrorCode::Config, "empty parameter list");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

struct CommonFomOptions {
  std::string preset_name;
  int n_cells = 0;
  double t_final = -1.0;
  double cfl = 0.25;

  Grid grid() const {
    const Preset& p = preset(preset_name);
    return Grid::uniform(n_cells > 0 ? n_cells : p.n_cells, p.x_left, p.x_right);
  }
  TimeGrid time_grid(const Grid& g) const {
    const Preset& p = preset(preset_name);
    return shared_time_grid(p, g, cfl, t_final >= 0 ? t_final : p.t_final);
  }
  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset_name, "problem preset")->required();
    cmd->add_option("--n-cells", n_cells, "grid cells (0: preset default)");
    cmd->add_option("--t-final", t_final, "horizon (negative: preset default)");
    cmd->add_option("--cfl", cfl, "CFL number");
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Calibrated moving-frame model reduction workbench for 1D conservation laws"};
  app.require_subcommand(1);

  // fom run
  CLI::App* fom_cmd = app.add_subcommand("fom", "full-order solves");
  CLI::App* fom_run = fom_cmd->add_subcommand("run", "solve one parameter and save the trajectory");
  CommonFomOptions fom_opts;
  std::string fom_mu_text, fom_out;
  fom_opts.add_to(fom_run);
  fom_run->add_option("--mu", fom_mu_text, "parameter values a,b,...")->required();
  fom_run->add_option("--out", fom_out, "trajectory CSV path")->required();

  // calibrate detect | fit | validate
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "feature detection and regression");
  CLI::App* cal_detect = cal_cmd->add_subcommand("detect", "detect calibration points");
  CommonFomOptions det_opts;
  std::string det_out, det_set = "calibration";
  det_opts.add_to(cal_detect);
  cal_detect->add_option("--set", det_set, "parameter set: calibration | validation | greedy");
  cal_detect->add_option("--out", det_out, "dataset CSV path")->required();

  CLI::App* cal_fit = cal_cmd->add_subcommand("fit", "fit a regression map to a dataset");
  std::string fit_preset, fit_data, fit_out, fit_learner;
  int fit_degree = -1;
  MlpFitOptions fit_mlp;
  cal_fit->add_option("--preset", fit_preset, "problem preset")->required();
  cal_fit->add_option("--data", fit_data, "dataset CSV")->required();
  cal_fit->add_option("--out", fit_out, "model output path")->required();
  cal_fit->add_option("--learner", fit_learner, "piecewise-linear | polynomial | mlp");
  cal_fit->add_option("--degree", fit_degree, "polynomial degree");
  cal_fit->add_option("--mlp-epochs", fit_mlp.epochs, "training epochs");
  cal_fit->add_option("--seed", fit_mlp.seed, "training seed");

  CLI::App* cal_validate = cal_cmd->add_subcommand("validate", "check a model against a dataset");
  std::string val_model, val_data;
  double val_gate_dx = -1.0, val_gate_factor = 5.0;
  CommonFomOptions val_opts;
  val_opts.add_to(cal_validate);
  cal_validate->add_option("--model", val_model, "model path")->required();
  cal_validate->add_option("--data", val_data, "dataset CSV")->required();
  cal_validate->add_option("--gate-factor", val_gate_factor, "gate: error < factor * dx");

  // offline run
  CLI::App* off_cmd = app.add_subcommand("offline", "offline reduction");
  CLI::App* off_run = off_cmd->add_subcommand("run", "calibrate (if moving frame) and run the greedy");
  std::string off_config;
  std::vector<std::string> off_sets;
  off_run->add_option("--config", off_config, "key = value config file");
  off_run->add_option("--set", off_sets, "config overrides key=value");

  // online run | compare
  CLI::App* on_cmd = app.add_subcommand("online", "reduced solves");
  CLI::App* on_run = on_cmd->add_subcommand("run", "reduced solve, trace to CSV");
  std::string on_model, on_mu_text, on_trace;
  int on_steps = -1;
  on_run->add_option("--model", on_model, "model bundle path")->required();
  on_run->add_option("--mu", on_mu_text, "parameter values")->required();
  on_run->add_option("--steps", on_steps, "override step count");
  on_run->add_option("--trace", on_trace, "trace CSV path")->required();

  CLI::App* on_compare = on_cmd->add_subcommand("compare", "FOM vs reduced errors and timings");
  std::string cmp_model;
  std::vector<std::string> cmp_mu_texts;
  on_compare->add_option("--model", cmp_model, "model bundle path")->required();
  on_compare->add_option("--mu", cmp_mu_texts, "parameter values (repeatable)")->required();

  // report
  CLI::App* report_cmd = app.add_subcommand("report", "preset test-point comparison table");
  std::string rep_model, rep_out;
  report_cmd->add_option("--model", rep_model, "model bundle path")->required();
  report_cmd->add_option("--out", rep_out, "output directory (default: stdout only)");

  // demo-kolmogorov
  CLI::App* demo_cmd = app.add_subcommand(
      "demo-kolmogorov", "mode counts of the three motivating snapshot families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return static_cast<int>(ErrorCode::Config);
  }

  if (fom_run->parsed()) {
    const Preset& p = preset(fom_opts.preset_name);
    const Eigen::VectorXd mu = parse_mu(fom_mu_text);
    const Grid grid = fom_opts.grid();
    const TimeGrid tg = fom_opts.time_grid(grid);
    const Trajectory traj = solve_fom(p.initial_state(mu, grid), mu, p.flux_spec(mu),
                                      p.boundary(mu), grid, tg.dt, tg.n_steps);
    save_trajectory_file(fom_out, traj, p.name);
    std::cout << "wrote " << fom_out << " (" << tg.n_steps << " steps, dt " << tg.dt << ")\n";
  } else if (cal_detect->parsed()) {
    const Preset& p = preset(det_opts.preset_name);
    const Grid grid = det_opts.grid();
    const TimeGrid tg = det_opts.time_grid(grid);
    std::vector<Eigen::VectorXd> mus;
    if (det_set == "calibration")
      mus = tensor_grid(p.calib_grid);
    else if (det_set == "validation")
      mus = tensor_grid(p.valid_grid);
    else if (det_set == "greedy")
      mus = tensor_grid(p.greedy_grid);
    else
      throw Error(ErrorCode::Config, "unknown parameter set: " + det_set);
    const CalibrationDataset data = detect_dataset(p, grid, mus, tg);
    data.save_file(det_out);
    std::cout << "wrote " << det_out << " (" << data.samples.size() << " samples)\n";
  } else if (cal_fit->parsed()) {
    const Preset& p = preset(fit_preset);
    const CalibrationDataset data = CalibrationDataset::load_file(fit_data);
    const LearnerKind learner = fit_learner.empty()
                                    ? p.learner
                                    : ExperimentConfig::from_overrides(
                                          {"preset=" + fit_preset, "learner=" + fit_learner})
                                          .learner;
    const int degree = fit_degree >= 0 ? fit_degree : p.poly_degree;
    const auto model = fit_calibration(learner, data, degree, fit_mlp);
    model->save_file(fit_out);
    std::cout << "wrote " << fit_out << " (training error "
              << validation_error(*model, data) << ")\n";
  } else if (cal_validate->parsed()) {
    const auto model = load_calibration_model_file(val_model);
    const CalibrationDataset data = CalibrationDataset::load_file(val_data);
    const double err = validation_error(*model, data);
    const Grid grid = val_opts.grid();
    const double gate = val_gate_factor * grid.dx;
    std::cout << "validation error " << err << " (gate " << gate << ")\n";
    if (!(err < gate)) {
      std::cerr << "calibration gate failed\n";
      return static_cast<int>(ErrorCode::CalibrationGate);
    }
    (void)val_gate_dx;
  } else if (off_run->parsed()) {
    ExperimentConfig config = off_config.empty() ? ExperimentConfig::from_overrides(off_sets)
                                                 : ExperimentConfig::from_file(off_config, off_sets);
    const OfflineArtifacts artifacts = run_offline(config, std::cout);
    if (artifacts.model.status == GreedyStatus::Stalled) {
      std::cerr << "greedy stalled: " << artifacts.model.status_reason << "\n";
      return static_cast<int>(ErrorCode::GreedyStall);
    }
  } else if (on_run->parsed()) {
    const ReducedModel model = ReducedModel::load_file(on_model);
    const Eigen::VectorXd mu = parse_mu(on_mu_text);
    const OnlineTrace trace = online_solve(model, mu, on_steps);
    std::ofstream out = open_output(on_trace);
    out << std::setprecision(17) << "k,t,step_term,residual_norm";
    for (int i = 0; i < model.n_rb(); ++i) out << ",c" << i;
    out << "\n";
    for (int k = 0; k < static_cast<int>(trace.times.size()); ++k) {
      out << k << "," << trace.times[k] << "," << (k > 0 ? trace.step_terms(k - 1) : 0.0) << ","
          << (k > 0 ? trace.residual_norms(k - 1) : 0.0);
      for (int i = 0; i < model.n_rb(); ++i) out << "," << trace.coeffs(k, i);
      out << "\n";
    }
    std::cout << "indicator " << trace.indicator << ", flux evaluations " << trace.flux_evals
              << ", wall " << trace.wall_seconds << " s\n";
  } else if (on_compare->parsed()) {
    const ReducedModel model = ReducedModel::load_file(cmp_model);
    std::vector<Eigen::VectorXd> mus;
    for (const std::string& text : cmp_mu_texts) mus.push_back(parse_mu(text));
    write_report_csv(std::cout, run_report(model, mus));
  } else if (report_cmd->parsed()) {
    const ReducedModel model = ReducedModel::load_file(rep_model);
    const Preset& p = preset(model.preset_name);
    std::vector<Eigen::VectorXd> mus;
    for (const std::vector<double>& point : p.test_points)
      mus.push_back(Eigen::Map<const Eigen::VectorXd>(point.data(), point.size()));
    const std::vector<ReportRow> rows = run_report(model, mus, rep_out);
    write_report_csv(std::cout, rows);
    if (!rep_out.empty()) {
      std::ofstream csv = open_output(rep_out + "/report.csv");
      write_report_csv(csv, rows);
    }
  } else if (demo_cmd->parsed()) {
    const KolmogorovReport report = run_kolmogorov_demo(std::cout);
    std::cout << "smooth_wave " << report.smooth_wave << "\nexact_shock " << report.exact_shock
              << "\nrusanov_shock " << report.rusanov_shock << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const alemor::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
