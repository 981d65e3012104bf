#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include <Eigen/Dense>

#include "alemor/fom.hpp"
#include "alemor/greedy.hpp"
#include "alemor/online.hpp"
#include "alemor/presets.hpp"

using namespace alemor;

namespace {

std::vector<Eigen::VectorXd> small_train_set() {
  std::vector<Eigen::VectorXd> mus;
  for (const double a : {0.8, 1.2, 1.6}) {
    Eigen::VectorXd mu(3);
    mu << a, 0.45, 0.2;
    mus.push_back(mu);
  }
  return mus;
}

std::shared_ptr<const CalibrationModel> exact_translation() {
  return std::make_shared<FunctionCalibration>(
      [](double t, const Eigen::VectorXd& mu) { return mu(0) * t; },
      [](double, const Eigen::VectorXd& mu) { return mu(0); });
}

struct TimeSetup {
  Grid grid;
  double dt;
  int n_steps;
};

TimeSetup time_setup(int n_cells, double t_final, const std::vector<Eigen::VectorXd>& mus) {
  const Preset& p = preset("advSol");
  TimeSetup s{Grid::uniform(n_cells, p.x_left, p.x_right), 0.0, 0};
  std::vector<std::pair<Eigen::VectorXd, FluxSpec>> states;
  for (const Eigen::VectorXd& mu : mus) states.push_back({p.initial_state(mu, s.grid), p.flux_spec(mu)});
  const double dt0 = cfl_timestep(states, s.grid, 0.25);
  s.n_steps = static_cast<int>(std::ceil(t_final / dt0));
  s.dt = t_final / s.n_steps;
  return s;
}

} // namespace

TEST_CASE("collocation warm start hits its relative target") {
  const Grid g = Grid::uniform(120, 0.0, 1.0);
  Eigen::MatrixXd snaps(g.n_cells, 25);
  for (int j = 0; j < snaps.cols(); ++j)
    for (int i = 0; i < g.n_cells; ++i)
      snaps(i, j) = std::exp(-std::pow((g.centers[i] - 0.2 - 0.02 * j) / 0.07, 2));

  const EimSpace space = eim_init(snaps, 0.1, 5, g.dx);
  CHECK(space.n_extra == 5);
  CHECK(space.main_dim() >= 1);
  double worst = 0.0;
  for (int j = 0; j < snaps.cols(); ++j) {
    const double rel = space.interpolation_error(snaps.col(j), space.main_dim(), g.dx) /
                       (std::sqrt(g.dx) * snaps.col(j).norm());
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 0.1 * (1.0 + 1e-12));
}

TEST_CASE("moving-frame greedy converges on the smooth transport family") {
  const std::vector<Eigen::VectorXd> train = small_train_set();
  const TimeSetup s = time_setup(200, 0.3, train);

  GreedyConfig config;
  config.tolerance = 2e-3;
  config.n_max = 40;
  config.eim_max = 60;
  ReducedModel model = podei_greedy("advSol", RomMode::Ale, train, s.grid, s.dt, s.n_steps,
                                     exact_translation(), config);
  CHECK(model.status == GreedyStatus::Converged);
  CHECK(model.n_rb() >= 1);
  CHECK(model.n_eim() >= 1);
  CHECK_FALSE(model.history.empty());

  // The converged sweep leaves every training indicator below tolerance.
  for (const Eigen::VectorXd& mu : train) {
    const OnlineTrace trace = online_solve(model, mu);
    CHECK(trace.indicator <= config.tolerance);
  }

  // Dimensions recorded in the history never decrease.
  for (size_t i = 1; i < model.history.size(); ++i) {
    CHECK(model.history[i].n_rb >= model.history[i - 1].n_rb);
    CHECK(model.history[i].n_eim >= model.history[i - 1].n_eim);
  }
}

TEST_CASE("basis size cap stalls with a recorded reason") {
  const std::vector<Eigen::VectorXd> train = small_train_set();
  const TimeSetup s = time_setup(200, 0.3, train);

  GreedyConfig config;
  config.tolerance = 1e-12; // unreachable
  config.n_max = 3;
  config.eim_max = 400;
  config.patience = 1000;
  const ReducedModel model = podei_greedy("advSol", RomMode::Ale, train, s.grid, s.dt, s.n_steps,
                                          exact_translation(), config);
  CHECK(model.status == GreedyStatus::Stalled);
  CHECK(model.status_reason == "basis size limit reached");
}

TEST_CASE("collocation size cap stalls with a recorded reason") {
  const std::vector<Eigen::VectorXd> train = small_train_set();
  const TimeSetup s = time_setup(200, 0.3, train);

  GreedyConfig config;
  config.tolerance = 1e-12;
  config.eim_max = 8;
  config.patience = 1000;
  const ReducedModel model = podei_greedy("advSol", RomMode::Ale, train, s.grid, s.dt, s.n_steps,
                                          exact_translation(), config);
  CHECK(model.status == GreedyStatus::Stalled);
  CHECK(model.status_reason == "collocation size limit reached");
}

TEST_CASE("model bundles survive a save/load round trip") {
  const std::vector<Eigen::VectorXd> train = small_train_set();
  const TimeSetup s = time_setup(150, 0.2, train);

  GreedyConfig config;
  config.tolerance = 5e-3;
  config.n_max = 30;
  // Serializable calibration map: exact linear fit of theta = mu0 * t.
  CalibrationDataset data;
  for (const Eigen::VectorXd& mu : train)
    for (int k = 0; k < 27; ++k) {
      const double t = 0.3 * k / 26.0;
      data.add(t, mu, mu(0) * t);
    }
  std::shared_ptr<const CalibrationModel> calib = fit_polynomial(data, 2);

  const ReducedModel model =
      podei_greedy("advSol", RomMode::Ale, train, s.grid, s.dt, s.n_steps, calib, config);
  REQUIRE(model.status == GreedyStatus::Converged);

  std::stringstream buffer;
  model.save(buffer);
  const ReducedModel loaded = ReducedModel::load(buffer);
  CHECK(loaded.preset_name == model.preset_name);
  CHECK(loaded.mode == model.mode);
  CHECK(loaded.n_rb() == model.n_rb());
  CHECK(loaded.n_eim() == model.n_eim());
  CHECK(loaded.history.size() == model.history.size());

  const Eigen::VectorXd mu = train[1];
  const OnlineTrace a = online_solve(model, mu);
  const OnlineTrace b = online_solve(loaded, mu);
  CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(a.indicator == doctest::Approx(b.indicator).epsilon(1e-10));
}
