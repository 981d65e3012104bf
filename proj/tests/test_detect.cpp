#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alemor/detect.hpp"
#include "alemor/fom.hpp"
#include "alemor/presets.hpp"

using namespace alemor;

namespace {

Trajectory single_snapshot(const Eigen::VectorXd& u) {
  Trajectory t;
  t.times = {0.0};
  t.states.resize(1, u.size());
  t.states.row(0) = u.transpose();
  return t;
}

} // namespace

TEST_CASE("argmax tracks an advected Gaussian peak within a cell") {
  const Preset& p = preset("advSol");
  const Grid g = Grid::uniform(400, 0.0, 1.0);
  Eigen::Vector3d mu(1.0, 0.0, 0.5);
  const Eigen::VectorXd u0 = p.initial_state(mu, g);
  const double dt0 = cfl_timestep({{u0, p.flux_spec(mu)}}, g, 0.25);
  const double T = 0.3;
  const int K = static_cast<int>(std::ceil(T / dt0));
  Trajectory traj = solve_fom(u0, mu, p.flux_spec(mu), p.boundary(mu), g, T / K, K);

  auto theta = detect_theta(DetectorKind::ArgMax, traj, g, true);
  const double x0 = 0.2 - 0.1 * mu(2);
  for (int k = 0; k <= K; k += K / 10) {
    const double exact = x0 + mu(0) * traj.times[k]; // unwrapped position
    CHECK(std::abs(theta[k] - exact) < g.dx);
  }
}

TEST_CASE("steepest point finds a step interface with sub-cell accuracy") {
  const Grid g = Grid::uniform(100, 0.0, 1.0);
  Eigen::VectorXd u(100);
  for (int i = 0; i < 100; ++i) u(i) = g.centers[i] < 0.4 ? 1.0 : 0.0;
  auto theta = detect_theta(DetectorKind::SteepestPoint, single_snapshot(u), g, false);
  CHECK(std::abs(theta[0] - 0.4) <= g.dx);
}

TEST_CASE("steepest descent ignores the ascending side") {
  const Grid g = Grid::uniform(200, 0.0, 1.0);
  Eigen::VectorXd u(200);
  // Sawtooth: gentle rise to x=0.7, sharp drop after.
  for (int i = 0; i < 200; ++i) {
    const double x = g.centers[i];
    u(i) = x < 0.7 ? x / 0.7 : 1.0 - (x - 0.7) / 0.05;
  }
  auto theta = detect_theta(DetectorKind::SteepestDescent, single_snapshot(u), g, true);
  CHECK(theta[0] > 0.69);
  CHECK(theta[0] < 0.76);
}

TEST_CASE("zero crossing: sub-cell interpolation and midpoint preference") {
  const Grid g = Grid::uniform(100, 0.0, 1.0);
  Eigen::VectorXd u(100);
  // Crossings at x = 0.25 and x = 0.55; the first snapshot picks the one
  // nearest the domain midpoint.
  for (int i = 0; i < 100; ++i) {
    const double x = g.centers[i];
    u(i) = (x - 0.25) * (x - 0.55);
  }
  // u >= 0 outside (0.25, 0.55): sign changes at both roots.
  auto theta = detect_theta(DetectorKind::ZeroCrossing, single_snapshot(u), g, false);
  CHECK(std::abs(theta[0] - 0.55) < g.dx);
}

TEST_CASE("degenerate features raise errors naming the time index") {
  const Grid g = Grid::uniform(50, 0.0, 1.0);
  Eigen::VectorXd flat = Eigen::VectorXd::Constant(50, 1.0);
  for (DetectorKind d : {DetectorKind::ArgMax, DetectorKind::ArgMin, DetectorKind::SteepestPoint,
                         DetectorKind::SteepestDescent, DetectorKind::ZeroCrossing}) {
    try {
      (void)detect_theta(d, single_snapshot(flat), g, true);
      FAIL("expected an error for a featureless snapshot");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("time index 0") != std::string::npos);
    }
  }
}

TEST_CASE("periodic unwrap keeps the sequence continuous past the seam") {
  const Grid g = Grid::uniform(100, 0.0, 1.0);
  const int K = 40;
  Trajectory traj;
  traj.times.resize(K + 1);
  traj.states.resize(K + 1, g.n_cells);
  for (int k = 0; k <= K; ++k) {
    traj.times[k] = 0.05 * k;
    const double c = 0.8 + 0.05 * k; // peak crosses x=1 and re-enters
    for (int i = 0; i < g.n_cells; ++i) {
      double d = g.centers[i] - c;
      d -= std::round(d); // periodic distance
      traj.states(k, i) = std::exp(-200.0 * d * d);
    }
  }
  auto theta = detect_theta(DetectorKind::ArgMax, traj, g, true);
  for (int k = 1; k <= K; ++k) {
    CHECK(std::abs(theta[k] - theta[k - 1] - 0.05) <= 2.0 * g.dx);
  }
  CHECK(theta[K] > 1.5); // unwrapped, not folded back into [0,1)
}
