#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "alemor/calibration.hpp"
#include "alemor/errors.hpp"
#include "alemor/mlp.hpp"

using namespace alemor;

namespace {

// theta(t, mu) = mu2 + mu0 * t, the exactly-representable reference map.
CalibrationDataset linear_data(int n_mu, int n_t, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CalibrationDataset data;
  for (int i = 0; i < n_mu; ++i) {
    Eigen::VectorXd mu(3);
    mu << 2.0 * u01(rng), u01(rng), u01(rng);
    for (int k = 0; k < n_t; ++k) {
      const double t = k / static_cast<double>(n_t - 1);
      data.add(t, mu, mu(2) + mu(0) * t);
    }
  }
  return data;
}

} // namespace

TEST_CASE("polynomial s=2 recovers an exactly linear map") {
  CalibrationDataset train = linear_data(27, 4, 3);
  auto model = fit_polynomial(train, 2);
  CHECK(validation_error(*model, train) < 1e-10);

  CalibrationDataset fresh = linear_data(6, 7, 4);
  CHECK(validation_error(*model, fresh) < 1e-8);

  // Analytic time derivative equals mu0.
  Eigen::VectorXd mu(3);
  mu << 1.3, 0.4, 0.7;
  CHECK(model->theta(0.5, mu) == doctest::Approx(0.7 + 1.3 * 0.5).epsilon(1e-8));
  CHECK(model->theta_dot(0.31, mu) == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("polynomial fit rejects underdetermined systems") {
  CalibrationDataset tiny = linear_data(1, 3, 5);
  CHECK_THROWS_AS((void)fit_polynomial(tiny, 2), Error);
}

TEST_CASE("polynomial residual is orthogonal to the design space") {
  // Noisy data: the LSQ residual must have zero projection onto any fitted
  // polynomial of the same space; test via a coarse surrogate check that
  // refitting on the residuals yields (near) zero coefficients' prediction.
  std::mt19937 rng(17);
  std::normal_distribution<double> noise(0.0, 1e-2);
  CalibrationDataset data = linear_data(27, 4, 6);
  for (auto& s : data.samples) s.theta += noise(rng);
  auto model = fit_polynomial(data, 2);
  CalibrationDataset residuals = data;
  for (auto& s : residuals.samples) s.theta -= model->theta(s.t, s.mu);
  auto refit = fit_polynomial(residuals, 2);
  CHECK(validation_error(*refit, residuals) < 0.05); // residual barely reducible
  double refit_scale = 0.0;
  for (const auto& s : residuals.samples)
    refit_scale = std::max(refit_scale, std::abs(refit->theta(s.t, s.mu)));
  CHECK(refit_scale < 0.05);
}

TEST_CASE("piecewise linear reproduces training nodes and single-parameter data") {
  CalibrationDataset data = linear_data(5, 9, 7);
  auto model = fit_piecewise_linear(data);
  for (const auto& s : data.samples)
    CHECK(model->theta(s.t, s.mu) == doctest::Approx(s.theta).epsilon(1e-12));

  // Single training parameter: prediction is that trajectory for any mu.
  CalibrationDataset one = linear_data(1, 9, 8);
  auto single = fit_piecewise_linear(one);
  Eigen::VectorXd other(3);
  other << 0.1, 0.9, 0.2;
  const auto& s0 = one.samples[4];
  CHECK(single->theta(s0.t, other) == doctest::Approx(s0.theta).epsilon(1e-12));
}

TEST_CASE("piecewise linear interpolates linearly between parameters and times") {
  // theta = mu2 + mu0 t is affine in (mu, t), so pwl interpolation is exact
  // at interior points as well.
  CalibrationDataset data = linear_data(12, 11, 9);
  auto model = fit_piecewise_linear(data);
  CalibrationDataset probe = linear_data(4, 6, 10);
  CHECK(validation_error(*model, probe) < 1e-8);
  Eigen::VectorXd mu = probe.samples[0].mu;
  CHECK(model->theta_dot(0.4, mu) == doctest::Approx(mu(0)).epsilon(1e-5));
}

TEST_CASE("constant-theta data gives near-zero derivatives") {
  CalibrationDataset data = linear_data(27, 4, 11);
  for (auto& s : data.samples) s.theta = 0.37;
  auto poly = fit_polynomial(data, 2);
  auto pwl = fit_piecewise_linear(data);
  Eigen::VectorXd mu(3);
  mu << 1.0, 0.5, 0.5;
  CHECK(std::abs(poly->theta_dot(0.5, mu)) < 1e-8);
  CHECK(std::abs(pwl->theta_dot(0.5, mu)) < 1e-8);
}

TEST_CASE("mlp learns the linear map to feature-tracking accuracy") {
  // 10^4 samples on the exact linear map; the bar is the 5*dx calibration
  // gate at n=400 cells on a unit domain.
  CalibrationDataset train = linear_data(100, 100, 12);
  MlpFitOptions opt; // default training budget
  auto model = fit_mlp(train, opt);
  CalibrationDataset fresh = linear_data(10, 20, 13);
  const double dx = 1.0 / 400.0;
  CHECK(validation_error(*model, fresh) < 5.0 * dx);
}

TEST_CASE("mlp parameter gradient matches finite differences") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd X(5, 3);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = u(rng);
    y(i) = u(rng);
  }
  Mlp net(3, 4, 8, 42);
  const Eigen::VectorXd g = net.loss_gradient(X, y);
  Eigen::VectorXd p = net.parameters();
  const double h = 1e-6;
  double worst = 0.0;
  for (long k = 0; k < p.size(); k += 7) { // sample every 7th parameter
    Eigen::VectorXd pp = p;
    pp(k) += h;
    net.set_parameters(pp);
    const double up = net.loss(X, y);
    pp(k) -= 2.0 * h;
    net.set_parameters(pp);
    const double dn = net.loss(X, y);
    net.set_parameters(p);
    const double fd = (up - dn) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g(k)) / std::max(1e-8, std::abs(fd)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("mlp analytic time derivative matches finite differences") {
  CalibrationDataset train = linear_data(20, 20, 14);
  MlpFitOptions opt;
  opt.epochs = 50;
  auto model = fit_mlp(train, opt);
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd mu(3);
    mu << 2.0 * u01(rng), u01(rng), u01(rng);
    const double t = u01(rng);
    const double fd = (model->theta(t + h, mu) - model->theta(t - h, mu)) / (2.0 * h);
    const double an = model->theta_dot(t, mu);
    CHECK(std::abs(an - fd) / std::max(1e-8, std::abs(fd)) < 1e-4);
  }
}

TEST_CASE("noisy data: validation error is comparable to the noise level") {
  std::mt19937 rng(23);
  std::normal_distribution<double> noise(0.0, 1e-3);
  CalibrationDataset data = linear_data(10, 20, 16);
  for (auto& s : data.samples) s.theta += noise(rng);
  auto model = fit_polynomial(data, 2);
  const double err = validation_error(*model, data);
  CHECK(err > 1e-5);
  CHECK(err < 1e-2);
}

TEST_CASE("dataset and model serialization round-trips") {
  CalibrationDataset data = linear_data(27, 4, 18);
  std::stringstream ds;
  data.save(ds);
  CalibrationDataset back = CalibrationDataset::load(ds);
  REQUIRE(back.samples.size() == data.samples.size());
  CHECK(back.samples[7].theta == doctest::Approx(data.samples[7].theta));
  CHECK(back.n_params() == 3);

  Eigen::VectorXd mu(3);
  mu << 1.0, 0.5, 0.3;
  for (LearnerKind kind :
       {LearnerKind::PiecewiseLinear, LearnerKind::Polynomial, LearnerKind::Mlp}) {
    MlpFitOptions opt;
    opt.epochs = 5;
    auto model = fit_calibration(kind, data, 2, opt);
    std::stringstream ms;
    model->save(ms);
    auto loaded = load_calibration_model(ms);
    CHECK(loaded->kind() == model->kind());
    CHECK(loaded->theta(0.42, mu) == doctest::Approx(model->theta(0.42, mu)).epsilon(1e-12));
    CHECK(loaded->theta_dot(0.42, mu) ==
          doctest::Approx(model->theta_dot(0.42, mu)).epsilon(1e-9));
  }
}
