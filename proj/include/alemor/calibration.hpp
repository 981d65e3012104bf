#ifndef ALEMOR_CALIBRATION_HPP
#define ALEMOR_CALIBRATION_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alemor/presets.hpp"

namespace alemor {

/// One detected calibration point: snapshot time, parameter vector, theta.
struct CalibrationSample {
  double t = 0.0;
  Eigen::VectorXd mu;
  double theta = 0.0;
};

struct CalibrationDataset {
  std::vector<CalibrationSample> samples;

  int n_params() const;
  void add(double t, const Eigen::VectorXd& mu, double theta);

  /// CSV persistence: `t,mu...,theta` rows under a versioned header.
  void save(std::ostream& out) const;
  static CalibrationDataset load(std::istream& in);
  void save_file(const std::string& path) const;
  static CalibrationDataset load_file(const std::string& path);
};

/// Learned (or analytic) regression map theta_hat(t, mu) with a time
/// derivative, the grid-speed ingredient of the calibrated formulation.
class CalibrationModel {
public:
  virtual ~CalibrationModel() = default;

  virtual std::string kind() const = 0;
  virtual double theta(double t, const Eigen::VectorXd& mu) const = 0;
  virtual double theta_dot(double t, const Eigen::VectorXd& mu) const = 0;

  /// Diagnostic: the fit hit an ill-conditioned or rank-deficient system.
  virtual bool flagged() const { return false; }

  virtual void save(std::ostream& out) const = 0;
  void save_file(const std::string& path) const;
};

struct MlpFitOptions {
  int epochs = 2000;
  int batch_size = 32;
  double learning_rate = 1e-2;
  unsigned seed = 42;
};

std::unique_ptr<CalibrationModel> fit_piecewise_linear(const CalibrationDataset& data);
std::unique_ptr<CalibrationModel> fit_polynomial(const CalibrationDataset& data, int degree);
std::unique_ptr<CalibrationModel> fit_mlp(const CalibrationDataset& data,
                                          const MlpFitOptions& options);
std::unique_ptr<CalibrationModel> fit_calibration(LearnerKind kind, const CalibrationDataset& data,
                                                  int poly_degree,
                                                  const MlpFitOptions& options = {});

std::unique_ptr<CalibrationModel> load_calibration_model(std::istream& in);
std::unique_ptr<CalibrationModel> load_calibration_model_file(const std::string& path);

/// Max over the dataset of |theta_hat - theta|.
double validation_error(const CalibrationModel& model, const CalibrationDataset& data);

/// Analytic map wrapper, handy for exact-calibration runs and tests.
/// Not serializable.
class FunctionCalibration : public CalibrationModel {
public:
  using Map = std::function<double(double, const Eigen::VectorXd&)>;
  FunctionCalibration(Map theta, Map theta_dot)
      : theta_(std::move(theta)), theta_dot_(std::move(theta_dot)) {}

  std::string kind() const override { return "function"; }
  double theta(double t, const Eigen::VectorXd& mu) const override { return theta_(t, mu); }
  double theta_dot(double t, const Eigen::VectorXd& mu) const override {
    return theta_dot_(t, mu);
  }
  void save(std::ostream&) const override;

private:
  Map theta_;
  Map theta_dot_;
};

} // namespace alemor

#endif
