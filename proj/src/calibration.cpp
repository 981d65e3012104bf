#include "alemor/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/SVD>

#include "alemor/errors.hpp"
#include "alemor/mlp.hpp"

namespace alemor {

namespace {

constexpr double kConditionLimit = 1e12;

// Learner inputs are (mu_0 .. mu_{p-1}, t).
Eigen::VectorXd learner_input(const CalibrationSample& s) {
  Eigen::VectorXd z(s.mu.size() + 1);
  z.head(s.mu.size()) = s.mu;
  z(s.mu.size()) = s.t;
  return z;
}

struct Normalization {
  Eigen::VectorXd lo, hi;

  static Normalization from_data(const CalibrationDataset& data) {
    Normalization n;
    n.lo = learner_input(data.samples.front());
    n.hi = n.lo;
    for (const auto& s : data.samples) {
      const Eigen::VectorXd z = learner_input(s);
      n.lo = n.lo.cwiseMin(z);
      n.hi = n.hi.cwiseMax(z);
    }
    return n;
  }

  // Affine map of each coordinate onto [-1, 1]; constant coordinates map to 0.
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const {
    Eigen::VectorXd out(z.size());
    for (long i = 0; i < z.size(); ++i) {
      const double w = hi(i) - lo(i);
      out(i) = w > 0.0 ? 2.0 * (z(i) - lo(i)) / w - 1.0 : 0.0;
    }
    return out;
  }

  double scale(long i) const {
    const double w = hi(i) - lo(i);
    return w > 0.0 ? 2.0 / w : 0.0;
  }

  void save(std::ostream& out) const {
    out << lo.size() << "\n";
    for (long i = 0; i < lo.size(); ++i) out << lo(i) << " " << hi(i) << "\n";
  }

  static Normalization load(std::istream& in) {
    long n = 0;
    in >> n;
    Normalization norm;
    norm.lo.resize(n);
    norm.hi.resize(n);
    for (long i = 0; i < n; ++i) in >> norm.lo(i) >> norm.hi(i);
    return norm;
  }
};

double interp1(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
  if (t <= ts.front()) return ys.front();
  if (t >= ts.back()) return ys.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const size_t j = static_cast<size_t>(it - ts.begin());
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

/// Lazy interpolant over per-parameter theta trajectories: theta_hat(t, mu*)
/// combines the p+1 nearest training parameters with affine weights solving
/// sum_j alpha_j (mu_j, 1) = (mu*, 1) in the least-squares sense.
class PiecewiseLinearModel : public CalibrationModel {
public:
  struct Group {
    Eigen::VectorXd mu;
    std::vector<double> times;
    std::vector<double> thetas;
  };

  explicit PiecewiseLinearModel(std::vector<Group> groups) : groups_(std::move(groups)) {
    fd_step_ = 1e-6;
    for (const auto& g : groups_)
      for (size_t k = 1; k < g.times.size(); ++k)
        fd_step_ = std::max(fd_step_, 0.5 * (g.times[k] - g.times[k - 1]));
  }

  std::string kind() const override { return "piecewise-linear"; }

  double theta(double t, const Eigen::VectorXd& mu) const override {
    const int p = static_cast<int>(mu.size());
    const int q = std::min<int>(p + 1, static_cast<int>(groups_.size()));
    // q nearest training parameters
    std::vector<int> idx(groups_.size());
    for (size_t i = 0; i < groups_.size(); ++i) idx[i] = static_cast<int>(i);
    std::partial_sort(idx.begin(), idx.begin() + q, idx.end(), [&](int a, int b) {
      return (groups_[a].mu - mu).squaredNorm() < (groups_[b].mu - mu).squaredNorm();
    });

    // Affine weights with sum(alpha) = 1 enforced exactly by eliminating the
    // last weight; the remaining free weights solve a least-squares system.
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(q);
    alpha(q - 1) = 1.0;
    if (q > 1) {
      const Eigen::VectorXd& pivot = groups_[idx[q - 1]].mu;
      Eigen::MatrixXd B(p, q - 1);
      for (int j = 0; j < q - 1; ++j) B.col(j) = groups_[idx[j]].mu - pivot;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv(0) <= 0.0 || sv(0) / std::max(sv(sv.size() - 1), 1e-300) > kConditionLimit)
        flagged_ = true;
      const Eigen::VectorXd beta = svd.solve(mu - pivot);
      alpha.head(q - 1) = beta;
      alpha(q - 1) = 1.0 - beta.sum();
    }

    double value = 0.0;
    for (int j = 0; j < q; ++j)
      value += alpha(j) * interp1(groups_[idx[j]].times, groups_[idx[j]].thetas, t);
    return value;
  }

  double theta_dot(double t, const Eigen::VectorXd& mu) const override {
    const double h = fd_step_;
    return (theta(t + h, mu) - theta(t - h, mu)) / (2.0 * h);
  }

  bool flagged() const override { return flagged_; }

  void save(std::ostream& out) const override {
    out << std::setprecision(17);
    out << "# alemor-calibration-model v1\n";
    out << "piecewise-linear " << groups_.size() << " "
        << (groups_.empty() ? 0 : groups_.front().mu.size()) << "\n";
    for (const auto& g : groups_) {
      for (long i = 0; i < g.mu.size(); ++i) out << (i ? " " : "") << g.mu(i);
      out << "\n" << g.times.size() << "\n";
      for (size_t k = 0; k < g.times.size(); ++k)
        out << g.times[k] << " " << g.thetas[k] << "\n";
    }
  }

  static std::unique_ptr<PiecewiseLinearModel> load_body(std::istream& in) {
    size_t n_groups = 0;
    long p = 0;
    in >> n_groups >> p;
    std::vector<Group> groups(n_groups);
    for (auto& g : groups) {
      g.mu.resize(p);
      for (long i = 0; i < p; ++i) in >> g.mu(i);
      size_t n = 0;
      in >> n;
      g.times.resize(n);
      g.thetas.resize(n);
      for (size_t k = 0; k < n; ++k) in >> g.times[k] >> g.thetas[k];
    }
    if (!in) throw Error(ErrorCode::Config, "piecewise-linear model: truncated file");
    return std::make_unique<PiecewiseLinearModel>(std::move(groups));
  }

private:
  std::vector<Group> groups_;
  double fd_step_ = 1e-6;
  mutable bool flagged_ = false;
};

/// Least-squares polynomial with multi-indices bounded in the max norm,
/// fitted on inputs normalized to [-1, 1].
class PolynomialModel : public CalibrationModel {
public:
  PolynomialModel(int degree, Normalization norm, Eigen::VectorXd coeffs, bool flagged)
      : degree_(degree), norm_(std::move(norm)), coeffs_(std::move(coeffs)), flagged_(flagged) {}

  std::string kind() const override { return "polynomial"; }

  static long n_terms(int degree, long dims) {
    long n = 1;
    for (long i = 0; i < dims; ++i) n *= degree + 1;
    return n;
  }

  // Term j has exponent digits of j in base (degree+1), one per input.
  static double term(long j, int degree, const Eigen::VectorXd& z, int d_dim, double* dterm) {
    double value = 1.0;
    double deriv = 1.0;
    for (long i = 0; i < z.size(); ++i) {
      const int e = static_cast<int>(j % (degree + 1));
      j /= degree + 1;
      value *= std::pow(z(i), e);
      if (dterm) {
        if (i == d_dim)
          deriv *= e == 0 ? 0.0 : e * std::pow(z(i), e - 1);
        else
          deriv *= std::pow(z(i), e);
      }
    }
    if (dterm) *dterm = deriv;
    return value;
  }

  double theta(double t, const Eigen::VectorXd& mu) const override {
    Eigen::VectorXd z(mu.size() + 1);
    z.head(mu.size()) = mu;
    z(mu.size()) = t;
    z = norm_.apply(z);
    double value = 0.0;
    for (long j = 0; j < coeffs_.size(); ++j) value += coeffs_(j) * term(j, degree_, z, -1, nullptr);
    return value;
  }

  double theta_dot(double t, const Eigen::VectorXd& mu) const override {
    Eigen::VectorXd z(mu.size() + 1);
    z.head(mu.size()) = mu;
    z(mu.size()) = t;
    z = norm_.apply(z);
    const int t_dim = static_cast<int>(mu.size());
    double value = 0.0;
    for (long j = 0; j < coeffs_.size(); ++j) {
      double d = 0.0;
      (void)term(j, degree_, z, t_dim, &d);
      value += coeffs_(j) * d;
    }
    return value * norm_.scale(t_dim);
  }

  bool flagged() const override { return flagged_; }

  void save(std::ostream& out) const override {
    out << std::setprecision(17);
    out << "# alemor-calibration-model v1\n";
    out << "polynomial " << degree_ << " " << (flagged_ ? 1 : 0) << "\n";
    norm_.save(out);
    out << coeffs_.size() << "\n";
    for (long j = 0; j < coeffs_.size(); ++j) out << coeffs_(j) << "\n";
  }

  static std::unique_ptr<PolynomialModel> load_body(std::istream& in) {
    int degree = 0, flagged = 0;
    in >> degree >> flagged;
    Normalization norm = Normalization::load(in);
    long n = 0;
    in >> n;
    Eigen::VectorXd coeffs(n);
    for (long j = 0; j < n; ++j) in >> coeffs(j);
    if (!in) throw Error(ErrorCode::Config, "polynomial model: truncated file");
    return std::make_unique<PolynomialModel>(degree, std::move(norm), std::move(coeffs),
                                             flagged != 0);
  }

private:
  int degree_;
  Normalization norm_;
  Eigen::VectorXd coeffs_;
  bool flagged_;
};

/// Four tanh hidden layers of width 8, tanh output affinely rescaled to the
/// observed theta range; inputs normalized to [-1, 1].
class MlpModel : public CalibrationModel {
public:
  MlpModel(Mlp net, Normalization norm, double center, double half_range)
      : net_(std::move(net)), norm_(std::move(norm)), center_(center), half_range_(half_range) {}

  std::string kind() const override { return "mlp"; }

  double theta(double t, const Eigen::VectorXd& mu) const override {
    Eigen::VectorXd z(mu.size() + 1);
    z.head(mu.size()) = mu;
    z(mu.size()) = t;
    return center_ + half_range_ * net_.forward(norm_.apply(z));
  }

  double theta_dot(double t, const Eigen::VectorXd& mu) const override {
    Eigen::VectorXd z(mu.size() + 1);
    z.head(mu.size()) = mu;
    z(mu.size()) = t;
    const long t_dim = mu.size();
    const Eigen::VectorXd g = net_.input_gradient(norm_.apply(z));
    return half_range_ * g(t_dim) * norm_.scale(t_dim);
  }

  void save(std::ostream& out) const override {
    out << std::setprecision(17);
    out << "# alemor-calibration-model v1\n";
    out << "mlp-scaled " << center_ << " " << half_range_ << "\n";
    norm_.save(out);
    net_.save(out);
  }

  static std::unique_ptr<MlpModel> load_body(std::istream& in) {
    double center = 0.0, half_range = 0.0;
    in >> center >> half_range;
    Normalization norm = Normalization::load(in);
    Mlp net = Mlp::load(in);
    return std::make_unique<MlpModel>(std::move(net), std::move(norm), center, half_range);
  }

private:
  Mlp net_;
  Normalization norm_;
  double center_;
  double half_range_;
};

} // namespace

int CalibrationDataset::n_params() const {
  return samples.empty() ? 0 : static_cast<int>(samples.front().mu.size());
}

void CalibrationDataset::add(double t, const Eigen::VectorXd& mu, double theta) {
  samples.push_back({t, mu, theta});
}

void CalibrationDataset::save(std::ostream& out) const {
  out << "# alemor-calibration v1\n";
  out << "# n_params=" << n_params() << "\n";
  out << std::setprecision(17);
  for (const auto& s : samples) {
    out << s.t;
    for (long i = 0; i < s.mu.size(); ++i) out << "," << s.mu(i);
    out << "," << s.theta << "\n";
  }
}

CalibrationDataset CalibrationDataset::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# alemor-calibration v1", 0) != 0)
    throw Error(ErrorCode::Config, "not an alemor-calibration v1 file");
  long p = -1;
  if (std::getline(in, line) && line.rfind("# n_params=", 0) == 0)
    p = std::stol(line.substr(11));
  if (p < 0) throw Error(ErrorCode::Config, "calibration dataset: missing n_params");

  CalibrationDataset data;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (static_cast<long>(row.size()) != p + 2)
      throw Error(ErrorCode::Config, "calibration dataset: malformed row");
    CalibrationSample s;
    s.t = row.front();
    s.mu = Eigen::Map<Eigen::VectorXd>(row.data() + 1, p);
    s.theta = row.back();
    data.samples.push_back(std::move(s));
  }
  return data;
}

void CalibrationDataset::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot open for writing: " + path);
  save(out);
}

CalibrationDataset CalibrationDataset::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open: " + path);
  return load(in);
}

void CalibrationModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot open for writing: " + path);
  save(out);
}

void FunctionCalibration::save(std::ostream&) const {
  throw Error(ErrorCode::Config, "analytic calibration maps cannot be serialized");
}

std::unique_ptr<CalibrationModel> fit_piecewise_linear(const CalibrationDataset& data) {
  if (data.samples.empty())
    throw Error(ErrorCode::Config, "piecewise-linear fit: empty dataset");
  // Group by parameter vector, each group sorted in time.
  std::map<std::vector<double>, PiecewiseLinearModel::Group> groups;
  for (const auto& s : data.samples) {
    std::vector<double> key(s.mu.data(), s.mu.data() + s.mu.size());
    auto& g = groups[key];
    g.mu = s.mu;
    g.times.push_back(s.t);
    g.thetas.push_back(s.theta);
  }
  std::vector<PiecewiseLinearModel::Group> list;
  for (auto& [key, g] : groups) {
    std::vector<size_t> order(g.times.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return g.times[a] < g.times[b]; });
    PiecewiseLinearModel::Group sorted;
    sorted.mu = g.mu;
    for (size_t i : order) {
      sorted.times.push_back(g.times[i]);
      sorted.thetas.push_back(g.thetas[i]);
    }
    list.push_back(std::move(sorted));
  }
  return std::make_unique<PiecewiseLinearModel>(std::move(list));
}

std::unique_ptr<CalibrationModel> fit_polynomial(const CalibrationDataset& data, int degree) {
  if (data.samples.empty()) throw Error(ErrorCode::Config, "polynomial fit: empty dataset");
  if (degree < 0) throw Error(ErrorCode::Config, "polynomial fit: negative degree");
  const long dims = data.n_params() + 1;
  const long n_terms = PolynomialModel::n_terms(degree, dims);
  const long n = static_cast<long>(data.samples.size());
  if (n < n_terms)
    throw Error(ErrorCode::Config, "polynomial fit: " + std::to_string(n) + " samples for " +
                                       std::to_string(n_terms) + " coefficients");

  const Normalization norm = Normalization::from_data(data);
  Eigen::MatrixXd A(n, n_terms);
  Eigen::VectorXd rhs(n);
  for (long i = 0; i < n; ++i) {
    const Eigen::VectorXd z = norm.apply(learner_input(data.samples[i]));
    for (long j = 0; j < n_terms; ++j) A(i, j) = PolynomialModel::term(j, degree, z, -1, nullptr);
    rhs(i) = data.samples[i].theta;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const bool flagged =
      sv(0) <= 0.0 || sv(0) / std::max(sv(sv.size() - 1), 1e-300) > kConditionLimit;
  return std::make_unique<PolynomialModel>(degree, norm, svd.solve(rhs), flagged);
}

std::unique_ptr<CalibrationModel> fit_mlp(const CalibrationDataset& data,
                                          const MlpFitOptions& options) {
  if (data.samples.empty()) throw Error(ErrorCode::Config, "mlp fit: empty dataset");
  const long n = static_cast<long>(data.samples.size());
  const long dims = data.n_params() + 1;
  const Normalization norm = Normalization::from_data(data);

  double lo = data.samples.front().theta, hi = lo;
  for (const auto& s : data.samples) {
    lo = std::min(lo, s.theta);
    hi = std::max(hi, s.theta);
  }
  const double center = 0.5 * (lo + hi);
  // Targets land in [-0.8, 0.8], safely inside the tanh range.
  const double half_range = std::max(0.5 * (hi - lo) / 0.8, 1e-12);

  Eigen::MatrixXd X(n, dims);
  Eigen::VectorXd y(n);
  for (long i = 0; i < n; ++i) {
    X.row(i) = norm.apply(learner_input(data.samples[i])).transpose();
    y(i) = (data.samples[i].theta - center) / half_range;
  }

  Mlp net(static_cast<int>(dims), 4, 8, options.seed);
  net.train(X, y, options.epochs, options.batch_size, options.learning_rate, options.seed + 1);
  if (!std::isfinite(net.loss(X, y)))
    throw Error(ErrorCode::Numeric, "mlp fit diverged (non-finite loss)");
  return std::make_unique<MlpModel>(std::move(net), norm, center, half_range);
}

std::unique_ptr<CalibrationModel> fit_calibration(LearnerKind kind, const CalibrationDataset& data,
                                                  int poly_degree, const MlpFitOptions& options) {
  switch (kind) {
    case LearnerKind::PiecewiseLinear: return fit_piecewise_linear(data);
    case LearnerKind::Polynomial: return fit_polynomial(data, poly_degree);
    case LearnerKind::Mlp: return fit_mlp(data, options);
  }
  throw Error(ErrorCode::Config, "unknown learner kind");
}

std::unique_ptr<CalibrationModel> load_calibration_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# alemor-calibration-model v1", 0) != 0)
    throw Error(ErrorCode::Config, "not an alemor-calibration-model v1 file");
  std::string kind;
  in >> kind;
  if (kind == "piecewise-linear") return PiecewiseLinearModel::load_body(in);
  if (kind == "polynomial") return PolynomialModel::load_body(in);
  if (kind == "mlp-scaled") return MlpModel::load_body(in);
  throw Error(ErrorCode::Config, "unknown calibration model kind: " + kind);
}

std::unique_ptr<CalibrationModel> load_calibration_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open: " + path);
  return load_calibration_model(in);
}

double validation_error(const CalibrationModel& model, const CalibrationDataset& data) {
  double worst = 0.0;
  for (const auto& s : data.samples)
    worst = std::max(worst, std::abs(model.theta(s.t, s.mu) - s.theta));
  return worst;
}

} // namespace alemor
