#include "alemor/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "alemor/errors.hpp"

namespace alemor {

Mlp::Mlp(int n_inputs, int n_hidden_layers, int width, unsigned seed) : n_inputs_(n_inputs) {
  if (n_inputs < 1 || n_hidden_layers < 1 || width < 1)
    throw Error(ErrorCode::Config, "Mlp: invalid architecture");
  std::mt19937 rng(seed);
  auto init_layer = [&](int out, int in) {
    const double r = std::sqrt(6.0 / (in + out)); // Glorot uniform
    std::uniform_real_distribution<double> u(-r, r);
    Eigen::MatrixXd W(out, in);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) W(i, j) = u(rng);
    W_.push_back(W);
    b_.push_back(Eigen::VectorXd::Zero(out));
  };
  init_layer(width, n_inputs);
  for (int l = 1; l < n_hidden_layers; ++l) init_layer(width, width);
  init_layer(1, width);
}

double Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = x;
  for (size_t l = 0; l < W_.size(); ++l) a = (W_[l] * a + b_[l]).array().tanh();
  return a(0);
}

Eigen::VectorXd Mlp::input_gradient(const Eigen::VectorXd& x) const {
  std::vector<Eigen::VectorXd> acts;
  Eigen::VectorXd a = x;
  for (size_t l = 0; l < W_.size(); ++l) {
    a = (W_[l] * a + b_[l]).array().tanh();
    acts.push_back(a);
  }
  // Back-propagate d output / d z_l, starting from the output activation.
  Eigen::VectorXd delta =
      (1.0 - acts.back().array().square()).matrix(); // scalar layer, size 1
  for (size_t l = W_.size(); l-- > 1;) {
    delta = (W_[l].transpose() * delta).cwiseProduct(
        (1.0 - acts[l - 1].array().square()).matrix());
  }
  return W_[0].transpose() * delta;
}

void Mlp::accumulate_gradient(const Eigen::VectorXd& x, double y,
                              std::vector<Eigen::MatrixXd>& gW,
                              std::vector<Eigen::VectorXd>& gb) const {
  std::vector<Eigen::VectorXd> acts;
  Eigen::VectorXd a = x;
  for (size_t l = 0; l < W_.size(); ++l) {
    a = (W_[l] * a + b_[l]).array().tanh();
    acts.push_back(a);
  }
  const double err = acts.back()(0) - y;
  Eigen::VectorXd delta =
      2.0 * err * (1.0 - acts.back().array().square()).matrix();
  for (size_t l = W_.size(); l-- > 0;) {
    const Eigen::VectorXd& input = l == 0 ? x : acts[l - 1];
    gW[l] += delta * input.transpose();
    gb[l] += delta;
    if (l > 0)
      delta = (W_[l].transpose() * delta)
                  .cwiseProduct((1.0 - acts[l - 1].array().square()).matrix());
  }
}

double Mlp::loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const {
  double s = 0.0;
  for (long i = 0; i < X.rows(); ++i) {
    const double d = forward(X.row(i).transpose()) - y(i);
    s += d * d;
  }
  return s / static_cast<double>(X.rows());
}

Eigen::VectorXd Mlp::loss_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const {
  std::vector<Eigen::MatrixXd> gW;
  std::vector<Eigen::VectorXd> gb;
  for (size_t l = 0; l < W_.size(); ++l) {
    gW.push_back(Eigen::MatrixXd::Zero(W_[l].rows(), W_[l].cols()));
    gb.push_back(Eigen::VectorXd::Zero(b_[l].size()));
  }
  for (long i = 0; i < X.rows(); ++i) accumulate_gradient(X.row(i).transpose(), y(i), gW, gb);
  Eigen::VectorXd flat(n_parameters());
  long k = 0;
  const double scale = 1.0 / static_cast<double>(X.rows());
  for (size_t l = 0; l < W_.size(); ++l) {
    for (long j = 0; j < gW[l].size(); ++j) flat(k++) = scale * gW[l].data()[j];
    for (long j = 0; j < gb[l].size(); ++j) flat(k++) = scale * gb[l](j);
  }
  return flat;
}

void Mlp::train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int epochs, int batch_size,
                double learning_rate, unsigned seed) {
  const long n = X.rows();
  if (n == 0) throw Error(ErrorCode::Config, "Mlp::train: empty dataset");
  std::mt19937 rng(seed);
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);

  // Adam with a cosine-decayed step size: plain constant-rate minibatch
  // descent stalls at a noise floor well above the calibration gate.
  std::vector<Eigen::MatrixXd> gW, mW, vW;
  std::vector<Eigen::VectorXd> gb, mb, vb;
  for (size_t l = 0; l < W_.size(); ++l) {
    gW.push_back(Eigen::MatrixXd::Zero(W_[l].rows(), W_[l].cols()));
    gb.push_back(Eigen::VectorXd::Zero(b_[l].size()));
    mW.push_back(gW.back());
    vW.push_back(gW.back());
    mb.push_back(gb.back());
    vb.push_back(gb.back());
  }
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long step_count = 0;

  for (int e = 0; e < epochs; ++e) {
    const double lr = learning_rate *
                      std::max(0.5 * (1.0 + std::cos(M_PI * e / std::max(epochs - 1, 1))), 0.01);
    std::shuffle(order.begin(), order.end(), rng);
    for (long start = 0; start < n; start += batch_size) {
      const long stop = std::min(start + batch_size, n);
      for (size_t l = 0; l < W_.size(); ++l) {
        gW[l].setZero();
        gb[l].setZero();
      }
      for (long i = start; i < stop; ++i)
        accumulate_gradient(X.row(order[i]).transpose(), y(order[i]), gW, gb);
      const double scale = 1.0 / static_cast<double>(stop - start);
      ++step_count;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
      for (size_t l = 0; l < W_.size(); ++l) {
        const Eigen::MatrixXd gWl = scale * gW[l];
        const Eigen::VectorXd gbl = scale * gb[l];
        mW[l] = beta1 * mW[l] + (1.0 - beta1) * gWl;
        vW[l] = beta2 * vW[l] + (1.0 - beta2) * gWl.array().square().matrix();
        mb[l] = beta1 * mb[l] + (1.0 - beta1) * gbl;
        vb[l] = beta2 * vb[l] + (1.0 - beta2) * gbl.array().square().matrix();
        W_[l].array() -= lr * (mW[l].array() / c1) / ((vW[l].array() / c2).sqrt() + eps);
        b_[l].array() -= lr * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + eps);
      }
    }
  }
}

long Mlp::n_parameters() const {
  long n = 0;
  for (size_t l = 0; l < W_.size(); ++l) n += W_[l].size() + b_[l].size();
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(n_parameters());
  long k = 0;
  for (size_t l = 0; l < W_.size(); ++l) {
    for (long j = 0; j < W_[l].size(); ++j) flat(k++) = W_[l].data()[j];
    for (long j = 0; j < b_[l].size(); ++j) flat(k++) = b_[l](j);
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != n_parameters())
    throw Error(ErrorCode::Config, "Mlp::set_parameters: wrong length");
  long k = 0;
  for (size_t l = 0; l < W_.size(); ++l) {
    for (long j = 0; j < W_[l].size(); ++j) W_[l].data()[j] = flat(k++);
    for (long j = 0; j < b_[l].size(); ++j) b_[l](j) = flat(k++);
  }
}

void Mlp::save(std::ostream& out) const {
  out << std::setprecision(17);
  out << "mlp " << n_inputs_ << " " << W_.size() - 1 << " " << W_[0].rows() << "\n";
  const Eigen::VectorXd p = parameters();
  for (long i = 0; i < p.size(); ++i) out << p(i) << "\n";
}

Mlp Mlp::load(std::istream& in) {
  std::string tag;
  int n_in = 0, n_hidden = 0, width = 0;
  in >> tag >> n_in >> n_hidden >> width;
  if (tag != "mlp" || !in) throw Error(ErrorCode::Config, "Mlp::load: bad header");
  Mlp net(n_in, n_hidden, width, 0);
  Eigen::VectorXd p(net.n_parameters());
  for (long i = 0; i < p.size(); ++i) in >> p(i);
  if (!in) throw Error(ErrorCode::Config, "Mlp::load: truncated parameters");
  net.set_parameters(p);
  return net;
}

} // namespace alemor
