#ifndef ALEMOR_MLP_HPP
#define ALEMOR_MLP_HPP

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace alemor {

/// Small fully-connected network with tanh on every layer, including the
/// scalar output (callers rescale the (-1,1) output to their target range).
/// Self-contained: plain SGD training, analytic input gradients, and a flat
/// parameter vector with the exact loss gradient for derivative checks.
class Mlp {
public:
  Mlp(int n_inputs, int n_hidden_layers, int width, unsigned seed);

  int n_inputs() const { return n_inputs_; }

  /// Network output in (-1, 1).
  double forward(const Eigen::VectorXd& x) const;

  /// d forward / d x (all input components).
  Eigen::VectorXd input_gradient(const Eigen::VectorXd& x) const;

  /// Mean squared error of forward() against targets y; rows of X are samples.
  double loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const;

  /// Gradient of loss() with respect to the flat parameter vector.
  Eigen::VectorXd loss_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) const;

  /// Minibatch SGD on the mean squared error.
  void train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int epochs, int batch_size,
             double learning_rate, unsigned seed);

  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  long n_parameters() const;

  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);

private:
  // Gradient of the per-sample squared error, accumulated into grads.
  void accumulate_gradient(const Eigen::VectorXd& x, double y, std::vector<Eigen::MatrixXd>& gW,
                           std::vector<Eigen::VectorXd>& gb) const;

  int n_inputs_ = 1;
  std::vector<Eigen::MatrixXd> W_; // layer l: W_[l] is (out x in)
  std::vector<Eigen::VectorXd> b_;
};

} // namespace alemor

#endif
