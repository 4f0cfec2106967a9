#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qovae::bo {

struct GpOptions {
  std::vector<double> length_scales;  // empty: 13 log-spaced values on [0.1, 10]
  std::vector<double> signal_vars{0.1, 1.0, 10.0};
  double noise_var = 1e-4;
  std::size_t max_points = 2000;
  std::uint64_t seed = 1;
};

/// Exact GP regression with an RBF kernel on centered targets.
/// Hyperparameters are picked by grid search on the log marginal likelihood.
class GpModel {
 public:
  /// Z holds one input per column. Subsamples to `max_points` when larger,
  /// keeping the best quarter by target and drawing the rest at random.
  static GpModel fit(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const GpOptions& opts = {});
  /// Fit with fixed hyperparameters.
  static GpModel fit_fixed(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double length_scale, double signal_var,
                           double noise_var);

  struct Prediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;  // latent function variance, clipped at 0
  };
  [[nodiscard]] Prediction predict(const Eigen::MatrixXd& Zs) const;
  [[nodiscard]] std::pair<double, double> predict(const Eigen::VectorXd& z) const;

  [[nodiscard]] double length_scale() const { return length_; }
  [[nodiscard]] double signal_var() const { return signal_; }
  [[nodiscard]] double noise_var() const { return noise_; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] double log_marginal_likelihood() const { return lml_; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(Z_.cols()); }

 private:
  Eigen::MatrixXd Z_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double y_mean_ = 0.0;
  double length_ = 1.0, signal_ = 1.0, noise_ = 1e-4, jitter_ = 0.0;
  double lml_ = 0.0;
};

/// k(a_i, b_j) = signal_var * exp(-|a_i - b_j|^2 / (2 l^2)); inputs are columns.
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double length_scale, double signal_var);

/// (mu - best) Phi(u) + sigma phi(u), u = (mu - best) / sigma; 0 when sigma < 1e-12.
double expected_improvement(double mean, double sigma, double best);

}  // namespace qovae::bo
