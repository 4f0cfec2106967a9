#include "qovae/bo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qovae::bo {

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double length_scale, double signal_var) {
  const Eigen::VectorXd an = A.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd bn = B.colwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * A.transpose() * B;
  d2.colwise() += an;
  d2.rowwise() += bn;
  const double inv = -0.5 / (length_scale * length_scale);
  return signal_var * (d2.cwiseMax(0.0) * inv).array().exp().matrix();
}

double expected_improvement(double mean, double sigma, double best) {
  if (sigma < 1e-12) return 0.0;
  const double u = (mean - best) / sigma;
  const double cdf = 0.5 * std::erfc(-u / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, (mean - best) * cdf + sigma * pdf);
}

GpModel GpModel::fit_fixed(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, double length_scale, double signal_var,
                           double noise_var) {
  if (Z.cols() < 2 || Z.cols() != y.size()) throw std::invalid_argument("gp: need at least 2 points and matching targets");
  GpModel m;
  m.Z_ = Z;
  m.length_ = length_scale;
  m.signal_ = signal_var;
  m.noise_ = noise_var;
  m.y_mean_ = y.mean();
  const Eigen::VectorXd yc = y.array() - m.y_mean_;
  const Eigen::MatrixXd K = rbf_kernel(Z, Z, length_scale, signal_var);
  const auto n = Z.cols();
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd Kn = K;
    Kn.diagonal().array() += noise_var + jitter;
    m.chol_.compute(Kn);
    if (m.chol_.info() == Eigen::Success) break;
    jitter = jitter == 0.0 ? 1e-8 : jitter * 10.0;
    if (jitter > 1e-2) throw std::runtime_error("gp: kernel matrix not positive definite after jitter");
  }
  m.jitter_ = jitter;
  m.alpha_ = m.chol_.solve(yc);
  const Eigen::MatrixXd L = m.chol_.matrixL();
  m.lml_ = -0.5 * yc.dot(m.alpha_) - L.diagonal().array().log().sum() -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  return m;
}

GpModel GpModel::fit(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, const GpOptions& opts) {
  if (Z.cols() != y.size()) throw std::invalid_argument("gp: size mismatch");
  Eigen::MatrixXd Zs = Z;
  Eigen::VectorXd ys = y;
  const std::size_t n = static_cast<std::size_t>(Z.cols());
  if (n > opts.max_points) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return y(static_cast<Eigen::Index>(a)) > y(static_cast<Eigen::Index>(b));
    });
    const std::size_t keep_best = opts.max_points / 4;
    std::mt19937_64 rng(opts.seed);
    std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(keep_best), order.end(), rng);
    order.resize(opts.max_points);
    Zs.resize(Z.rows(), static_cast<Eigen::Index>(opts.max_points));
    ys.resize(static_cast<Eigen::Index>(opts.max_points));
    for (std::size_t i = 0; i < order.size(); ++i) {
      Zs.col(static_cast<Eigen::Index>(i)) = Z.col(static_cast<Eigen::Index>(order[i]));
      ys(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(order[i]));
    }
  }
  std::vector<double> lengths = opts.length_scales;
  if (lengths.empty()) {
    for (int i = 0; i < 13; ++i) lengths.push_back(0.1 * std::pow(100.0, i / 12.0));
  }
  GpModel best;
  double best_lml = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (double l : lengths) {
    for (double s : opts.signal_vars) {
      GpModel m;
      try {
        m = fit_fixed(Zs, ys, l, s, opts.noise_var);
      } catch (const std::runtime_error&) {
        continue;
      }
      if (!have || m.lml_ > best_lml) {
        best_lml = m.lml_;
        best = std::move(m);
        have = true;
      }
    }
  }
  if (!have) throw std::runtime_error("gp: no hyperparameter setting gave a positive definite kernel");
  return best;
}

GpModel::Prediction GpModel::predict(const Eigen::MatrixXd& Zs) const {
  const Eigen::MatrixXd Ks = rbf_kernel(Z_, Zs, length_, signal_);
  Prediction p;
  p.mean = (Ks.transpose() * alpha_).array() + y_mean_;
  const Eigen::MatrixXd v = chol_.matrixL().solve(Ks);
  p.variance = (signal_ - v.colwise().squaredNorm().array()).cwiseMax(0.0).matrix().transpose();
  return p;
}

std::pair<double, double> GpModel::predict(const Eigen::VectorXd& z) const {
  const Prediction p = predict(Eigen::MatrixXd(z));
  return {p.mean(0), p.variance(0)};
}

}  // namespace qovae::bo
