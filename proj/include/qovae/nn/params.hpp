#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qovae::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;
using VectorMap = Eigen::Map<Vector>;
using ConstVectorMap = Eigen::Map<const Vector>;

struct ParamInfo {
  std::string name;
  std::vector<int> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
  int fan_in = 1;
};

/// Flat parameter and gradient storage. Structured views are Eigen maps over
/// the flat arrays, so the optimizer and the layers see the same memory.
class ParamStore {
 public:
  using Handle = std::size_t;

  /// Declares a tensor; row-major with shape[0] rows and the remaining extents
  /// flattened into columns. Invalidates previously obtained maps.
  Handle add(std::string name, std::vector<int> shape, int fan_in);

  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> grads() { return grads_; }
  [[nodiscard]] std::span<const double> grads() const { return grads_; }
  [[nodiscard]] const std::vector<ParamInfo>& info() const { return info_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  MatrixMap value(Handle h);
  ConstMatrixMap value(Handle h) const;
  MatrixMap grad(Handle h);

  void zero_grad();
  /// uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) for every tensor.
  void init_uniform(std::mt19937_64& rng);

 private:
  std::vector<ParamInfo> info_;
  std::vector<double> values_;
  std::vector<double> grads_;
};

}  // namespace qovae::nn
