#include "qovae/nn/params.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace qovae::nn {

namespace {

std::pair<int, int> matrix_dims(const ParamInfo& p) {
  const int rows = p.shape.empty() ? 1 : p.shape[0];
  const int cols = static_cast<int>(p.size) / std::max(rows, 1);
  return {rows, cols};
}

}  // namespace

ParamStore::Handle ParamStore::add(std::string name, std::vector<int> shape, int fan_in) {
  if (shape.empty()) throw std::invalid_argument("parameter needs a shape");
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                        [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
  info_.push_back({std::move(name), std::move(shape), values_.size(), n, fan_in});
  values_.resize(values_.size() + n, 0.0);
  grads_.resize(grads_.size() + n, 0.0);
  return info_.size() - 1;
}

MatrixMap ParamStore::value(Handle h) {
  const ParamInfo& p = info_.at(h);
  auto [r, c] = matrix_dims(p);
  return MatrixMap(values_.data() + p.offset, r, c);
}

ConstMatrixMap ParamStore::value(Handle h) const {
  const ParamInfo& p = info_.at(h);
  auto [r, c] = matrix_dims(p);
  return ConstMatrixMap(values_.data() + p.offset, r, c);
}

MatrixMap ParamStore::grad(Handle h) {
  const ParamInfo& p = info_.at(h);
  auto [r, c] = matrix_dims(p);
  return MatrixMap(grads_.data() + p.offset, r, c);
}

void ParamStore::zero_grad() { std::fill(grads_.begin(), grads_.end(), 0.0); }

void ParamStore::init_uniform(std::mt19937_64& rng) {
  for (const ParamInfo& p : info_) {
    const double bound = std::sqrt(1.0 / std::max(p.fan_in, 1));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < p.size; ++i) values_[p.offset + i] = u(rng);
  }
}

}  // namespace qovae::nn
