#include "qovae/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace qovae::nn {

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& grad_out, const Matrix& forward_in) {
  return grad_out.cwiseProduct((forward_in.array() > 0.0).cast<double>().matrix());
}

Matrix sigmoid(const Matrix& x) { return (1.0 / (1.0 + (-x.array()).exp())).matrix(); }

Matrix tanh(const Matrix& x) { return x.array().tanh().matrix(); }

Matrix softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double m = logits.col(c).maxCoeff();
    out.col(c) = (logits.col(c).array() - m).exp().matrix();
    out.col(c) /= out.col(c).sum();
  }
  return out;
}

// --- Dense ---------------------------------------------------------------

Dense::Dense(ParamStore& store, const std::string& name, int in, int out) : in_(in), out_(out) {
  w_ = store.add(name + ".weight", {out, in}, in);
  b_ = store.add(name + ".bias", {out}, in);
}

Matrix Dense::forward(const ParamStore& store, const Matrix& x) const {
  if (x.rows() != in_) throw std::invalid_argument("Dense: input has wrong feature count");
  Matrix y = store.value(w_) * x;
  y.colwise() += store.value(b_).col(0);
  return y;
}

Matrix Dense::backward(ParamStore& store, const Matrix& x, const Matrix& grad_out) const {
  store.grad(w_).noalias() += grad_out * x.transpose();
  store.grad(b_).col(0) += grad_out.rowwise().sum();
  return store.value(w_).transpose() * grad_out;
}

// --- Mlp -------------------------------------------------------------------

Mlp::Mlp(ParamStore& store, const std::string& name, std::vector<int> widths, bool relu_last) : relu_last_(relu_last) {
  if (widths.size() < 2) throw std::invalid_argument("Mlp needs at least input and output widths");
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    layers_.emplace_back(store, name + "." + std::to_string(i), widths[i], widths[i + 1]);
  }
}

Matrix Mlp::forward(const ParamStore& store, const Matrix& x, Cache* cache) const {
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Matrix pre = layers_[i].forward(store, h);
    const bool act = relu_last_ || i + 1 < layers_.size();
    if (cache) {
      cache->inputs.push_back(h);
      cache->pre.push_back(pre);
    }
    h = act ? relu(pre) : std::move(pre);
  }
  return h;
}

Matrix Mlp::backward(ParamStore& store, const Cache& cache, const Matrix& grad_out) const {
  Matrix g = grad_out;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const bool act = relu_last_ || k + 1 < layers_.size();
    if (act) g = relu_backward(g, cache.pre[k]);
    g = layers_[k].backward(store, cache.inputs[k], g);
  }
  return g;
}

// --- Conv1d ----------------------------------------------------------------

Conv1d::Conv1d(ParamStore& store, const std::string& name, int channels, int filters, int kernel)
    : channels_(channels), filters_(filters), kernel_(kernel) {
  w_ = store.add(name + ".weight", {filters, kernel, channels}, kernel * channels);
  b_ = store.add(name + ".bias", {filters}, kernel * channels);
}

Matrix Conv1d::forward(const ParamStore& store, const Matrix& x, int batch, int steps, Cache* cache) const {
  if (x.rows() != channels_ || x.cols() != static_cast<Eigen::Index>(batch) * steps) {
    throw std::invalid_argument("Conv1d: input shape mismatch");
  }
  const int out_t = out_steps(steps);
  if (out_t < 1) throw std::invalid_argument("Conv1d: sequence shorter than kernel");
  Matrix cols(static_cast<Eigen::Index>(kernel_) * channels_, static_cast<Eigen::Index>(batch) * out_t);
  for (int b = 0; b < batch; ++b) {
    for (int t = 0; t < out_t; ++t) {
      for (int l = 0; l < kernel_; ++l) {
        cols.block(static_cast<Eigen::Index>(l) * channels_, b * out_t + t, channels_, 1) = x.col(b * steps + t + l);
      }
    }
  }
  Matrix pre = store.value(w_) * cols;
  pre.colwise() += store.value(b_).col(0);
  Matrix out = relu(pre);
  if (cache) {
    cache->columns = std::move(cols);
    cache->pre = std::move(pre);
    cache->batch = batch;
    cache->steps = steps;
  }
  return out;
}

Matrix Conv1d::backward(ParamStore& store, const Cache& cache, const Matrix& grad_out) const {
  const Matrix dpre = relu_backward(grad_out, cache.pre);
  store.grad(w_).noalias() += dpre * cache.columns.transpose();
  store.grad(b_).col(0) += dpre.rowwise().sum();
  const Matrix dcols = store.value(w_).transpose() * dpre;
  const int out_t = out_steps(cache.steps);
  Matrix dx = Matrix::Zero(channels_, static_cast<Eigen::Index>(cache.batch) * cache.steps);
  for (int b = 0; b < cache.batch; ++b) {
    for (int t = 0; t < out_t; ++t) {
      for (int l = 0; l < kernel_; ++l) {
        dx.col(b * cache.steps + t + l) += dcols.block(static_cast<Eigen::Index>(l) * channels_, b * out_t + t, channels_, 1);
      }
    }
  }
  return dx;
}

Matrix flatten_sequence(const Matrix& x, int batch, int steps) {
  const Eigen::Index f = x.rows();
  Matrix out(f * steps, batch);
  for (int b = 0; b < batch; ++b)
    for (Eigen::Index k = 0; k < f; ++k)
      for (int t = 0; t < steps; ++t) out(k * steps + t, b) = x(k, b * steps + t);
  return out;
}

Matrix unflatten_sequence(const Matrix& flat, int filters, int batch, int steps) {
  Matrix out(filters, static_cast<Eigen::Index>(batch) * steps);
  for (int b = 0; b < batch; ++b)
    for (int k = 0; k < filters; ++k)
      for (int t = 0; t < steps; ++t) out(k, b * steps + t) = flat(k * steps + t, b);
  return out;
}

// --- Gru -------------------------------------------------------------------

Gru::Gru(ParamStore& store, const std::string& name, int in, int hidden) : in_(in), hidden_(hidden) {
  w_ = store.add(name + ".input_weight", {3 * hidden, in}, hidden);
  u_ = store.add(name + ".recurrent_weight", {3 * hidden, hidden}, hidden);
  b_ = store.add(name + ".bias", {3 * hidden}, hidden);
}

Matrix Gru::forward(const ParamStore& store, const Matrix& x, int batch, int steps, Cache* cache) const {
  if (x.rows() != in_ || x.cols() != static_cast<Eigen::Index>(batch) * steps) {
    throw std::invalid_argument("Gru: input shape mismatch");
  }
  const Eigen::Index H = hidden_;
  const auto U = store.value(u_);
  Matrix xw = store.value(w_) * x;
  xw.colwise() += store.value(b_).col(0);

  Matrix hs(H, x.cols());
  Matrix zs, rs, cs, ps, rps;
  if (cache) {
    zs.resize(H, x.cols());
    rs.resize(H, x.cols());
    cs.resize(H, x.cols());
    ps.resize(H, x.cols());
    rps.resize(H, x.cols());
  }
  Matrix h = Matrix::Zero(H, batch);
  for (int t = 0; t < steps; ++t) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(t) * batch;
    const Matrix zr_in = xw.block(0, c0, 2 * H, batch) + U.topRows(2 * H) * h;
    const Matrix z = sigmoid(zr_in.topRows(H));
    const Matrix r = sigmoid(zr_in.bottomRows(H));
    const Matrix rh = r.cwiseProduct(h);
    const Matrix cand = tanh(xw.block(2 * H, c0, H, batch) + U.bottomRows(H) * rh);
    Matrix next = h + z.cwiseProduct(cand - h);
    if (cache) {
      zs.middleCols(c0, batch) = z;
      rs.middleCols(c0, batch) = r;
      cs.middleCols(c0, batch) = cand;
      ps.middleCols(c0, batch) = h;
      rps.middleCols(c0, batch) = rh;
    }
    h = std::move(next);
    hs.middleCols(c0, batch) = h;
  }
  if (cache) {
    cache->input = x;
    cache->z = std::move(zs);
    cache->r = std::move(rs);
    cache->cand = std::move(cs);
    cache->prev = std::move(ps);
    cache->reset_prev = std::move(rps);
    cache->batch = batch;
    cache->steps = steps;
  }
  return hs;
}

Matrix Gru::backward(ParamStore& store, const Cache& cache, const Matrix& grad_hidden) const {
  const Eigen::Index H = hidden_;
  const int batch = cache.batch;
  const auto U = store.value(u_);
  auto dU = store.grad(u_);
  Matrix dxw(3 * H, grad_hidden.cols());
  Matrix dnext = Matrix::Zero(H, batch);
  for (int t = cache.steps - 1; t >= 0; --t) {
    const Eigen::Index c0 = static_cast<Eigen::Index>(t) * batch;
    const Matrix dh = grad_hidden.middleCols(c0, batch) + dnext;
    const auto z = cache.z.middleCols(c0, batch);
    const auto r = cache.r.middleCols(c0, batch);
    const auto cand = cache.cand.middleCols(c0, batch);
    const auto prev = cache.prev.middleCols(c0, batch);

    const Matrix dz = dh.cwiseProduct(cand - prev);
    Matrix dprev = dh.cwiseProduct((1.0 - z.array()).matrix());
    const Matrix dpre_c = dh.cwiseProduct(z).cwiseProduct((1.0 - cand.array().square()).matrix());
    dU.bottomRows(H).noalias() += dpre_c * cache.reset_prev.middleCols(c0, batch).transpose();
    const Matrix drh = U.bottomRows(H).transpose() * dpre_c;
    const Matrix dr = drh.cwiseProduct(prev);
    dprev += drh.cwiseProduct(r);

    Matrix dpre_zr(2 * H, batch);
    dpre_zr.topRows(H) = dz.cwiseProduct(z).cwiseProduct((1.0 - z.array()).matrix());
    dpre_zr.bottomRows(H) = dr.cwiseProduct(r).cwiseProduct((1.0 - r.array()).matrix());
    dU.topRows(2 * H).noalias() += dpre_zr * prev.transpose();
    dprev.noalias() += U.topRows(2 * H).transpose() * dpre_zr;

    dxw.block(0, c0, 2 * H, batch) = dpre_zr;
    dxw.block(2 * H, c0, H, batch) = dpre_c;
    dnext = std::move(dprev);
  }
  store.grad(w_).noalias() += dxw * cache.input.transpose();
  store.grad(b_).col(0) += dxw.rowwise().sum();
  return store.value(w_).transpose() * dxw;
}

// --- loss ------------------------------------------------------------------

double softmax_cross_entropy(const Matrix& logits, std::span<const int> targets, double grad_scale, Matrix* grad) {
  if (static_cast<Eigen::Index>(targets.size()) != logits.cols()) {
    throw std::invalid_argument("softmax_cross_entropy: target count mismatch");
  }
  double loss = 0.0;
  if (grad) grad->resize(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double m = logits.col(c).maxCoeff();
    const Vector e = (logits.col(c).array() - m).exp().matrix();
    const double sum = e.sum();
    const int y = targets[static_cast<std::size_t>(c)];
    loss += -(logits(y, c) - m - std::log(sum));
    if (grad) {
      grad->col(c) = e / sum;
      (*grad)(y, c) -= 1.0;
      grad->col(c) *= grad_scale;
    }
  }
  return loss;
}

}  // namespace qovae::nn
