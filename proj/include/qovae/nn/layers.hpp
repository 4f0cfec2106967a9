#pragma once

#include <span>
#include <string>
#include <vector>

#include "qovae/nn/params.hpp"

// Batched layers with hand-written backward passes. Activations are
// column-major matrices with one column per (sample) or per (sample, step).

namespace qovae::nn {

Matrix relu(const Matrix& x);
Matrix sigmoid(const Matrix& x);
Matrix tanh(const Matrix& x);
/// Column-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);

/// Backward of relu given the forward input (subgradient 0 at 0).
Matrix relu_backward(const Matrix& grad_out, const Matrix& forward_in);

/// y = W x + b
class Dense {
 public:
  Dense() = default;
  Dense(ParamStore& store, const std::string& name, int in, int out);

  [[nodiscard]] int in() const { return in_; }
  [[nodiscard]] int out() const { return out_; }

  Matrix forward(const ParamStore& store, const Matrix& x) const;
  /// Accumulates parameter gradients; returns dL/dx.
  Matrix backward(ParamStore& store, const Matrix& x, const Matrix& grad_out) const;

 private:
  ParamStore::Handle w_ = 0, b_ = 0;
  int in_ = 0, out_ = 0;
};

/// Stack of Dense layers with ReLU between them (none after the last one
/// unless `relu_last`).
class Mlp {
 public:
  struct Cache {
    std::vector<Matrix> inputs;  // input to each Dense
    std::vector<Matrix> pre;     // pre-activation of each Dense
  };

  Mlp() = default;
  Mlp(ParamStore& store, const std::string& name, std::vector<int> widths, bool relu_last);

  Matrix forward(const ParamStore& store, const Matrix& x, Cache* cache = nullptr) const;
  Matrix backward(ParamStore& store, const Cache& cache, const Matrix& grad_out) const;
  [[nodiscard]] const std::vector<Dense>& layers() const { return layers_; }
  [[nodiscard]] bool relu_last() const { return relu_last_; }

 private:
  std::vector<Dense> layers_;
  bool relu_last_ = false;
};

/// Valid 1-D convolution with fused bias and ReLU:
///   out[f, t] = relu(sum_{l,j} w[f, l, j] * x[j, t + l] + b[f]).
/// Input is (channels x batch*steps) with column b*steps + t.
class Conv1d {
 public:
  struct Cache {
    Matrix columns;  // (kernel*channels) x (batch*out_steps)
    Matrix pre;      // filters x (batch*out_steps)
    int batch = 0;
    int steps = 0;
  };

  Conv1d() = default;
  Conv1d(ParamStore& store, const std::string& name, int channels, int filters, int kernel);

  [[nodiscard]] int channels() const { return channels_; }
  [[nodiscard]] int filters() const { return filters_; }
  [[nodiscard]] int kernel() const { return kernel_; }
  [[nodiscard]] int out_steps(int steps) const { return steps - kernel_ + 1; }

  Matrix forward(const ParamStore& store, const Matrix& x, int batch, int steps, Cache* cache = nullptr) const;
  Matrix backward(ParamStore& store, const Cache& cache, const Matrix& grad_out) const;

 private:
  ParamStore::Handle w_ = 0, b_ = 0;
  int channels_ = 0, filters_ = 0, kernel_ = 0;
};

/// (filters x batch*steps) -> (filters*steps x batch), index f*steps + t.
Matrix flatten_sequence(const Matrix& x, int batch, int steps);
Matrix unflatten_sequence(const Matrix& flat, int filters, int batch, int steps);

/// Gated recurrent unit, h_0 = 0:
///   z = sig(W_i x + U_i h + b_i), r = sig(W_r x + U_r h + b_r),
///   c = tanh(W_h x + U_h (r . h) + b_h), h' = (1 - z) . h + z . c.
/// Sequences are (features x steps*batch), time-major: column t*batch + b.
class Gru {
 public:
  struct Cache {
    Matrix input;
    Matrix z, r, cand, prev, reset_prev;  // hidden x steps*batch
    int batch = 0;
    int steps = 0;
  };

  Gru() = default;
  Gru(ParamStore& store, const std::string& name, int in, int hidden);

  [[nodiscard]] int in() const { return in_; }
  [[nodiscard]] int hidden() const { return hidden_; }

  /// Returns the hidden sequence (hidden x steps*batch).
  Matrix forward(const ParamStore& store, const Matrix& x, int batch, int steps, Cache* cache = nullptr) const;
  Matrix backward(ParamStore& store, const Cache& cache, const Matrix& grad_hidden) const;

 private:
  ParamStore::Handle w_ = 0, u_ = 0, b_ = 0;
  int in_ = 0, hidden_ = 0;
};

/// Sum over columns of -log softmax(logits)[target]; also returns dL/dlogits
/// scaled by `grad_scale`.
double softmax_cross_entropy(const Matrix& logits, std::span<const int> targets, double grad_scale, Matrix* grad);

}  // namespace qovae::nn
