#pragma once

#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "qovae/nn/layers.hpp"
#include "qovae/nn/params.hpp"
#include "qovae/repr/onehot.hpp"
#include "qovae/repr/setup.hpp"
#include "qovae/vae/config.hpp"

namespace qovae::vae {

struct LatentPoint {
  std::vector<double> mean;
  std::vector<double> log_sigma;
};

struct ElboParts {
  double recon = 0.0;  // -sum_t log p(x_t | z)
  double kl = 0.0;     // KL(q(z|x) || N(0, I))
  [[nodiscard]] double loss() const { return recon + kl; }
};

enum class DecodeMode { Argmax, Sample };

/// Convolutional Gaussian encoder + GRU categorical decoder.
class QovaeModel {
 public:
  QovaeModel(QovaeConfig config, repr::Vocabulary vocab);

  [[nodiscard]] const QovaeConfig& config() const { return config_; }
  [[nodiscard]] const repr::Vocabulary& vocabulary() const { return vocab_; }
  [[nodiscard]] nn::ParamStore& params() { return params_; }
  [[nodiscard]] const nn::ParamStore& params() const { return params_; }
  [[nodiscard]] int latent_dim() const { return config_.latent_dim; }

  /// Re-initializes all weights uniformly in +-sqrt(1/fan_in).
  void initialize(std::uint64_t seed);

  /// Encoder outputs for a batch of class-index sequences; returns
  /// (2*latent x batch): means in the top rows, log sigmas below.
  [[nodiscard]] nn::Matrix encode_batch(std::span<const std::vector<int>* const> batch) const;
  [[nodiscard]] LatentPoint encode(const repr::Setup& setup) const;
  /// Encoder means of many setups, one column each.
  [[nodiscard]] nn::Matrix encode_means(const std::vector<repr::Setup>& setups) const;

  /// T x D probabilities (row t sums to 1).
  [[nodiscard]] nn::Matrix decode_probs(std::span<const double> z) const;
  /// Batched variant: z is (latent x n); returns D x (T*n), column t*n + i.
  [[nodiscard]] nn::Matrix decode_probs_batch(const nn::Matrix& z) const;

  /// Per-step argmax or categorical sampling, truncated at the first PAD.
  [[nodiscard]] repr::Setup decode_setup(std::span<const double> z, DecodeMode mode, std::mt19937_64* rng = nullptr) const;
  [[nodiscard]] std::vector<repr::Setup> decode_setups(const nn::Matrix& z, DecodeMode mode,
                                                       std::mt19937_64* rng = nullptr) const;

  /// Single-sample ELBO terms for one setup.
  [[nodiscard]] ElboParts elbo(const repr::Setup& setup, std::mt19937_64& rng) const;

  /// Mean loss over the batch using the given noise (latent x batch). When
  /// `accumulate_grad`, adds d(mean loss)/d(params) into params().grads().
  /// `parts` receives batch-mean recon and KL.
  double forward_backward(std::span<const std::vector<int>* const> batch, const nn::Matrix& noise, bool accumulate_grad,
                          ElboParts* parts = nullptr);

  /// Class-index sequence (length T, PAD-filled) for a setup.
  [[nodiscard]] std::vector<int> indices(const repr::Setup& setup) const;

  void save(const std::filesystem::path& prefix) const;
  static QovaeModel load(const std::filesystem::path& prefix);

 private:
  struct EncoderCache;
  struct DecoderCache;

  nn::Matrix encoder_forward(std::span<const std::vector<int>* const> batch, EncoderCache* cache) const;
  nn::Matrix decoder_forward(const nn::Matrix& z, DecoderCache* cache) const;

  QovaeConfig config_;
  repr::Vocabulary vocab_;
  nn::ParamStore params_;
  std::vector<nn::Conv1d> convs_;
  nn::Mlp encoder_mlp_;
  nn::Dense seed_;
  std::vector<nn::Gru> grus_;
  nn::Dense output_;
};

}  // namespace qovae::vae
