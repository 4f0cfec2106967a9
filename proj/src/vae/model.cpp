#include "qovae/vae/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qovae/nn/checkpoint.hpp"

namespace qovae::vae {

using nn::Matrix;

struct QovaeModel::EncoderCache {
  std::vector<nn::Conv1d::Cache> convs;
  nn::Mlp::Cache mlp;
};

struct QovaeModel::DecoderCache {
  Matrix z;
  Matrix seed_pre;
  std::vector<nn::Gru::Cache> grus;
  Matrix top_hidden;
};

QovaeModel::QovaeModel(QovaeConfig config, repr::Vocabulary vocab)
    : config_(bind_to_vocabulary(std::move(config), vocab)), vocab_(std::move(vocab)) {
  int channels = config_.classes;
  for (std::size_t i = 0; i < config_.conv_filters.size(); ++i) {
    convs_.emplace_back(params_, "encoder.conv" + std::to_string(i + 1), channels, config_.conv_filters[i],
                        config_.conv_kernels[i]);
    channels = config_.conv_filters[i];
  }
  std::vector<int> widths{channels * config_.conv_out_steps()};
  widths.insert(widths.end(), config_.encoder_hidden.begin(), config_.encoder_hidden.end());
  widths.push_back(2 * config_.latent_dim);
  encoder_mlp_ = nn::Mlp(params_, "encoder.mlp", widths, false);

  seed_ = nn::Dense(params_, "decoder.seed", config_.latent_dim, config_.decoder_seed);
  int in = config_.decoder_seed;
  for (int l = 0; l < config_.gru_layers; ++l) {
    grus_.emplace_back(params_, "decoder.gru" + std::to_string(l + 1), in, config_.gru_hidden);
    in = config_.gru_hidden;
  }
  output_ = nn::Dense(params_, "decoder.output", config_.gru_hidden, config_.classes);
  initialize(config_.seed);
}

void QovaeModel::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  params_.init_uniform(rng);
}

std::vector<int> QovaeModel::indices(const repr::Setup& setup) const { return repr::encode_onehot(setup, vocab_).index; }

Matrix QovaeModel::encoder_forward(std::span<const std::vector<int>* const> batch, EncoderCache* cache) const {
  const int B = static_cast<int>(batch.size());
  const int T = config_.steps;
  Matrix x = Matrix::Zero(config_.classes, static_cast<Eigen::Index>(B) * T);
  for (int b = 0; b < B; ++b) {
    const std::vector<int>& seq = *batch[static_cast<std::size_t>(b)];
    if (static_cast<int>(seq.size()) != T) throw std::invalid_argument("encoder: sequence length != T");
    for (int t = 0; t < T; ++t) {
      const int k = seq[static_cast<std::size_t>(t)];
      if (k < 0 || k >= config_.classes) throw std::invalid_argument("encoder: class index out of range");
      x(k, b * T + t) = 1.0;
    }
  }
  int steps = T;
  if (cache) cache->convs.resize(convs_.size());
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    x = convs_[i].forward(params_, x, B, steps, cache ? &cache->convs[i] : nullptr);
    steps = convs_[i].out_steps(steps);
  }
  const Matrix flat = nn::flatten_sequence(x, B, steps);
  return encoder_mlp_.forward(params_, flat, cache ? &cache->mlp : nullptr);
}

Matrix QovaeModel::decoder_forward(const Matrix& z, DecoderCache* cache) const {
  const int n = static_cast<int>(z.cols());
  const int T = config_.steps;
  Matrix seed_pre = seed_.forward(params_, z);
  const Matrix seed = nn::relu(seed_pre);
  Matrix h(seed.rows(), static_cast<Eigen::Index>(T) * n);
  for (int t = 0; t < T; ++t) h.middleCols(static_cast<Eigen::Index>(t) * n, n) = seed;
  if (cache) cache->grus.resize(grus_.size());
  for (std::size_t l = 0; l < grus_.size(); ++l) {
    h = grus_[l].forward(params_, h, n, T, cache ? &cache->grus[l] : nullptr);
  }
  Matrix logits = output_.forward(params_, h);
  if (cache) {
    cache->z = z;
    cache->seed_pre = std::move(seed_pre);
    cache->top_hidden = std::move(h);
  }
  return logits;
}

Matrix QovaeModel::encode_batch(std::span<const std::vector<int>* const> batch) const {
  return encoder_forward(batch, nullptr);
}

LatentPoint QovaeModel::encode(const repr::Setup& setup) const {
  const std::vector<int> idx = indices(setup);
  const std::vector<int>* ptr = &idx;
  const Matrix out = encode_batch(std::span<const std::vector<int>* const>(&ptr, 1));
  LatentPoint p;
  for (int i = 0; i < config_.latent_dim; ++i) {
    p.mean.push_back(out(i, 0));
    p.log_sigma.push_back(out(config_.latent_dim + i, 0));
  }
  return p;
}

Matrix QovaeModel::encode_means(const std::vector<repr::Setup>& setups) const {
  const int L = config_.latent_dim;
  Matrix out(L, static_cast<Eigen::Index>(setups.size()));
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < setups.size(); start += kChunk) {
    const std::size_t end = std::min(setups.size(), start + kChunk);
    std::vector<std::vector<int>> seqs;
    for (std::size_t i = start; i < end; ++i) seqs.push_back(indices(setups[i]));
    std::vector<const std::vector<int>*> ptrs;
    for (const auto& s : seqs) ptrs.push_back(&s);
    const Matrix enc = encode_batch(ptrs);
    out.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) = enc.topRows(L);
  }
  return out;
}

Matrix QovaeModel::decode_probs_batch(const Matrix& z) const {
  if (z.rows() != config_.latent_dim) throw std::invalid_argument("decode: latent dimension mismatch");
  return nn::softmax(decoder_forward(z, nullptr));
}

Matrix QovaeModel::decode_probs(std::span<const double> z) const {
  Matrix zm(config_.latent_dim, 1);
  if (static_cast<int>(z.size()) != config_.latent_dim) throw std::invalid_argument("decode: latent dimension mismatch");
  for (int i = 0; i < config_.latent_dim; ++i) zm(i, 0) = z[static_cast<std::size_t>(i)];
  return decode_probs_batch(zm).transpose();
}

std::vector<repr::Setup> QovaeModel::decode_setups(const Matrix& z, DecodeMode mode, std::mt19937_64* rng) const {
  if (mode == DecodeMode::Sample && !rng) throw std::invalid_argument("sampled decoding needs an rng");
  const int n = static_cast<int>(z.cols());
  const int T = config_.steps;
  std::vector<repr::Setup> out;
  out.reserve(static_cast<std::size_t>(n));
  constexpr int kChunk = 256;
  for (int start = 0; start < n; start += kChunk) {
    const int m = std::min(kChunk, n - start);
    const Matrix probs = decode_probs_batch(z.middleCols(start, m));
    for (int i = 0; i < m; ++i) {
      std::vector<int> idx(static_cast<std::size_t>(T));
      for (int t = 0; t < T; ++t) {
        const auto col = probs.col(static_cast<Eigen::Index>(t) * m + i);
        if (mode == DecodeMode::Argmax) {
          Eigen::Index k;
          col.maxCoeff(&k);
          idx[static_cast<std::size_t>(t)] = static_cast<int>(k);
        } else {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          double target = u(*rng), acc = 0.0;
          int k = static_cast<int>(col.size()) - 1;
          for (Eigen::Index c = 0; c < col.size(); ++c) {
            acc += col(c);
            if (target < acc) {
              k = static_cast<int>(c);
              break;
            }
          }
          idx[static_cast<std::size_t>(t)] = k;
        }
      }
      out.push_back(repr::setup_from_indices(idx, vocab_));
    }
  }
  return out;
}

repr::Setup QovaeModel::decode_setup(std::span<const double> z, DecodeMode mode, std::mt19937_64* rng) const {
  if (static_cast<int>(z.size()) != config_.latent_dim) throw std::invalid_argument("decode: latent dimension mismatch");
  Matrix zm(config_.latent_dim, 1);
  for (int i = 0; i < config_.latent_dim; ++i) zm(i, 0) = z[static_cast<std::size_t>(i)];
  return decode_setups(zm, mode, rng).front();
}

ElboParts QovaeModel::elbo(const repr::Setup& setup, std::mt19937_64& rng) const {
  const std::vector<int> idx = indices(setup);
  const std::vector<int>* ptr = &idx;
  Matrix noise(config_.latent_dim, 1);
  std::normal_distribution<double> normal;
  for (int i = 0; i < config_.latent_dim; ++i) noise(i, 0) = normal(rng);
  ElboParts parts;
  const_cast<QovaeModel*>(this)->forward_backward(std::span<const std::vector<int>* const>(&ptr, 1), noise, false,
                                                  &parts);
  return parts;
}

double QovaeModel::forward_backward(std::span<const std::vector<int>* const> batch, const Matrix& noise,
                                    bool accumulate_grad, ElboParts* parts) {
  const int B = static_cast<int>(batch.size());
  const int L = config_.latent_dim;
  const int T = config_.steps;
  if (B == 0) throw std::invalid_argument("forward_backward: empty batch");
  if (noise.rows() != L || noise.cols() != B) throw std::invalid_argument("forward_backward: noise shape mismatch");

  EncoderCache ec;
  DecoderCache dc;
  const Matrix enc = encoder_forward(batch, accumulate_grad ? &ec : nullptr);
  const Matrix mu = enc.topRows(L);
  const Matrix log_sigma = enc.bottomRows(L);
  const Matrix sigma = log_sigma.array().exp().matrix();
  const Matrix z = mu + sigma.cwiseProduct(noise);

  const Matrix logits = decoder_forward(z, accumulate_grad ? &dc : nullptr);
  std::vector<int> targets(static_cast<std::size_t>(T) * B);
  for (int t = 0; t < T; ++t)
    for (int b = 0; b < B; ++b) targets[static_cast<std::size_t>(t * B + b)] = (*batch[static_cast<std::size_t>(b)])[static_cast<std::size_t>(t)];

  const double inv_b = 1.0 / B;
  Matrix dlogits;
  const double recon = nn::softmax_cross_entropy(logits, targets, inv_b, accumulate_grad ? &dlogits : nullptr);
  const double kl =
      0.5 * (mu.array().square() + sigma.array().square() - 1.0 - 2.0 * log_sigma.array()).sum();
  if (parts) *parts = {recon * inv_b, kl * inv_b};
  const double loss = (recon + kl) * inv_b;
  if (!accumulate_grad) return loss;

  Matrix dh = output_.backward(params_, dc.top_hidden, dlogits);
  for (std::size_t l = grus_.size(); l-- > 0;) dh = grus_[l].backward(params_, dc.grus[l], dh);
  Matrix dseed = Matrix::Zero(dh.rows(), B);
  for (int t = 0; t < T; ++t) dseed += dh.middleCols(static_cast<Eigen::Index>(t) * B, B);
  dseed = nn::relu_backward(dseed, dc.seed_pre);
  const Matrix dz = seed_.backward(params_, dc.z, dseed);

  Matrix denc(2 * L, B);
  denc.topRows(L) = dz + mu * inv_b;
  denc.bottomRows(L) = dz.cwiseProduct(noise).cwiseProduct(sigma) +
                       ((sigma.array().square() - 1.0) * inv_b).matrix();
  const Matrix dflat = encoder_mlp_.backward(params_, ec.mlp, denc);
  int steps = T;
  for (const auto& c : convs_) steps = c.out_steps(steps);
  Matrix dx = nn::unflatten_sequence(dflat, convs_.back().filters(), B, steps);
  for (std::size_t i = convs_.size(); i-- > 0;) dx = convs_[i].backward(params_, ec.convs[i], dx);
  return loss;
}

void QovaeModel::save(const std::filesystem::path& prefix) const {
  nn::write_checkpoint(prefix, params_,
                       {{"model_config", to_json(config_)},
                        {"vocabulary_config", to_json(vocab_.config())},
                        {"vocabulary_hash", vocab_.hash()}});
}

QovaeModel QovaeModel::load(const std::filesystem::path& prefix) {
  const nn::Checkpoint ck = nn::read_checkpoint(prefix);
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = ck.meta.find(key);
    if (it == ck.meta.end()) throw nn::CheckpointError("checkpoint lacks meta " + key);
    return it->second;
  };
  repr::Vocabulary vocab(vocabulary_config_from_json(need("vocabulary_config")));
  if (vocab.hash() != need("vocabulary_hash")) throw nn::CheckpointError("vocabulary hash mismatch");
  QovaeModel model(qovae_config_from_json(need("model_config")), std::move(vocab));
  nn::load_into(ck, model.params_);
  return model;
}

}  // namespace qovae::vae
