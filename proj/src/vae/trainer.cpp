#include "qovae/vae/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "qovae/nn/adam.hpp"

namespace qovae::vae {

namespace {

nn::Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  nn::Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = normal(rng);
  return m;
}

ElboParts evaluate_indices(QovaeModel& model, const std::vector<std::vector<int>>& seqs, std::mt19937_64& rng) {
  ElboParts total;
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < seqs.size(); start += kChunk) {
    const std::size_t end = std::min(seqs.size(), start + kChunk);
    std::vector<const std::vector<int>*> ptrs;
    for (std::size_t i = start; i < end; ++i) ptrs.push_back(&seqs[i]);
    const int n = static_cast<int>(ptrs.size());
    ElboParts part;
    model.forward_backward(ptrs, gaussian(model.latent_dim(), n, rng), false, &part);
    total.recon += part.recon * n;
    total.kl += part.kl * n;
  }
  if (!seqs.empty()) {
    total.recon /= static_cast<double>(seqs.size());
    total.kl /= static_cast<double>(seqs.size());
  }
  return total;
}

void clip_gradients(std::span<double> grads, double max_norm) {
  if (max_norm <= 0) return;
  double sq = 0.0;
  for (double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (double& g : grads) g *= scale;
}

}  // namespace

ElboParts evaluate(QovaeModel& model, const std::vector<repr::Setup>& data, std::uint64_t seed) {
  std::vector<std::vector<int>> seqs;
  seqs.reserve(data.size());
  for (const auto& s : data) seqs.push_back(model.indices(s));
  std::mt19937_64 rng(seed);
  return evaluate_indices(model, seqs, rng);
}

TrainResult train(QovaeModel& model, const std::vector<repr::Setup>& data, const TrainOptions& options) {
  const QovaeConfig& cfg = model.config();
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(std::floor(cfg.val_fraction * static_cast<double>(data.size())));
  if (n_val >= data.size()) n_val = data.size() - 1;

  std::vector<std::vector<int>> train_set, val_set;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_val ? val_set : train_set).push_back(model.indices(data[order[i]]));
  }

  TrainResult result;
  result.train_size = train_set.size();
  result.val_size = val_set.size();
  result.best_val_loss = std::numeric_limits<double>::infinity();

  std::optional<std::ofstream> log;
  if (options.log_csv) {
    log.emplace(*options.log_csv);
    if (!*log) throw std::runtime_error("cannot write " + options.log_csv->string());
    *log << "epoch,train_recon,train_kl,val_recon,val_kl,seconds\n";
  }

  nn::AdamConfig adam;
  adam.lr = cfg.lr;
  nn::AdamState state;
  std::vector<double> best(model.params().values().begin(), model.params().values().end());
  std::vector<std::size_t> perm(train_set.size());
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t batch = static_cast<std::size_t>(cfg.batch);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(perm.begin(), perm.end(), rng);
    double recon_sum = 0.0, kl_sum = 0.0;
    for (std::size_t start = 0; start < perm.size(); start += batch) {
      const std::size_t end = std::min(perm.size(), start + batch);
      std::vector<const std::vector<int>*> ptrs;
      for (std::size_t i = start; i < end; ++i) ptrs.push_back(&train_set[perm[i]]);
      const int n = static_cast<int>(ptrs.size());
      model.params().zero_grad();
      ElboParts part;
      const double loss = model.forward_backward(ptrs, gaussian(cfg.latent_dim, n, rng), true, &part);
      if (!std::isfinite(loss)) throw TrainingDiverged("non-finite loss at epoch " + std::to_string(epoch));
      clip_gradients(model.params().grads(), cfg.grad_clip);
      nn::adam_step(model.params().values(), model.params().grads(), state, adam);
      recon_sum += part.recon * n;
      kl_sum += part.kl * n;
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_recon = recon_sum / static_cast<double>(train_set.size());
    stats.train_kl = kl_sum / static_cast<double>(train_set.size());
    std::mt19937_64 val_rng(cfg.seed + 17);
    const ElboParts val = val_set.empty() ? ElboParts{stats.train_recon, stats.train_kl}
                                          : evaluate_indices(model, val_set, val_rng);
    stats.val_recon = val.recon;
    stats.val_kl = val.kl;
    if (!std::isfinite(stats.val_loss())) throw TrainingDiverged("non-finite validation loss at epoch " + std::to_string(epoch));
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.history.push_back(stats);

    if (stats.val_loss() < result.best_val_loss) {
      result.best_val_loss = stats.val_loss();
      result.best_epoch = epoch;
      std::copy(model.params().values().begin(), model.params().values().end(), best.begin());
      if (options.checkpoint_prefix) model.save(options.checkpoint_prefix->string() + ".best");
    }
    if (log) {
      *log << epoch << ',' << stats.train_recon << ',' << stats.train_kl << ',' << stats.val_recon << ','
           << stats.val_kl << ',' << stats.seconds << '\n'
           << std::flush;
    }
    if (options.on_epoch) options.on_epoch(stats);
  }

  if (options.restore_best && result.best_epoch > 0) {
    std::copy(best.begin(), best.end(), model.params().values().begin());
  }
  if (options.checkpoint_prefix) model.save(*options.checkpoint_prefix);
  return result;
}

}  // namespace qovae::vae
