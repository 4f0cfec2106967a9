#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "qovae/repr/setup.hpp"
#include "qovae/vae/model.hpp"

namespace qovae::vae {

struct EpochStats {
  int epoch = 0;
  double train_recon = 0.0;
  double train_kl = 0.0;
  double val_recon = 0.0;
  double val_kl = 0.0;
  double seconds = 0.0;
  [[nodiscard]] double val_loss() const { return val_recon + val_kl; }
};

struct TrainOptions {
  /// `<prefix>` receives the final weights, `<prefix>.best` the best-validation ones.
  std::optional<std::filesystem::path> checkpoint_prefix;
  /// CSV: epoch,train_recon,train_kl,val_recon,val_kl,seconds
  std::optional<std::filesystem::path> log_csv;
  /// Load the best-validation weights back into the model at the end.
  bool restore_best = true;
  std::function<void(const EpochStats&)> on_epoch;
};

struct TrainResult {
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seeded train/validation split, minibatch Adam on the negative ELBO.
/// Epoch/batch/lr/clip/seed come from the model config. Throws
/// TrainingDiverged on a non-finite loss.
TrainResult train(QovaeModel& model, const std::vector<repr::Setup>& data, const TrainOptions& options = {});

/// Batch-mean recon and KL over a set, using noise drawn from `seed`.
ElboParts evaluate(QovaeModel& model, const std::vector<repr::Setup>& data, std::uint64_t seed);

}  // namespace qovae::vae
