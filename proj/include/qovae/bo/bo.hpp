#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qovae/bo/gp.hpp"
#include "qovae/bo/objective.hpp"
#include "qovae/vae/model.hpp"

namespace qovae::bo {

struct BoConfig {
  int iterations = 5;
  int batch = 5;
  int starts = 256;         // random EI evaluations per proposal round
  int refine_top = 8;       // best starts polished by compass search
  int refine_evals = 60;    // EI evaluations per polished start
  double separation = 0.1;  // minimum candidate distance, as a fraction of the box diagonal
  GpOptions gp;
  std::uint64_t seed = 1;
  optics::SimulationConfig sim;
};

/// Per-coordinate search bounds: latent range widened by one standard deviation.
struct LatentBox {
  Eigen::VectorXd lo, hi;
  [[nodiscard]] double diagonal() const { return (hi - lo).norm(); }
};
LatentBox latent_box(const Eigen::MatrixXd& latents);

struct BoEntry {
  int iteration = 0;  // 1-based; 0 for the random baseline
  Eigen::VectorXd z;
  repr::Setup setup;
  ObjectiveValue value;
};

struct BoResult {
  std::vector<BoEntry> entries;  // every evaluated candidate, y descending
  std::size_t empty_setups = 0;  // candidates decoding to the empty setup
  std::vector<std::string> warnings;
  [[nodiscard]] double best_y() const;
};

/// Objective values of existing setups.
Eigen::VectorXd objective_values(const std::vector<repr::Setup>& setups, const ObjectiveConfig& obj,
                                 const optics::SimulationConfig& sim = {});

/// Batched BO in latent space starting from data (latents, y). Each round fits
/// the GP, proposes `batch` well-separated EI maximizers inside the box,
/// argmax-decodes and scores them, and adds them to the data.
BoResult bo_loop(const vae::QovaeModel& model, const Eigen::MatrixXd& latents, const Eigen::VectorXd& y,
                 const ObjectiveConfig& obj, const BoConfig& cfg);
/// Encodes `setups` to their means and scores them first.
BoResult bo_loop(const vae::QovaeModel& model, const std::vector<repr::Setup>& setups, const ObjectiveConfig& obj,
                 const BoConfig& cfg);

/// `budget` uniform draws in the same box, decoded and scored.
BoResult random_search(const vae::QovaeModel& model, const LatentBox& box, int budget, const ObjectiveConfig& obj,
                       std::uint64_t seed, const optics::SimulationConfig& sim = {});

/// rank,iteration,y,metric,fidelity,S,length,tokens,z
void write_bo_csv(const std::filesystem::path& path, const BoResult& result);

}  // namespace qovae::bo
