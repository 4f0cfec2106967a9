#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qovae/repr/vocabulary.hpp"

namespace qovae::vae {

/// Architecture and training knobs. `steps` and `classes` follow the vocabulary.
struct QovaeConfig {
  int latent_dim = 6;  // 6 = QOVAE-High, 2 = QOVAE-Low
  std::vector<int> conv_filters{18, 18, 18};
  std::vector<int> conv_kernels{3, 3, 3};
  std::vector<int> encoder_hidden{128, 128};
  int decoder_seed = 64;
  int gru_layers = 3;
  int gru_hidden = 128;
  int steps = 12;    // T
  int classes = 67;  // D, PAD included

  double lr = 1e-4;
  int batch = 64;
  int epochs = 200;
  double val_fraction = 0.1;
  double grad_clip = 0.0;  // global L2 norm; 0 disables
  std::uint64_t seed = 1;

  void validate() const;
  [[nodiscard]] int conv_out_steps() const;
  friend bool operator==(const QovaeConfig&, const QovaeConfig&) = default;
};

/// Everything a config file may set.
struct ProjectConfig {
  repr::VocabularyConfig vocabulary;
  QovaeConfig model;
};

/// Fills steps/classes from the vocabulary.
QovaeConfig bind_to_vocabulary(QovaeConfig cfg, const repr::Vocabulary& vocab);

std::string to_json(const QovaeConfig& cfg);
QovaeConfig qovae_config_from_json(const std::string& text);
std::string to_json(const repr::VocabularyConfig& cfg);
repr::VocabularyConfig vocabulary_config_from_json(const std::string& text);

/// JSON file: {"vocabulary": {...}, "model": {...}}; both objects and all keys optional.
ProjectConfig load_project_config(const std::filesystem::path& path);
std::string to_json(const ProjectConfig& cfg);

}  // namespace qovae::vae
