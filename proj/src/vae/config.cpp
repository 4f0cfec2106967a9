#include "qovae/vae/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qovae::vae {

using nlohmann::json;

void QovaeConfig::validate() const {
  if (latent_dim < 1) throw std::invalid_argument("latent_dim must be >= 1");
  if (conv_filters.size() != conv_kernels.size() || conv_filters.empty()) {
    throw std::invalid_argument("conv_filters and conv_kernels must be non-empty and equally long");
  }
  for (int f : conv_filters)
    if (f < 1) throw std::invalid_argument("conv filter count must be >= 1");
  for (int k : conv_kernels)
    if (k < 1) throw std::invalid_argument("conv kernel length must be >= 1");
  if (conv_out_steps() < 1) throw std::invalid_argument("convolutions leave no output steps");
  for (int h : encoder_hidden)
    if (h < 1) throw std::invalid_argument("encoder hidden width must be >= 1");
  if (decoder_seed < 1 || gru_layers < 1 || gru_hidden < 1) throw std::invalid_argument("decoder sizes must be >= 1");
  if (steps < 1 || classes < 2) throw std::invalid_argument("steps/classes invalid");
  if (!(lr > 0) || batch < 1 || epochs < 0) throw std::invalid_argument("training settings invalid");
  if (val_fraction < 0 || val_fraction >= 1) throw std::invalid_argument("val_fraction must be in [0, 1)");
  if (grad_clip < 0) throw std::invalid_argument("grad_clip must be >= 0");
}

int QovaeConfig::conv_out_steps() const {
  int t = steps;
  for (int k : conv_kernels) t -= k - 1;
  return t;
}

QovaeConfig bind_to_vocabulary(QovaeConfig cfg, const repr::Vocabulary& vocab) {
  cfg.steps = vocab.max_length();
  cfg.classes = vocab.size();
  cfg.validate();
  return cfg;
}

namespace {

json model_json(const QovaeConfig& c) {
  return json{{"latent_dim", c.latent_dim},     {"conv_filters", c.conv_filters}, {"conv_kernels", c.conv_kernels},
              {"encoder_hidden", c.encoder_hidden}, {"decoder_seed", c.decoder_seed}, {"gru_layers", c.gru_layers},
              {"gru_hidden", c.gru_hidden},     {"steps", c.steps},               {"classes", c.classes},
              {"lr", c.lr},                     {"batch", c.batch},               {"epochs", c.epochs},
              {"val_fraction", c.val_fraction}, {"grad_clip", c.grad_clip},       {"seed", c.seed}};
}

QovaeConfig model_from(const json& j) {
  QovaeConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("latent_dim", c.latent_dim);
  get("conv_filters", c.conv_filters);
  get("conv_kernels", c.conv_kernels);
  get("encoder_hidden", c.encoder_hidden);
  get("decoder_seed", c.decoder_seed);
  get("gru_layers", c.gru_layers);
  get("gru_hidden", c.gru_hidden);
  get("steps", c.steps);
  get("classes", c.classes);
  get("lr", c.lr);
  get("batch", c.batch);
  get("epochs", c.epochs);
  get("val_fraction", c.val_fraction);
  get("grad_clip", c.grad_clip);
  get("seed", c.seed);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!model_json(QovaeConfig{}).contains(it.key())) throw std::invalid_argument("unknown model key: " + it.key());
  }
  return c;
}

json vocab_json(const repr::VocabularyConfig& c) {
  return json{{"num_paths", c.num_paths},
              {"hologram_shifts", c.hologram_shifts},
              {"max_length", c.max_length},
              {"down_conversion_order", c.down_conversion_order}};
}

repr::VocabularyConfig vocab_from(const json& j) {
  repr::VocabularyConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!vocab_json(c).contains(it.key())) throw std::invalid_argument("unknown vocabulary key: " + it.key());
  }
  if (j.contains("num_paths")) j.at("num_paths").get_to(c.num_paths);
  if (j.contains("hologram_shifts")) j.at("hologram_shifts").get_to(c.hologram_shifts);
  if (j.contains("max_length")) j.at("max_length").get_to(c.max_length);
  if (j.contains("down_conversion_order")) j.at("down_conversion_order").get_to(c.down_conversion_order);
  c.validate();
  return c;
}

}  // namespace

std::string to_json(const QovaeConfig& cfg) { return model_json(cfg).dump(); }
QovaeConfig qovae_config_from_json(const std::string& text) { return model_from(json::parse(text)); }
std::string to_json(const repr::VocabularyConfig& cfg) { return vocab_json(cfg).dump(); }
repr::VocabularyConfig vocabulary_config_from_json(const std::string& text) { return vocab_from(json::parse(text)); }

ProjectConfig load_project_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str());
  ProjectConfig out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "vocabulary" && it.key() != "model") throw std::invalid_argument("unknown config section: " + it.key());
  }
  if (j.contains("vocabulary")) out.vocabulary = vocab_from(j.at("vocabulary"));
  if (j.contains("model")) out.model = model_from(j.at("model"));
  return out;
}

std::string to_json(const ProjectConfig& cfg) {
  return json{{"vocabulary", vocab_json(cfg.vocabulary)}, {"model", model_json(cfg.model)}}.dump(2);
}

}  // namespace qovae::vae
