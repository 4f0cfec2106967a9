#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "qovae/analysis/latent.hpp"
#include "qovae/analysis/report.hpp"
#include "qovae/analysis/stats.hpp"
#include "qovae/bo/bo.hpp"
#include "qovae/datagen/datagen.hpp"
#include "qovae/entanglement/entanglement.hpp"
#include "qovae/nn/checkpoint.hpp"
#include "qovae/optics/simulator.hpp"
#include "qovae/repr/dataset_io.hpp"
#include "qovae/repr/setup.hpp"
#include "qovae/vae/config.hpp"
#include "qovae/vae/model.hpp"
#include "qovae/vae/trainer.hpp"
#include "schemas.hpp"

using namespace qovae;
using nlohmann::json;

namespace {

// exit codes
constexpr int kInternal = 1;
constexpr int kUsage = 2;
constexpr int kBadInput = 3;
constexpr int kIo = 4;
constexpr int kCheckpoint = 5;
constexpr int kTimeout = 6;
constexpr int kDiverged = 7;
constexpr int kInvalidArtifact = 8;

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

vae::ProjectConfig project(const std::string& path) {
  return path.empty() ? vae::ProjectConfig{} : vae::load_project_config(path);
}

optics::SimulationConfig sim_of(const repr::VocabularyConfig& v) {
  return optics::SimulationConfig{v.down_conversion_order};
}

std::vector<repr::Setup> setups_of(const std::vector<repr::DatasetRecord>& records) {
  std::vector<repr::Setup> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.setup);
  return out;
}

std::vector<datagen::LabeledSetup> read_labeled(const std::string& path, const repr::Vocabulary& vocab,
                                                unsigned workers) {
  return datagen::label_all(setups_of(repr::read_dataset(path, vocab)), sim_of(vocab.config()), workers);
}

json state_json(const optics::QuantumState& state) {
  json kets = json::array();
  for (const auto& [ket, amp] : state.terms()) {
    const std::complex<double> a = state.amplitude(ket);
    kets.push_back({{"ket", ket.to_string()}, {"exact", amp.to_string()}, {"re", a.real()}, {"im", a.imag()}});
  }
  return kets;
}

json summary_json(const entanglement::EntanglementSummary& s) {
  json ent = json::object();
  for (int k = 0; k < entanglement::kNumBipartitions; ++k)
    ent[std::string(entanglement::bipartition_name(k))] = s.entropies[static_cast<std::size_t>(k)];
  return {{"entropies", ent}, {"srv", s.ranks}, {"S", s.total}};
}

struct Options {
  // shared
  std::string config, out, data, ckpt, seed_text;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  // gen-data
  datagen::GenerationSpec gen;
  std::optional<double> s_min, s_max, mix;
  bool no_dedup = false;
  std::string stats;
  // simulate
  std::string setup;
  // train
  std::optional<int> epochs;
  std::string log;
  // sample
  std::size_t n = 100;
  std::string mode = "sample";
  // interpolate
  std::string from, to;
  int steps = 8;
  // latent-map / distance
  std::vector<int> axes{0, 1};
  bool split_empty = false;
  std::size_t pairs = 500;
  int bins = 10;
  // analyze
  std::string gen_file, train_file;
  // bo
  std::string target, metric = "fidelity";
  double lambda = 0.1;
  int iters = 5, batch = 5;
  std::size_t max_points = 2000;
  int random_budget = -1;
  // validate
  std::string kind, file;
};

int cmd_gen_data(Options& o) {
  const auto cfg = project(o.config);
  const repr::Vocabulary vocab(cfg.vocabulary);
  datagen::GenerationSpec spec = o.gen;
  spec.s_min = o.s_min;
  spec.s_max = o.s_max;
  spec.mix = o.mix;
  spec.deduplicate = !o.no_dedup;
  spec.seed = o.seed;
  spec.workers = o.workers;
  if (spec.max_len < 0) spec.max_len = vocab.max_length();
  const datagen::GenerationResult res = datagen::generate_dataset(spec, vocab, sim_of(cfg.vocabulary));
  std::vector<repr::DatasetRecord> records;
  for (const auto& r : res.records) records.push_back(r.to_record());
  repr::write_dataset(o.out, records, "qovae dataset vocabulary " + vocab.hash());
  json stats{{"count", res.records.size()},
             {"draws", res.draws},
             {"duplicates", res.duplicates},
             {"skipped", res.skipped},
             {"seconds", res.seconds},
             {"acceptance_rate", res.acceptance_rate()},
             {"entangled_fraction", res.entangled_fraction()},
             {"seed", spec.seed},
             {"min_len", spec.min_len},
             {"max_len", spec.max_len},
             {"ntp_min", spec.ntp_min},
             {"s_min", spec.s_min ? json(*spec.s_min) : json(nullptr)},
             {"s_max", spec.s_max ? json(*spec.s_max) : json(nullptr)},
             {"mix", spec.mix ? json(*spec.mix) : json(nullptr)},
             {"vocabulary_hash", vocab.hash()}};
  const std::string stats_path = o.stats.empty() ? o.out + ".stats.json" : o.stats;
  std::ofstream(stats_path) << stats.dump(2) << '\n';
  std::cout << stats.dump() << '\n';
  return 0;
}

int cmd_simulate(Options& o) {
  const auto cfg = project(o.config);
  const repr::Vocabulary vocab(cfg.vocabulary);
  const repr::Setup setup = repr::parse(o.setup, vocab);
  json out{{"setup", repr::render(setup)}, {"length", setup.length()}, {"two_photon_devices", setup.two_photon_count()}};
  try {
    const optics::QuantumState state = optics::run_setup(setup.devices, sim_of(cfg.vocabulary));
    out["empty_state"] = false;
    out["kets"] = state_json(state);
    out["entanglement"] = summary_json(entanglement::summarize(state));
  } catch (const optics::EmptyStateError&) {
    out["empty_state"] = true;
    out["kets"] = json::array();
    out["entanglement"] = summary_json({});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_train(Options& o) {
  auto cfg = project(o.config);
  if (o.epochs) cfg.model.epochs = *o.epochs;
  if (!o.seed_text.empty()) cfg.model.seed = o.seed;
  const repr::Vocabulary vocab(cfg.vocabulary);
  const auto records = repr::read_dataset(o.data, vocab);
  vae::QovaeModel model(cfg.model, vocab);
  vae::TrainOptions opts;
  opts.checkpoint_prefix = o.out;
  opts.log_csv = o.log.empty() ? o.out + ".log.csv" : o.log;
  opts.on_epoch = [](const vae::EpochStats& s) {
    std::cerr << "epoch " << s.epoch << " recon " << s.train_recon << " kl " << s.train_kl << " val "
              << s.val_loss() << " (" << s.seconds << " s)\n";
  };
  const vae::TrainResult res = vae::train(model, setups_of(records), opts);
  std::cout << json{{"checkpoint", o.out},
                    {"log", opts.log_csv->string()},
                    {"best_epoch", res.best_epoch},
                    {"best_val_loss", res.best_val_loss},
                    {"train_size", res.train_size},
                    {"val_size", res.val_size}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_sample(Options& o) {
  const vae::QovaeModel model = vae::QovaeModel::load(o.ckpt);
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal;
  nn::Matrix z(model.latent_dim(), static_cast<Eigen::Index>(o.n));
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  const vae::DecodeMode mode = o.mode == "argmax" ? vae::DecodeMode::Argmax : vae::DecodeMode::Sample;
  const auto setups = model.decode_setups(z, mode, &rng);
  const auto labeled = datagen::label_all(setups, sim_of(model.vocabulary().config()), o.workers);
  std::vector<repr::DatasetRecord> records;
  std::size_t skipped = 0;
  for (const auto& r : labeled) {
    if (r.skipped) ++skipped;
    records.push_back(r.skipped ? repr::DatasetRecord{r.setup, std::nullopt} : r.to_record());
  }
  repr::write_dataset(o.out, records, "qovae samples from " + o.ckpt);
  std::vector<double> s;
  for (const auto& r : labeled)
    if (!r.skipped) s.push_back(r.entanglement());
  const auto st = analysis::entanglement_stats(s);
  std::cout << json{{"count", records.size()},
                    {"skipped", skipped},
                    {"mode_S", st.mode},
                    {"mean_S", st.mean},
                    {"sd_S", st.sd},
                    {"entangled_fraction", st.entangled_fraction}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_interpolate(Options& o) {
  const vae::QovaeModel model = vae::QovaeModel::load(o.ckpt);
  const auto& vocab = model.vocabulary();
  const auto path = analysis::interpolation_path(model, repr::parse(o.from, vocab), repr::parse(o.to, vocab), o.steps,
                                                 sim_of(vocab.config()));
  analysis::write_interpolation_csv(o.out, path);
  return 0;
}

int cmd_latent_map(Options& o) {
  const vae::QovaeModel model = vae::QovaeModel::load(o.ckpt);
  if (o.axes.size() != 2) throw std::invalid_argument("--axes takes two latent indices");
  const auto records = read_labeled(o.data, model.vocabulary(), o.workers);
  analysis::write_latent_map_csv(o.out, analysis::latent_map(model, records, {o.axes[0], o.axes[1]}, o.split_empty));
  return 0;
}

int cmd_distance(Options& o) {
  const vae::QovaeModel model = vae::QovaeModel::load(o.ckpt);
  const auto records = read_labeled(o.data, model.vocabulary(), o.workers);
  const auto pairs = analysis::distance_vs_ds(model, records, o.pairs, o.seed);
  analysis::write_distance_csv(o.out, pairs);
  analysis::write_distance_bins_csv(o.out + ".bins.csv", analysis::bin_distances(pairs, o.bins));
  std::vector<double> d, ds;
  for (const auto& p : pairs) {
    d.push_back(p.distance);
    ds.push_back(p.abs_ds);
  }
  const auto sp = analysis::spearman(d, ds);
  std::cout << json{{"pairs", pairs.size()}, {"spearman_rho", sp.rho}, {"p_greater", sp.p_greater}}.dump() << '\n';
  return 0;
}

int cmd_analyze(Options& o) {
  repr::Vocabulary vocab(project(o.config).vocabulary);
  if (!o.ckpt.empty()) vocab = vae::QovaeModel::load(o.ckpt).vocabulary();
  const auto gen = read_labeled(o.gen_file, vocab, o.workers);
  const auto train = read_labeled(o.train_file, vocab, o.workers);
  const auto report = analysis::compare_distributions(gen, train, sim_of(vocab.config()));
  analysis::write_report(o.out, report);
  std::ifstream in(std::filesystem::path(o.out) / "summary.json");
  std::cout << in.rdbuf();
  return 0;
}

int cmd_bo(Options& o) {
  const vae::QovaeModel model = vae::QovaeModel::load(o.ckpt);
  const auto& vocab = model.vocabulary();
  const auto setups = setups_of(repr::read_dataset(o.data, vocab));
  bo::ObjectiveConfig obj;
  obj.target = o.target.empty() ? bo::ghz_target() : bo::read_target(o.target);
  obj.lambda = o.lambda;
  obj.max_length = vocab.max_length();
  obj.metric = bo::metric_from_string(o.metric);
  bo::BoConfig cfg;
  cfg.iterations = o.iters;
  cfg.batch = o.batch;
  cfg.seed = o.seed;
  cfg.gp.max_points = o.max_points;
  cfg.sim = sim_of(vocab.config());
  const Eigen::MatrixXd latents = model.encode_means(setups);
  const bo::BoResult res = bo::bo_loop(model, latents, bo::objective_values(setups, obj, cfg.sim), obj, cfg);
  bo::write_bo_csv(o.out, res);
  for (const auto& w : res.warnings) std::cerr << json{{"warning", w}}.dump() << '\n';
  json summary{{"evaluated", res.entries.size()}, {"best_y", res.best_y()}, {"empty_setups", res.empty_setups}};
  if (!res.entries.empty()) {
    summary["best_setup"] = repr::render(res.entries.front().setup);
    summary["best_fidelity"] = res.entries.front().value.fidelity;
  }
  if (o.random_budget != 0) {
    const int budget = o.random_budget < 0 ? o.iters * o.batch : o.random_budget;
    const bo::BoResult rnd = bo::random_search(model, bo::latent_box(latents), budget, obj, o.seed + 1, cfg.sim);
    bo::write_bo_csv(o.out + ".random.csv", rnd);
    summary["random_best_y"] = rnd.best_y();
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_validate(Options& o) {
  const repr::Vocabulary vocab(project(o.config).vocabulary);
  const auto problems = tool::validate_file(o.kind, o.file, vocab);
  if (problems.empty()) {
    std::cout << json{{"valid", true}, {"kind", o.kind}}.dump() << '\n';
    return 0;
  }
  std::cout << json{{"valid", false}, {"kind", o.kind}, {"problems", problems}}.dump() << '\n';
  return kInvalidArtifact;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative modelling of quantum optics experiments"};
  app.require_subcommand(1);
  Options o;
  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed_text, "RNG seed"); };
  auto config_opt = [&](CLI::App* c) { c->add_option("--config", o.config, "JSON config (vocabulary + model)")->check(CLI::ExistingFile); };
  auto workers_opt = [&](CLI::App* c) { c->add_option("--workers", o.workers, "worker threads, 0 = all cores"); };

  auto* gen = app.add_subcommand("gen-data", "Sample, simulate and filter random setups");
  gen->add_option("--count", o.gen.count, "records to keep")->required();
  gen->add_option("--min-len", o.gen.min_len, "shortest setup");
  gen->add_option("--max-len", o.gen.max_len, "longest setup (default: vocabulary T)")->default_val(-1);
  gen->add_option("--s-min", o.s_min, "keep entangled setups with S above this");
  gen->add_option("--s-max", o.s_max, "keep entangled setups with S below this");
  gen->add_option("--ntp-min", o.gen.ntp_min, "minimum number of two-photon devices");
  gen->add_option("--mix", o.mix, "fraction of entangled records");
  gen->add_flag("--no-dedup", o.no_dedup, "keep duplicate setups");
  gen->add_option("--stats", o.stats, "stats JSON path (default OUT.stats.json)");
  gen->add_option("--out", o.out, "dataset file")->required();
  seed_opt(gen);
  config_opt(gen);
  workers_opt(gen);

  auto* sim = app.add_subcommand("simulate", "Print the post-selected state and its entanglement");
  sim->add_option("--setup", o.setup, "device tokens, e.g. \"BS(a,b) Ref(c)\"")->required();
  config_opt(sim);

  auto* train = app.add_subcommand("train", "Train the autoencoder");
  train->add_option("--data", o.data, "dataset file")->required()->check(CLI::ExistingFile);
  train->add_option("--out", o.out, "checkpoint prefix")->required();
  train->add_option("--epochs", o.epochs, "override model.epochs");
  train->add_option("--log", o.log, "log CSV (default OUT.log.csv)");
  seed_opt(train);
  config_opt(train);

  auto* sample = app.add_subcommand("sample", "Decode prior samples into labeled setups");
  sample->add_option("--ckpt", o.ckpt, "checkpoint prefix")->required();
  sample->add_option("--n", o.n, "number of samples");
  sample->add_option("--mode", o.mode, "sample or argmax")->check(CLI::IsMember({"sample", "argmax"}));
  sample->add_option("--out", o.out, "dataset file")->required();
  seed_opt(sample);
  workers_opt(sample);

  auto* interp = app.add_subcommand("interpolate", "Decode a spherical path between two setups");
  interp->add_option("--ckpt", o.ckpt, "checkpoint prefix")->required();
  interp->add_option("--from", o.from, "start setup tokens")->required();
  interp->add_option("--to", o.to, "end setup tokens")->required();
  interp->add_option("--steps", o.steps, "points on the path, ends included");
  interp->add_option("--out", o.out, "CSV path")->required();

  auto* lmap = app.add_subcommand("latent-map", "Encoder means with setup properties");
  lmap->add_option("--ckpt", o.ckpt, "checkpoint prefix")->required();
  lmap->add_option("--data", o.data, "dataset file")->required()->check(CLI::ExistingFile);
  lmap->add_option("--axes", o.axes, "two latent coordinates to project on")->expected(2);
  lmap->add_flag("--split-empty", o.split_empty, "separate groups for devices on paths e/f");
  lmap->add_option("--out", o.out, "CSV path")->required();
  workers_opt(lmap);

  auto* dist = app.add_subcommand("distance", "Latent distance against entanglement difference");
  dist->add_option("--ckpt", o.ckpt, "checkpoint prefix")->required();
  dist->add_option("--data", o.data, "dataset file")->required()->check(CLI::ExistingFile);
  dist->add_option("--pairs", o.pairs, "random pairs");
  dist->add_option("--bins", o.bins, "distance bins");
  dist->add_option("--out", o.out, "CSV path (bins go to OUT.bins.csv)")->required();
  seed_opt(dist);
  workers_opt(dist);

  auto* analyze = app.add_subcommand("analyze", "Compare generated and training distributions");
  analyze->add_option("--gen", o.gen_file, "generated dataset")->required()->check(CLI::ExistingFile);
  analyze->add_option("--train", o.train_file, "training dataset")->required()->check(CLI::ExistingFile);
  analyze->add_option("--ckpt", o.ckpt, "take the vocabulary from this checkpoint");
  analyze->add_option("--out", o.out, "report directory")->required();
  config_opt(analyze);
  workers_opt(analyze);

  auto* bopt = app.add_subcommand("bo", "Bayesian optimization towards a target state");
  bopt->add_option("--ckpt", o.ckpt, "checkpoint prefix")->required();
  bopt->add_option("--data", o.data, "dataset whose latents seed the GP")->required()->check(CLI::ExistingFile);
  bopt->add_option("--target", o.target, "target file of `re im i j k l` lines (default 2-level GHZ)");
  bopt->add_option("--lambda", o.lambda, "length penalty weight");
  bopt->add_option("--iters", o.iters, "BO rounds");
  bopt->add_option("--batch", o.batch, "candidates per round");
  bopt->add_option("--metric", o.metric, "fidelity, prob-fidelity, neg-mse, neg-kl or entanglement");
  bopt->add_option("--max-points", o.max_points, "GP subsample size");
  bopt->add_option("--random-budget", o.random_budget, "random-latent baseline evaluations (-1 = iters*batch, 0 = off)");
  bopt->add_option("--out", o.out, "ranked CSV path")->required();
  seed_opt(bopt);

  auto* validate = app.add_subcommand("validate", "Check an output file against its schema");
  validate->group("");
  validate->add_option("--kind", o.kind, "schema name")->required()->check(CLI::IsMember(tool::schema_kinds()));
  validate->add_option("--file", o.file, "file to check")->required()->check(CLI::ExistingFile);
  config_opt(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  try {
    if (!o.seed_text.empty()) o.seed = std::stoull(o.seed_text);
    if (*gen) return cmd_gen_data(o);
    if (*sim) return cmd_simulate(o);
    if (*train) return cmd_train(o);
    if (*sample) return cmd_sample(o);
    if (*interp) return cmd_interpolate(o);
    if (*lmap) return cmd_latent_map(o);
    if (*dist) return cmd_distance(o);
    if (*analyze) return cmd_analyze(o);
    if (*bopt) return cmd_bo(o);
    if (*validate) return cmd_validate(o);
  } catch (const repr::ParseError& e) {
    return fail("parse", e.what(), kBadInput);
  } catch (const nn::CheckpointError& e) {
    return fail("checkpoint", e.what(), kCheckpoint);
  } catch (const datagen::GenerationTimeout& e) {
    return fail("timeout", e.what(), kTimeout);
  } catch (const vae::TrainingDiverged& e) {
    return fail("diverged", e.what(), kDiverged);
  } catch (const json::exception& e) {
    return fail("invalid-input", e.what(), kBadInput);
  } catch (const std::logic_error& e) {
    return fail("invalid-input", e.what(), kBadInput);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), kIo);
  } catch (const std::runtime_error& e) {
    return fail("io", e.what(), kIo);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
  return kInternal;
}
