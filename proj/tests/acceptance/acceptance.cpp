// End-to-end acceptance run. Prints one [PASS]/[FAIL] line per criterion and
// exits non-zero if any criterion fails. Artifacts (datasets, checkpoints,
// reports, CSVs) are written under --out for inspection and plotting.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include "gradcheck.hpp"
#include "oracle.hpp"
#include "qovae/analysis/latent.hpp"
#include "qovae/analysis/report.hpp"
#include "qovae/analysis/stats.hpp"
#include "qovae/bo/bo.hpp"
#include "qovae/bo/objective.hpp"
#include "qovae/datagen/datagen.hpp"
#include "qovae/entanglement/entanglement.hpp"
#include "qovae/nn/layers.hpp"
#include "qovae/optics/simulator.hpp"
#include "qovae/repr/dataset_io.hpp"
#include "qovae/repr/setup.hpp"
#include "qovae/vae/model.hpp"
#include "qovae/vae/trainer.hpp"

namespace fs = std::filesystem;
using namespace qovae;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;
int g_passed = 0;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void verdict(const std::string& name, bool pass, const std::string& detail) {
  (pass ? g_passed : g_failed) += 1;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
}

void info(const std::string& name, const std::string& detail) { std::cout << "[INFO] " << name << ": " << detail << std::endl; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Runs one criterion; an exception counts as a failure with its message.
void criterion(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(name, false, std::string("threw: ") + e.what());
  }
}

const repr::Vocabulary& vocab() {
  static const repr::Vocabulary v;
  return v;
}

optics::QuantumState simulate(const std::string& tokens) {
  return optics::run_setup(repr::parse(tokens, vocab()).devices);
}

optics::Ket four(int a, int b, int c, int d) {
  using optics::Path;
  return optics::Ket{{Path::a, a}, {Path::b, b}, {Path::c, c}, {Path::d, d}};
}

std::vector<datagen::LabeledSetup> random_labeled(std::size_t n, std::uint64_t seed, int min_len, int max_len) {
  std::vector<repr::Setup> setups;
  setups.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = datagen::draw_rng(seed, i);
    setups.push_back(datagen::sample_setup(rng, vocab(), min_len, max_len));
  }
  return datagen::label_all(setups);
}

double entangled_percent(const std::vector<datagen::LabeledSetup>& recs) {
  std::size_t ent = 0, kept = 0;
  for (const auto& r : recs) {
    if (r.skipped) continue;
    ++kept;
    ent += r.entangled();
  }
  return 100.0 * static_cast<double>(ent) / static_cast<double>(kept);
}

std::vector<repr::Setup> setups_of(const std::vector<datagen::LabeledSetup>& recs) {
  std::vector<repr::Setup> out;
  for (const auto& r : recs) out.push_back(r.setup);
  return out;
}

std::vector<datagen::LabeledSetup> dataset(const fs::path& path, const datagen::GenerationSpec& spec) {
  const auto res = datagen::generate_dataset(spec, vocab());
  std::vector<repr::DatasetRecord> rows;
  for (const auto& r : res.records) rows.push_back(r.to_record());
  repr::write_dataset(path, rows, "acceptance dataset");
  info(path.filename().string(), fmt("%zu records from %zu draws in %.1f s", res.records.size(), res.draws, res.seconds));
  return res.records;
}

// Trains (or, with --reuse, reloads) a model; the log CSV lands next to the checkpoint.
vae::QovaeModel trained_model(const fs::path& prefix, vae::QovaeConfig cfg, const std::vector<repr::Setup>& data,
                              bool reuse) {
  if (reuse && fs::exists(prefix.string() + ".manifest")) {
    info(prefix.filename().string(), "reusing existing checkpoint");
    return vae::QovaeModel::load(prefix);
  }
  vae::QovaeModel model(cfg, vocab());
  vae::TrainOptions opts;
  opts.checkpoint_prefix = prefix;
  opts.log_csv = prefix.string() + ".log.csv";
  const auto t0 = Clock::now();
  const auto res = vae::train(model, data, opts);
  const auto& last = res.history.back();
  info(prefix.filename().string(),
       fmt("%d epochs in %.0f s; final recon %.3f kl %.3f; best val loss %.3f at epoch %d", cfg.epochs, since(t0),
           last.train_recon, last.train_kl, res.best_val_loss, res.best_epoch));
  return model;
}

std::vector<datagen::LabeledSetup> prior_samples(const vae::QovaeModel& model, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  nn::Matrix z(model.latent_dim(), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = normal(rng);
  return datagen::label_all(model.decode_setups(z, vae::DecodeMode::Sample, &rng));
}

// ---------------------------------------------------------------------------

void golden_state() {
  const auto t0 = Clock::now();
  const auto s = simulate("BS(b,c) OAMHolo(b,1) DownConv(c,d) Ref(c) OAMHolo(a,1)");
  const optics::Ket kets[3] = {four(1, 1, -1, -1), four(1, 1, 0, 0), four(1, 1, 1, 1)};
  const auto a = s.exact(kets[0]);
  bool ok = s.size() == 3 && !a.is_zero() && s.exact(kets[1]) == a && s.exact(kets[2]) == a;
  double worst = 0.0;
  const std::complex<double> phase = s.amplitude(kets[0]) / std::abs(s.amplitude(kets[0]));
  for (const auto& k : kets) worst = std::max(worst, std::abs(s.amplitude(k) / phase - 1.0 / std::sqrt(3.0)));
  const double secs = since(t0);
  ok = ok && worst < 1e-12 && secs < 1.0;
  verdict("golden state", ok,
          fmt("%zu kets, exact amplitudes equal: %s, max float deviation %.1e, %.3f s", s.size(),
              (s.size() == 3 && s.exact(kets[1]) == a && s.exact(kets[2]) == a) ? "yes" : "no", worst, secs));
}

void ghz_reproduction() {
  const auto t0 = Clock::now();
  const auto s =
      simulate("Ref(a) OAMHolo(d,-1) BS(b,c) DP(d) Ref(c) OAMHolo(b,-1) Ref(d) BS(a,b) BS(c,d) BS(a,c) BS(a,c)");
  const auto terms = entanglement::basis_amplitudes(s);
  const double fid = bo::state_metric(terms, bo::ghz_target(), bo::Metric::Fidelity);
  const auto sum = entanglement::summarize(s);
  bool srv = true;
  for (int r : sum.ranks) srv = srv && r == 2;
  const double secs = since(t0);
  const bool ok = fid >= 0.999 && std::abs(sum.total - 4.852) <= 0.005 && srv && secs < 5.0;
  verdict("GHZ reproduction", ok, fmt("fidelity %.12f, S = %.6f, SRV all 2: %s, %.3f s", fid, sum.total, srv ? "yes" : "no", secs));
}

void ghz_measure() {
  optics::QuantumState s;
  s.accumulate(four(0, 0, 0, 0), optics::Amplitude::one());
  s.accumulate(four(1, 1, 1, 1), optics::Amplitude::one());
  s.normalize();
  const auto sum = entanglement::summarize(s);
  double worst = 0.0;
  for (double e : sum.entropies) worst = std::max(worst, std::abs(e - 0.693147));
  const bool ok = worst <= 1e-6 && std::abs(sum.total - 4.852030) <= 1e-5;
  verdict("GHZ measure", ok, fmt("max |s_k - 0.693147| = %.2e, S = %.7f", worst, sum.total));
}

void entangled_fractions() {
  const auto t0 = Clock::now();
  const double f6 = entangled_percent(random_labeled(10000, 601, 6, 6));
  const double fmix = entangled_percent(random_labeled(10000, 602, 3, 12));
  const double secs = since(t0);
  const bool ok = std::abs(f6 - 33.1) <= 8.0 && std::abs(fmix - 40.6) <= 8.0 && secs < 600;
  verdict("entangled-space fractions", ok,
          fmt("length 6: %.2f%% (target 33.1 +- 8), lengths 3..12: %.2f%% (target 40.6 +- 8), %.1f s", f6, fmix, secs));
}

void ntp_necessity() {
  const auto recs = random_labeled(50000, 603, 3, 12);
  std::size_t bad = 0, kept = 0;
  std::string example;
  for (const auto& r : recs) {
    if (r.skipped) continue;
    ++kept;
    if (r.entangled() && r.two_photon_devices <= 1) {
      if (!bad) example = repr::render(r.setup) + fmt(" (S = %.3f, n_tp = %d)", r.entanglement(), r.two_photon_devices);
      ++bad;
    }
  }
  verdict("n_tp necessity", bad == 0,
          fmt("%zu of %zu setups have S > 0 with n_tp <= 1", bad, kept) + (bad ? "; e.g. " + example : ""));
}

void oracle_equivalence() {
  std::mt19937_64 rng(604);
  int done = 0;
  double worst = 0.0;
  while (done < 100) {
    const auto lab = datagen::label(datagen::sample_setup(rng, vocab(), 3, 12));
    if (lab.skipped || !lab.entangled()) continue;
    const auto terms = entanglement::basis_amplitudes(optics::run_setup(lab.setup.devices));
    for (int k = 0; k < 7; ++k)
      worst = std::max(worst, std::abs(testing::dense_entropy(terms, entanglement::kBipartitionMasks[k]) -
                                       lab.summary.entropies[k]));
    ++done;
  }
  verdict("oracle equivalence", worst < 1e-9, fmt("max entropy difference over 100 entangled setups: %.2e", worst));
}

void gradient_suite() {
  using nn::Matrix;
  using testing::gradcheck;
  using testing::random_matrix;
  std::mt19937_64 rng(605);
  std::uniform_int_distribution<int> dim(1, 6), kern(1, 4);
  double dense = 0, mlp = 0, conv = 0, gru = 0, ce = 0;
  for (int s = 0; s < 20; ++s) {
    {
      const int in = dim(rng), out = dim(rng), batch = dim(rng);
      nn::ParamStore store;
      nn::Dense layer(store, "d", in, out);
      store.init_uniform(rng);
      Matrix x = random_matrix(in, batch, rng);
      dense = std::max(dense, gradcheck(
                                  store, x, [&] { return layer.forward(store, x); },
                                  [&](const Matrix& r) { return layer.backward(store, x, r); }, rng));
    }
    {
      std::vector<int> widths{dim(rng), dim(rng), dim(rng)};
      if (s % 2) widths.push_back(dim(rng));
      const int batch = dim(rng);
      nn::ParamStore store;
      nn::Mlp net(store, "m", widths, s % 3 == 0);
      store.init_uniform(rng);
      Matrix x = random_matrix(widths.front(), batch, rng);
      mlp = std::max(mlp, gradcheck(
                              store, x, [&] { return net.forward(store, x); },
                              [&](const Matrix& r) {
                                nn::Mlp::Cache c;
                                net.forward(store, x, &c);
                                return net.backward(store, c, r);
                              },
                              rng));
    }
    {
      const int channels = dim(rng), filters = dim(rng), kernel = kern(rng), batch = dim(rng);
      const int steps = kernel + dim(rng) - 1;
      nn::ParamStore store;
      nn::Conv1d layer(store, "c", channels, filters, kernel);
      store.init_uniform(rng);
      Matrix x = random_matrix(channels, batch * steps, rng);
      conv = std::max(conv, gradcheck(
                                store, x, [&] { return layer.forward(store, x, batch, steps); },
                                [&](const Matrix& r) {
                                  nn::Conv1d::Cache c;
                                  layer.forward(store, x, batch, steps, &c);
                                  return layer.backward(store, c, r);
                                },
                                rng));
    }
    {
      const int in = dim(rng), hidden = dim(rng), batch = dim(rng), steps = dim(rng);
      nn::ParamStore store;
      nn::Gru layer(store, "g", in, hidden);
      store.init_uniform(rng);
      Matrix x = random_matrix(in, batch * steps, rng);
      gru = std::max(gru, gradcheck(
                              store, x, [&] { return layer.forward(store, x, batch, steps); },
                              [&](const Matrix& r) {
                                nn::Gru::Cache c;
                                layer.forward(store, x, batch, steps, &c);
                                return layer.backward(store, c, r);
                              },
                              rng));
    }
    {
      const int classes = dim(rng) + 1, cols = dim(rng);
      std::uniform_int_distribution<int> cls(0, classes - 1);
      std::vector<int> targets;
      for (int c = 0; c < cols; ++c) targets.push_back(cls(rng));
      Matrix logits = random_matrix(classes, cols, rng);
      Matrix grad;
      nn::softmax_cross_entropy(logits, targets, 1.0, &grad);
      for (Eigen::Index i = 0; i < logits.size(); ++i) {
        const double keep = logits.data()[i];
        logits.data()[i] = keep + 1e-5;
        const double lp = nn::softmax_cross_entropy(logits, targets, 1.0, nullptr);
        logits.data()[i] = keep - 1e-5;
        const double lm = nn::softmax_cross_entropy(logits, targets, 1.0, nullptr);
        logits.data()[i] = keep;
        const double n = (lp - lm) / 2e-5, a = grad.data()[i];
        ce = std::max(ce, std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-4}));
      }
    }
  }
  // whole model: conv encoder, reparameterization, GRU decoder, ELBO
  vae::QovaeConfig small;
  small.latent_dim = 3;
  small.conv_filters = {4, 4, 4};
  small.encoder_hidden = {12};
  small.decoder_seed = 8;
  small.gru_layers = 2;
  small.gru_hidden = 10;
  vae::QovaeModel m(small, vocab());
  std::vector<std::vector<int>> seqs;
  for (int i = 0; i < 4; ++i) seqs.push_back(m.indices(datagen::sample_setup(rng, vocab())));
  std::vector<const std::vector<int>*> batch;
  for (const auto& s : seqs) batch.push_back(&s);
  Matrix noise = random_matrix(3, 4, rng);
  m.params().zero_grad();
  m.forward_backward(batch, noise, true);
  const std::vector<double> grad(m.params().grads().begin(), m.params().grads().end());
  auto values = m.params().values();
  double model = 0;
  for (const auto& p : m.params().info()) {
    const std::size_t stride = std::max<std::size_t>(1, p.size / 25);
    for (std::size_t k = 0; k < p.size; k += stride) {
      const std::size_t i = p.offset + k;
      const double keep = values[i];
      values[i] = keep + 1e-5;
      const double lp = m.forward_backward(batch, noise, false);
      values[i] = keep - 1e-5;
      const double lm = m.forward_backward(batch, noise, false);
      values[i] = keep;
      const double n = (lp - lm) / 2e-5;
      model = std::max(model, std::abs(n - grad[i]) / std::max({std::abs(n), std::abs(grad[i]), 1e-4}));
    }
  }
  const double worst = std::max({dense, mlp, conv, gru, ce, model});
  verdict("gradient suite", worst < 1e-4,
          fmt("max relative error: dense %.1e, mlp %.1e, conv1d %.1e, gru %.1e, softmax-CE %.1e, full model %.1e", dense,
              mlp, conv, gru, ce, model));
}

void reconstruction_info(const vae::QovaeModel& model, const std::vector<repr::Setup>& held_out, const std::string& name) {
  std::size_t exact = 0;
  for (const auto& s : held_out) exact += model.decode_setup(model.encode(s).mean, vae::DecodeMode::Argmax) == s;
  info(name + " held-out reconstruction",
       fmt("%zu of %zu exact (%.1f%%)", exact, held_out.size(), 100.0 * static_cast<double>(exact) / held_out.size()));
}

void table_one(const fs::path& out, bool reuse) {
  const auto t0 = Clock::now();
  datagen::GenerationSpec spec;
  spec.count = 3000;
  spec.s_min = 4.0;
  spec.s_max = 5.0;
  spec.seed = 606;
  const auto train = dataset(out / "level_4_5.txt", spec);
  vae::QovaeConfig cfg;
  cfg.latent_dim = 6;
  cfg.epochs = 200;
  cfg.seed = 606;
  const auto model = trained_model(out / "qovae_high_level", cfg, setups_of(train), reuse);

  spec.count = 300;
  spec.seed = 6060;
  reconstruction_info(model, setups_of(datagen::generate_dataset(spec, vocab()).records), "level model");

  const auto gen = prior_samples(model, 3000, 6061);
  const auto report = analysis::compare_distributions(gen, train);
  analysis::write_report(out / "level_report", report);
  const auto& g = report.generated.stats;
  const auto& t = report.training.stats;
  info("level model SD of S", fmt("generated %.3f vs training %.3f (logged only)", g.sd, t.sd));
  const bool ok = std::abs(g.mode - t.mode) < 5e-7 && std::abs(g.mean - t.mean) <= 0.8;
  verdict("Table-I analogue", ok,
          fmt("mode generated %.6f (%zu) vs training %.6f (%zu); mean %.3f vs %.3f; %.0f s", g.mode, g.mode_count, t.mode,
              t.mode_count, g.mean, t.mean, since(t0)));
}

void result_one(const fs::path& out, bool reuse) {
  const auto t0 = Clock::now();
  datagen::GenerationSpec spec;
  spec.count = 2000;
  spec.min_len = 6;
  spec.max_len = 6;
  spec.s_min = 0.0;
  spec.ntp_min = 2;
  spec.seed = 607;
  const auto train = dataset(out / "entangled_len6.txt", spec);
  vae::QovaeConfig cfg;
  cfg.latent_dim = 6;
  cfg.epochs = 200;
  cfg.seed = 607;
  const auto model = trained_model(out / "qovae_high_len6", cfg, setups_of(train), reuse);
  const auto gen = prior_samples(model, 2000, 6071);
  const auto report = analysis::compare_distributions(gen, train);
  analysis::write_report(out / "len6_report", report);
  const double ent = 100.0 * report.generated.stats.entangled_fraction;
  const double uniq = 100.0 * report.unique_novel.unique, nov = 100.0 * report.unique_novel.novel;
  verdict("Result-1 analogue", ent >= 70.0 && uniq >= 95.0 && nov >= 90.0,
          fmt("generated S>0 %.1f%% (>= 70), unique %.1f%% (>= 95), novel %.1f%% (>= 90); %.0f s", ent, uniq, nov,
              since(t0)));
}

void latent_purity(const fs::path& out, const std::vector<datagen::LabeledSetup>& train, bool reuse) {
  const auto t0 = Clock::now();
  vae::QovaeConfig cfg;
  cfg.latent_dim = 2;
  cfg.epochs = 200;
  cfg.seed = 608;
  const auto model = trained_model(out / "qovae_low_mixed", cfg, setups_of(train), reuse);
  const auto rows = analysis::latent_map(model, train);
  analysis::write_latent_map_csv(out / "latent_map_low.csv", rows);
  Eigen::MatrixXd pts(2, static_cast<Eigen::Index>(rows.size()));
  std::vector<int> lengths;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pts(0, static_cast<Eigen::Index>(i)) = rows[i].x;
    pts(1, static_cast<Eigen::Index>(i)) = rows[i].y;
    lengths.push_back(rows[i].length);
  }
  const int k = static_cast<int>(std::set<int>(lengths.begin(), lengths.end()).size());
  const auto km = analysis::kmeans(pts, k, 608);
  const double purity = analysis::cluster_purity(km.labels, lengths);
  const double chance = analysis::majority_fraction(lengths);
  verdict("latent length clustering", purity >= 2 * chance,
          fmt("k-means (k = %d) length purity %.3f vs chance %.3f (need >= %.3f); %.0f s", k, purity, chance, 2 * chance,
              since(t0)));
}

void spearman_and_bo(const fs::path& out, const std::vector<datagen::LabeledSetup>& train, bool reuse) {
  auto t0 = Clock::now();
  vae::QovaeConfig cfg;
  cfg.latent_dim = 6;
  cfg.epochs = 200;
  cfg.seed = 609;
  const auto model = trained_model(out / "qovae_high_mixed", cfg, setups_of(train), reuse);
  reconstruction_info(model, setups_of(random_labeled(300, 6090, 3, 12)), "mixed model");

  criterion("interpolation smoothness", [&] {
    const auto pairs = analysis::distance_vs_ds(model, train, 50, 609);
    analysis::write_distance_csv(out / "distance_high_mixed.csv", pairs);
    std::vector<double> d, ds;
    for (const auto& p : pairs) {
      d.push_back(p.distance);
      ds.push_back(p.abs_ds);
    }
    const auto sp = analysis::spearman(d, ds);
    verdict("interpolation smoothness", sp.rho > 0 && sp.p_greater < 0.01,
            fmt("Spearman rho %.3f, one-sided p %.2e over %zu pairs", sp.rho, sp.p_greater, sp.n));
  });

  criterion("BO sanity", [&] {
    t0 = Clock::now();
    bo::ObjectiveConfig obj;
    obj.target = bo::ghz_target();
    obj.lambda = 0.1;
    obj.max_length = vocab().max_length();
    const auto setups = setups_of(train);
    const Eigen::MatrixXd latents = model.encode_means(setups);
    const Eigen::VectorXd y = bo::objective_values(setups, obj);
    const auto box = bo::latent_box(latents);
    int wins = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      bo::BoConfig cfg_bo;
      cfg_bo.iterations = 5;
      cfg_bo.batch = 5;
      cfg_bo.seed = 6100 + seed;
      cfg_bo.gp.max_points = 500;
      cfg_bo.gp.seed = 6100 + seed;
      const auto res = bo::bo_loop(model, latents, y, obj, cfg_bo);
      const auto rnd = bo::random_search(model, box, cfg_bo.iterations * cfg_bo.batch, obj, 6200 + seed);
      if (seed == 1) {
        bo::write_bo_csv(out / "bo_ghz.csv", res);
        bo::write_bo_csv(out / "bo_ghz.random.csv", rnd);
      }
      wins += res.best_y() > rnd.best_y();
      detail += fmt("%s%.4f vs %.4f", seed == 1 ? "" : ", ", res.best_y(), rnd.best_y());
    }
    verdict("BO sanity", wins >= 4,
            fmt("BO beat random in %d of 5 seeds (best BO vs best random: %s); %.0f s", wins, detail.c_str(), since(t0)));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  std::string out_dir = "acceptance_artifacts";
  bool reuse = false;
  app.add_option("--out", out_dir, "artifact directory");
  app.add_flag("--reuse", reuse, "load checkpoints already present in the artifact directory instead of training");
  CLI11_PARSE(app, argc, argv);
  const fs::path out(out_dir);
  fs::create_directories(out);
  const auto t0 = Clock::now();

  criterion("golden state", golden_state);
  criterion("GHZ reproduction", ghz_reproduction);
  criterion("GHZ measure", ghz_measure);
  criterion("entangled-space fractions", entangled_fractions);
  criterion("n_tp necessity", ntp_necessity);
  criterion("oracle equivalence", oracle_equivalence);
  criterion("gradient suite", gradient_suite);
  criterion("Table-I analogue", [&] { table_one(out, reuse); });
  criterion("Result-1 analogue", [&] { result_one(out, reuse); });

  std::vector<datagen::LabeledSetup> mixed;
  criterion("mixed dataset", [&] {
    datagen::GenerationSpec spec;
    spec.count = 2000;
    spec.mix = 0.5;
    spec.seed = 610;
    mixed = dataset(out / "mixed.txt", spec);
  });
  if (!mixed.empty()) {
    criterion("latent length clustering", [&] { latent_purity(out, mixed, reuse); });
    criterion("trained mixed model", [&] { spearman_and_bo(out, mixed, reuse); });
  } else {
    verdict("latent length clustering", false, "no mixed dataset");
    verdict("interpolation smoothness", false, "no mixed dataset");
    verdict("BO sanity", false, "no mixed dataset");
  }

  std::cout << "\n" << g_passed << " passed, " << g_failed << " failed (" << fmt("%.0f", since(t0)) << " s)" << std::endl;
  return g_failed ? 1 : 0;
}
