#include "qovae/bo/bo.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "qovae/analysis/csv.hpp"

namespace qovae::bo {

namespace {

Eigen::VectorXd uniform_in(const LatentBox& box, std::mt19937_64& rng) {
  Eigen::VectorXd z(box.lo.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    std::uniform_real_distribution<double> u(box.lo(i), box.hi(i));
    z(i) = u(rng);
  }
  return z;
}

double ei_at(const GpModel& gp, const Eigen::VectorXd& z, double best) {
  const auto [m, v] = gp.predict(z);
  return expected_improvement(m, std::sqrt(v), best);
}

/// Bounded coordinate pattern search on EI.
std::pair<Eigen::VectorXd, double> refine(const GpModel& gp, Eigen::VectorXd z, double ei, double best,
                                          const LatentBox& box, int evals) {
  Eigen::VectorXd step = 0.1 * (box.hi - box.lo);
  const double floor = 1e-4 * (box.hi - box.lo).maxCoeff();
  int used = 0;
  while (used < evals && step.maxCoeff() > floor) {
    bool moved = false;
    for (Eigen::Index d = 0; d < z.size() && used < evals; ++d) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = z;
        trial(d) = std::clamp(z(d) + sign * step(d), box.lo(d), box.hi(d));
        const double e = ei_at(gp, trial, best);
        ++used;
        if (e > ei) {
          z = trial;
          ei = e;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return {z, ei};
}

BoEntry score(const vae::QovaeModel& model, const Eigen::VectorXd& z, int iteration, const ObjectiveConfig& obj,
              const optics::SimulationConfig& sim) {
  BoEntry e;
  e.iteration = iteration;
  e.z = z;
  e.setup = model.decode_setup(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())),
                               vae::DecodeMode::Argmax);
  e.value = evaluate_objective(e.setup, obj, sim);
  return e;
}

void sort_entries(BoResult& r) {
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const BoEntry& a, const BoEntry& b) { return a.value.y > b.value.y; });
}

}  // namespace

double BoResult::best_y() const {
  double b = -std::numeric_limits<double>::infinity();
  for (const auto& e : entries) b = std::max(b, e.value.y);
  return b;
}

LatentBox latent_box(const Eigen::MatrixXd& latents) {
  if (latents.cols() < 1) throw std::invalid_argument("latent_box: no latents");
  LatentBox box;
  const Eigen::VectorXd mean = latents.rowwise().mean();
  const Eigen::VectorXd sd =
      ((latents.colwise() - mean).array().square().rowwise().sum() / static_cast<double>(latents.cols())).sqrt();
  box.lo = latents.rowwise().minCoeff() - sd;
  box.hi = latents.rowwise().maxCoeff() + sd;
  for (Eigen::Index i = 0; i < box.lo.size(); ++i) {
    if (box.hi(i) - box.lo(i) < 1e-9) {
      box.lo(i) -= 0.5;
      box.hi(i) += 0.5;
    }
  }
  return box;
}

Eigen::VectorXd objective_values(const std::vector<repr::Setup>& setups, const ObjectiveConfig& obj,
                                 const optics::SimulationConfig& sim) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(setups.size()));
  for (std::size_t i = 0; i < setups.size(); ++i) y(static_cast<Eigen::Index>(i)) = evaluate_objective(setups[i], obj, sim).y;
  return y;
}

BoResult bo_loop(const vae::QovaeModel& model, const Eigen::MatrixXd& latents, const Eigen::VectorXd& y,
                 const ObjectiveConfig& obj, const BoConfig& cfg) {
  if (latents.rows() != model.latent_dim()) throw std::invalid_argument("bo: latent dimension mismatch");
  if (latents.cols() != y.size() || latents.cols() < 2) throw std::invalid_argument("bo: need at least 2 scored latents");
  if (cfg.iterations < 0 || cfg.batch < 1 || cfg.starts < 1) throw std::invalid_argument("bo: invalid loop settings");

  const LatentBox box = latent_box(latents);
  const double min_sep = cfg.separation * box.diagonal();
  std::mt19937_64 rng(cfg.seed);
  Eigen::MatrixXd Z = latents;
  Eigen::VectorXd Y = y;
  BoResult result;

  for (int it = 1; it <= cfg.iterations; ++it) {
    GpOptions gopt = cfg.gp;
    gopt.seed = cfg.seed + static_cast<std::uint64_t>(it);
    const GpModel gp = GpModel::fit(Z, Y, gopt);
    const double best = Y.maxCoeff();

    Eigen::MatrixXd starts(Z.rows(), cfg.starts);
    for (int s = 0; s < cfg.starts; ++s) starts.col(s) = uniform_in(box, rng);
    const GpModel::Prediction pred = gp.predict(starts);
    std::vector<std::pair<double, Eigen::VectorXd>> pool;
    for (int s = 0; s < cfg.starts; ++s) {
      pool.emplace_back(expected_improvement(pred.mean(s), std::sqrt(pred.variance(s)), best), starts.col(s));
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; k < std::min<int>(cfg.refine_top, static_cast<int>(pool.size())); ++k) {
      auto [z, e] = refine(gp, pool[static_cast<std::size_t>(k)].second, pool[static_cast<std::size_t>(k)].first, best,
                           box, cfg.refine_evals);
      pool.emplace_back(e, std::move(z));
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<Eigen::VectorXd> chosen;
    for (const auto& [e, z] : pool) {
      if (static_cast<int>(chosen.size()) == cfg.batch) break;
      bool far = true;
      for (const auto& c : chosen) far = far && (c - z).norm() >= min_sep;
      if (far) chosen.push_back(z);
    }

    std::size_t empty_here = 0;
    const Eigen::Index old = Z.cols();
    Z.conservativeResize(Eigen::NoChange, old + static_cast<Eigen::Index>(chosen.size()));
    Y.conservativeResize(old + static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      BoEntry e = score(model, chosen[c], it, obj, cfg.sim);
      if (e.setup.devices.empty()) ++empty_here;
      Z.col(old + static_cast<Eigen::Index>(c)) = chosen[c];
      Y(old + static_cast<Eigen::Index>(c)) = e.value.y;
      result.entries.push_back(std::move(e));
    }
    result.empty_setups += empty_here;
    if (!chosen.empty() && empty_here == chosen.size()) {
      result.warnings.push_back("iteration " + std::to_string(it) + ": every candidate decoded to the empty setup");
    }
  }
  sort_entries(result);
  return result;
}

BoResult bo_loop(const vae::QovaeModel& model, const std::vector<repr::Setup>& setups, const ObjectiveConfig& obj,
                 const BoConfig& cfg) {
  return bo_loop(model, model.encode_means(setups), objective_values(setups, obj, cfg.sim), obj, cfg);
}

BoResult random_search(const vae::QovaeModel& model, const LatentBox& box, int budget, const ObjectiveConfig& obj,
                       std::uint64_t seed, const optics::SimulationConfig& sim) {
  std::mt19937_64 rng(seed);
  BoResult result;
  for (int i = 0; i < budget; ++i) {
    BoEntry e = score(model, uniform_in(box, rng), 0, obj, sim);
    if (e.setup.devices.empty()) ++result.empty_setups;
    result.entries.push_back(std::move(e));
  }
  sort_entries(result);
  return result;
}

void write_bo_csv(const std::filesystem::path& path, const BoResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  out << "rank,iteration,y,metric,fidelity,S,length,tokens,z\n";
  for (std::size_t r = 0; r < result.entries.size(); ++r) {
    const BoEntry& e = result.entries[r];
    std::string z;
    for (Eigen::Index i = 0; i < e.z.size(); ++i) {
      if (i) z += ' ';
      z += std::to_string(e.z(i));
    }
    out << r + 1 << ',' << e.iteration << ',' << e.value.y << ',' << e.value.metric << ',' << e.value.fidelity << ','
        << e.value.entanglement << ',' << e.value.length << ',' << analysis::csv_field(repr::render(e.setup)) << ','
        << z << '\n';
  }
}

}  // namespace qovae::bo
