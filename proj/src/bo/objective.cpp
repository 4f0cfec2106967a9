#include "qovae/bo/objective.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qovae/optics/amplitude.hpp"

namespace qovae::bo {

namespace {

using Key = std::array<int, 4>;

std::map<Key, std::complex<double>> as_map(const std::vector<entanglement::BasisAmplitude>& terms) {
  std::map<Key, std::complex<double>> m;
  for (const auto& t : terms) m[t.labels] += t.amp;
  return m;
}

}  // namespace

TargetState make_target(std::vector<entanglement::BasisAmplitude> terms) {
  std::map<Key, std::complex<double>> seen;
  double norm = 0.0;
  for (const auto& t : terms) {
    if (seen.contains(t.labels)) throw std::invalid_argument("target repeats a ket");
    seen[t.labels] = t.amp;
    norm += std::norm(t.amp);
  }
  if (!(norm > 0)) throw std::invalid_argument("target state is zero");
  const double s = 1.0 / std::sqrt(norm);
  for (auto& t : terms) t.amp *= s;
  return TargetState{std::move(terms)};
}

TargetState read_target(std::istream& in) {
  std::vector<entanglement::BasisAmplitude> terms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    entanglement::BasisAmplitude t;
    if (!(ls >> re >> im >> t.labels[0] >> t.labels[1] >> t.labels[2] >> t.labels[3])) {
      throw std::invalid_argument("target line " + std::to_string(line_no) + ": expected `re im i j k l`");
    }
    std::string rest;
    if (ls >> rest) throw std::invalid_argument("target line " + std::to_string(line_no) + ": trailing input");
    t.amp = {re, im};
    terms.push_back(t);
  }
  return make_target(std::move(terms));
}

TargetState read_target(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open target " + path.string());
  return read_target(in);
}

TargetState ghz_target(int levels) {
  if (levels < 2) throw std::invalid_argument("ghz_target needs at least 2 levels");
  std::vector<entanglement::BasisAmplitude> terms;
  for (int l = 0; l < levels; ++l) terms.push_back({{l, l, l, l}, {1.0, 0.0}});
  return make_target(std::move(terms));
}

Metric metric_from_string(const std::string& s) {
  if (s == "fidelity") return Metric::Fidelity;
  if (s == "prob-fidelity") return Metric::ProbFidelity;
  if (s == "neg-mse") return Metric::NegMse;
  if (s == "neg-kl") return Metric::NegKl;
  if (s == "entanglement") return Metric::Entanglement;
  throw std::invalid_argument("unknown metric: " + s);
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::Fidelity: return "fidelity";
    case Metric::ProbFidelity: return "prob-fidelity";
    case Metric::NegMse: return "neg-mse";
    case Metric::NegKl: return "neg-kl";
    case Metric::Entanglement: return "entanglement";
  }
  return "?";
}

double state_metric(const std::vector<entanglement::BasisAmplitude>& state, const TargetState& target, Metric metric) {
  const auto psi = as_map(state);
  const auto tgt = as_map(target.terms);
  switch (metric) {
    case Metric::Fidelity: {
      std::complex<double> overlap = 0.0;
      for (const auto& [k, a] : tgt) {
        auto it = psi.find(k);
        if (it != psi.end()) overlap += std::conj(a) * it->second;
      }
      return std::norm(overlap);
    }
    case Metric::ProbFidelity: {
      double acc = 0.0;
      for (const auto& [k, a] : tgt) {
        auto it = psi.find(k);
        if (it != psi.end()) acc += std::sqrt(std::norm(a) * std::norm(it->second));
      }
      return acc * acc;
    }
    case Metric::NegMse: {
      std::map<Key, double> diff;
      for (const auto& [k, a] : tgt) diff[k] += std::norm(a);
      for (const auto& [k, a] : psi) diff[k] -= std::norm(a);
      double ss = 0.0;
      for (const auto& [k, d] : diff) ss += d * d;
      return -std::sqrt(ss);
    }
    case Metric::NegKl: {
      double kl = 0.0;
      for (const auto& [k, a] : tgt) {
        const double p = std::norm(a);
        if (p <= 0) continue;
        auto it = psi.find(k);
        const double q = std::max(it == psi.end() ? 0.0 : std::norm(it->second), 1e-12);
        kl += p * std::log(p / q);
      }
      return -kl;
    }
    case Metric::Entanglement:
      throw std::invalid_argument("entanglement metric needs the full state");
  }
  return 0.0;
}

ObjectiveValue evaluate_objective(const repr::Setup& setup, const ObjectiveConfig& cfg,
                                  const optics::SimulationConfig& sim) {
  ObjectiveValue v;
  v.length = static_cast<int>(setup.length());
  std::vector<entanglement::BasisAmplitude> state;
  try {
    const optics::QuantumState s = optics::run_setup(setup.devices, sim);
    state = entanglement::basis_amplitudes(s);
    v.entanglement = entanglement::summarize(s).total;
  } catch (const optics::EmptyStateError&) {
    v.empty_state = true;
  } catch (const optics::AmplitudeOverflow&) {
    v.empty_state = true;
  }
  if (v.empty_state) {
    v.fidelity = 0.0;
    v.metric = (cfg.metric == Metric::Fidelity || cfg.metric == Metric::ProbFidelity || cfg.metric == Metric::Entanglement)
                   ? 0.0
                   : state_metric({}, cfg.target, cfg.metric);
  } else {
    v.fidelity = state_metric(state, cfg.target, Metric::Fidelity);
    v.metric = cfg.metric == Metric::Entanglement ? v.entanglement : state_metric(state, cfg.target, cfg.metric);
  }
  v.y = v.metric - cfg.lambda * v.length / (4.0 * cfg.max_length);
  return v;
}

}  // namespace qovae::bo
