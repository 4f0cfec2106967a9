#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "qovae/entanglement/entanglement.hpp"
#include "qovae/optics/simulator.hpp"
#include "qovae/repr/setup.hpp"

namespace qovae::bo {

/// Normalized target state over OAM quadruples (a,b,c,d).
struct TargetState {
  std::vector<entanglement::BasisAmplitude> terms;
};

/// Lines `re im i j k l`; '#' starts a comment line. Normalizes the result.
/// Throws std::invalid_argument on malformed lines, repeated kets or a zero state.
TargetState read_target(std::istream& in);
TargetState read_target(const std::filesystem::path& path);
TargetState make_target(std::vector<entanglement::BasisAmplitude> terms);
/// (|0000> + |1111> + ... + |d-1 ...>) / sqrt(d)
TargetState ghz_target(int levels = 2);

enum class Metric {
  Fidelity,      // |<target|psi>|^2
  ProbFidelity,  // (sum_i sqrt(p_i q_i))^2
  NegMse,        // -sqrt(sum_i (p_i - q_i)^2)
  NegKl,         // -sum_i p_i log(p_i / q_i), q floored at 1e-12
  Entanglement,  // S
};
Metric metric_from_string(const std::string& s);
std::string to_string(Metric m);

struct ObjectiveConfig {
  TargetState target;
  double lambda = 0.1;
  int max_length = 12;  // d
  Metric metric = Metric::Fidelity;
};

struct ObjectiveValue {
  double y = 0.0;         // metric - lambda * length / (4 d)
  double metric = 0.0;
  double fidelity = 0.0;  // always the amplitude overlap, for reporting
  double entanglement = 0.0;
  int length = 0;
  bool empty_state = false;  // no four-fold term, or exact arithmetic overflowed
};

/// Metric of a state (basis terms normalized) against the target.
double state_metric(const std::vector<entanglement::BasisAmplitude>& state, const TargetState& target, Metric metric);

/// A setup with no surviving state contributes 0 from the state term (q = 0
/// for the probability metrics).
ObjectiveValue evaluate_objective(const repr::Setup& setup, const ObjectiveConfig& cfg,
                                  const optics::SimulationConfig& sim = {});

}  // namespace qovae::bo
