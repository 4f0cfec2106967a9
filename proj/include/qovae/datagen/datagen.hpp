#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qovae/entanglement/entanglement.hpp"
#include "qovae/optics/simulator.hpp"
#include "qovae/repr/dataset_io.hpp"
#include "qovae/repr/setup.hpp"

namespace qovae::datagen {

/// Result of simulating and measuring one setup.
struct LabeledSetup {
  repr::Setup setup;
  entanglement::EntanglementSummary summary;
  int two_photon_devices = 0;  // n_tp
  bool empty_state = false;    // no four-fold term survived
  bool skipped = false;        // exact-arithmetic budget exceeded
  std::string skip_reason;

  [[nodiscard]] double entanglement() const { return summary.total; }
  [[nodiscard]] bool entangled() const { return summary.total > 0.0; }
  [[nodiscard]] int length() const { return static_cast<int>(setup.length()); }
  [[nodiscard]] repr::DatasetRecord to_record() const;
};

/// Deterministic per-draw generator, independent of worker layout.
std::mt19937_64 draw_rng(std::uint64_t seed, std::uint64_t draw_index);

/// Length uniform on [min_len, max_len], each device uniform over the non-PAD vocabulary.
/// max_len < 0 means the vocabulary's max length.
repr::Setup sample_setup(std::mt19937_64& rng, const repr::Vocabulary& vocab, int min_len = 3, int max_len = -1);

LabeledSetup label(const repr::Setup& setup, const optics::SimulationConfig& config = {});

class GenerationTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationSpec {
  std::size_t count = 1000;
  int min_len = 3;
  int max_len = 12;
  std::optional<double> s_min;  // exclusive
  std::optional<double> s_max;  // exclusive
  int ntp_min = 0;
  /// Fraction of entangled records; the S range then applies to the entangled share only.
  std::optional<double> mix;
  bool deduplicate = true;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency
  double min_acceptance = 1e-5;
  std::size_t max_draws = 50'000'000;
};

struct GenerationResult {
  std::vector<LabeledSetup> records;
  std::size_t draws = 0;
  std::size_t duplicates = 0;
  std::size_t skipped = 0;
  double seconds = 0.0;

  [[nodiscard]] double acceptance_rate() const {
    return draws ? static_cast<double>(records.size()) / static_cast<double>(draws) : 0.0;
  }
  [[nodiscard]] double entangled_fraction() const;
};

/// Samples, labels, filters and deduplicates until `count` records are accepted.
GenerationResult generate_dataset(const GenerationSpec& spec, const repr::Vocabulary& vocab,
                                  const optics::SimulationConfig& config = {});

/// Labels many setups in parallel; output order follows input order.
std::vector<LabeledSetup> label_all(const std::vector<repr::Setup>& setups, const optics::SimulationConfig& config = {},
                                    unsigned workers = 0);

}  // namespace qovae::datagen
