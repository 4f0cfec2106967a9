#include "qovae/datagen/datagen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>
#include <unordered_set>

namespace qovae::datagen {

repr::DatasetRecord LabeledSetup::to_record() const {
  repr::RecordLabel l;
  l.entanglement = repr::round_entanglement(summary.total);
  std::copy(summary.ranks.begin(), summary.ranks.end(), l.srv.begin());
  return {setup, l};
}

std::mt19937_64 draw_rng(std::uint64_t seed, std::uint64_t draw_index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  return std::mt19937_64(splitmix(seed ^ splitmix(draw_index + 0x632be59bd9b4e019ull)));
}

repr::Setup sample_setup(std::mt19937_64& rng, const repr::Vocabulary& vocab, int min_len, int max_len) {
  if (max_len < 0) max_len = vocab.max_length();
  if (min_len < 0 || min_len > max_len) throw std::invalid_argument("sample_setup: bad length range");
  std::uniform_int_distribution<int> length(min_len, max_len);
  std::uniform_int_distribution<int> device(1, vocab.size() - 1);
  repr::Setup s;
  const int len = length(rng);
  s.devices.reserve(static_cast<std::size_t>(len));
  for (int t = 0; t < len; ++t) s.devices.push_back(vocab.device(device(rng)));
  return s;
}

LabeledSetup label(const repr::Setup& setup, const optics::SimulationConfig& config) {
  LabeledSetup out;
  out.setup = setup;
  out.two_photon_devices = setup.two_photon_count();
  try {
    optics::QuantumState state = optics::run_setup(setup.devices, config);
    out.summary = entanglement::summarize(state);
  } catch (const optics::EmptyStateError&) {
    out.empty_state = true;
  } catch (const optics::AmplitudeOverflow& e) {
    out.skipped = true;
    out.skip_reason = e.what();
  }
  return out;
}

double GenerationResult::entangled_fraction() const {
  if (records.empty()) return 0.0;
  const auto n = std::count_if(records.begin(), records.end(), [](const LabeledSetup& r) { return r.entangled(); });
  return static_cast<double>(n) / static_cast<double>(records.size());
}

namespace {

unsigned resolve_workers(unsigned w) {
  if (w) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<LabeledSetup> label_all(const std::vector<repr::Setup>& setups, const optics::SimulationConfig& config,
                                    unsigned workers) {
  std::vector<LabeledSetup> out(setups.size());
  parallel_for(setups.size(), workers, [&](std::size_t i) { out[i] = label(setups[i], config); });
  return out;
}

GenerationResult generate_dataset(const GenerationSpec& spec, const repr::Vocabulary& vocab,
                                  const optics::SimulationConfig& config) {
  if (spec.min_len < 0 || spec.max_len > vocab.max_length() || spec.min_len > spec.max_len) {
    throw std::invalid_argument("generation length range outside [0, max_length]");
  }
  if (spec.mix && (*spec.mix < 0.0 || *spec.mix > 1.0)) throw std::invalid_argument("mix must be in [0, 1]");

  const auto t0 = std::chrono::steady_clock::now();
  GenerationResult res;
  std::size_t quota_entangled = spec.count, quota_unentangled = spec.count;
  if (spec.mix) {
    quota_entangled = static_cast<std::size_t>(std::llround(static_cast<double>(spec.count) * *spec.mix));
    quota_unentangled = spec.count - quota_entangled;
  }
  std::size_t have_entangled = 0, have_unentangled = 0;
  std::unordered_set<std::string> seen;

  auto in_range = [&](double s) {
    if (spec.s_min && !(s > *spec.s_min)) return false;
    if (spec.s_max && !(s < *spec.s_max)) return false;
    return true;
  };
  auto accept = [&](const LabeledSetup& r) {
    if (r.skipped) return false;
    if (r.two_photon_devices < spec.ntp_min) return false;
    const bool ent = r.entangled();
    if (spec.mix) {
      if (ent) return have_entangled < quota_entangled && in_range(r.entanglement());
      return have_unentangled < quota_unentangled;
    }
    return in_range(r.entanglement());
  };

  constexpr std::size_t kBlock = 2048;
  while (res.records.size() < spec.count) {
    if (res.draws >= spec.max_draws) throw GenerationTimeout("draw budget exhausted before reaching count");
    std::vector<LabeledSetup> block(kBlock);
    const std::size_t base = res.draws;
    parallel_for(kBlock, spec.workers, [&](std::size_t i) {
      std::mt19937_64 rng = draw_rng(spec.seed, base + i);
      block[i] = label(sample_setup(rng, vocab, spec.min_len, spec.max_len), config);
    });
    for (auto& r : block) {
      if (res.records.size() >= spec.count) break;
      ++res.draws;
      if (r.skipped) ++res.skipped;
      if (!accept(r)) continue;
      if (spec.deduplicate && !seen.insert(repr::render(r.setup)).second) {
        ++res.duplicates;
        continue;
      }
      (r.entangled() ? have_entangled : have_unentangled)++;
      res.records.push_back(std::move(r));
    }
    if (res.draws >= 20'000 && res.acceptance_rate() < spec.min_acceptance) {
      throw GenerationTimeout("acceptance rate " + std::to_string(res.acceptance_rate()) + " below floor");
    }
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace qovae::datagen
