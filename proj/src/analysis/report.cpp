#include "qovae/analysis/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qovae/entanglement/entanglement.hpp"
#include "qovae/optics/simulator.hpp"
#include "qovae/repr/setup.hpp"

namespace qovae::analysis {

namespace {

constexpr double kPresent = 1e-12;

const std::array<std::string, 5> kKinds{"BS", "DownConv", "Ref", "DP", "OAMHolo"};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(10);
  return out;
}

nlohmann::json profile_json(const SetProfile& p) {
  return {{"count", p.stats.count},
          {"skipped", p.skipped},
          {"mode_S", p.stats.mode},
          {"mode_count", p.stats.mode_count},
          {"mean_S", p.stats.mean},
          {"sd_S", p.stats.sd},
          {"entangled_fraction", p.stats.entangled_fraction}};
}

}  // namespace

SetProfile profile(std::string name, const std::vector<datagen::LabeledSetup>& records,
                   const optics::SimulationConfig& sim) {
  SetProfile p;
  p.name = std::move(name);
  std::map<std::string, std::size_t> ket_hits;
  std::size_t states = 0;
  for (const auto& r : records) {
    if (r.skipped) {
      ++p.skipped;
      continue;
    }
    p.totals.push_back(r.entanglement());
    for (int k = 0; k < 7; ++k) {
      p.entropies[static_cast<std::size_t>(k)].push_back(r.summary.entropies[static_cast<std::size_t>(k)]);
      p.rank_hist[static_cast<std::size_t>(k)][r.summary.ranks[static_cast<std::size_t>(k)]]++;
    }
    std::map<std::string, int> per_kind;
    for (const auto& kind : kKinds) per_kind[kind] = 0;
    for (const auto& d : r.setup.devices) per_kind[std::string(optics::device_kind_name(d.kind))]++;
    for (const auto& [kind, c] : per_kind) p.device_count_hist[kind][c]++;

    if (r.empty_state) continue;
    const optics::QuantumState state = optics::run_setup(r.setup.devices, sim);
    if (state.terms().empty()) continue;
    ++states;
    double norm = 0.0;
    const auto amps = entanglement::basis_amplitudes(state);
    for (const auto& a : amps) norm += std::norm(a.amp);
    for (const auto& a : amps) {
      if (std::norm(a.amp) / norm < kPresent) continue;
      if (std::ranges::all_of(a.labels, [](int l) { return l == 0 || l == 1; })) {
        ket_hits[std::to_string(a.labels[0]) + "," + std::to_string(a.labels[1]) + "," + std::to_string(a.labels[2]) +
                 "," + std::to_string(a.labels[3])]++;
      }
    }
  }
  for (int m = 0; m < 16; ++m) {
    const std::string ket = std::to_string((m >> 3) & 1) + "," + std::to_string((m >> 2) & 1) + "," +
                            std::to_string((m >> 1) & 1) + "," + std::to_string(m & 1);
    p.ket_frequency[ket] = states ? static_cast<double>(ket_hits[ket]) / static_cast<double>(states) : 0.0;
  }
  p.stats = entanglement_stats(p.totals);
  return p;
}

DistributionReport compare_distributions(const std::vector<datagen::LabeledSetup>& generated,
                                         const std::vector<datagen::LabeledSetup>& training,
                                         const optics::SimulationConfig& sim) {
  DistributionReport rep;
  rep.generated = profile("generated", generated, sim);
  rep.training = profile("training", training, sim);
  std::vector<std::string> gen, train;
  for (const auto& r : generated) gen.push_back(repr::render(r.setup));
  for (const auto& r : training) train.push_back(repr::render(r.setup));
  rep.unique_novel = uniqueness_novelty(gen, train);
  return rep;
}

void write_report(const std::filesystem::path& dir, const DistributionReport& report, int kde_points) {
  std::filesystem::create_directories(dir);
  const std::array<const SetProfile*, 2> sets{&report.generated, &report.training};

  double hi = 0.0;
  for (const SetProfile* p : sets)
    for (double s : p->totals) hi = std::max(hi, s);
  const std::vector<double> grid_total = linspace(0.0, hi * 1.1 + 0.5, kde_points);
  double hi_part = 0.0;
  for (const SetProfile* p : sets)
    for (const auto& e : p->entropies)
      for (double s : e) hi_part = std::max(hi_part, s);
  const std::vector<double> grid_part = linspace(0.0, hi_part * 1.1 + 0.25, kde_points);

  {
    auto out = open_out(dir / "entropy_kde.csv");
    out << "set,bipartition,x,density\n";
    auto emit = [&](const std::string& set, std::string_view part, const std::vector<double>& values,
                    const std::vector<double>& grid) {
      std::vector<double> dens;
      try {
        dens = kde(values, grid);
      } catch (const std::invalid_argument&) {
        return;  // fewer than 2 values or a single repeated value: no curve
      }
      for (std::size_t i = 0; i < grid.size(); ++i) out << set << ',' << part << ',' << grid[i] << ',' << dens[i] << '\n';
    };
    for (const SetProfile* p : sets) {
      for (int k = 0; k < 7; ++k) emit(p->name, entanglement::bipartition_name(k), p->entropies[static_cast<std::size_t>(k)], grid_part);
      emit(p->name, "total", p->totals, grid_total);
    }
  }
  {
    auto out = open_out(dir / "schmidt_rank_hist.csv");
    out << "set,bipartition,rank,count\n";
    for (const SetProfile* p : sets)
      for (int k = 0; k < 7; ++k)
        for (const auto& [rank, c] : p->rank_hist[static_cast<std::size_t>(k)])
          out << p->name << ',' << entanglement::bipartition_name(k) << ',' << rank << ',' << c << '\n';
  }
  {
    auto out = open_out(dir / "device_count_hist.csv");
    out << "set,kind,devices_per_setup,setups\n";
    for (const SetProfile* p : sets)
      for (const auto& [kind, hist] : p->device_count_hist)
        for (const auto& [n, c] : hist) out << p->name << ',' << kind << ',' << n << ',' << c << '\n';
  }
  {
    auto out = open_out(dir / "ket_frequency.csv");
    out << "set,ket,fraction\n";
    for (const SetProfile* p : sets)
      for (const auto& [ket, f] : p->ket_frequency) out << p->name << ",\"" << ket << "\"," << f << '\n';
  }
  nlohmann::json j{{"generated", profile_json(report.generated)},
                   {"training", profile_json(report.training)},
                   {"unique_fraction", report.unique_novel.unique},
                   {"novel_fraction", report.unique_novel.novel}};
  auto out = open_out(dir / "summary.json");
  out << j.dump(2) << '\n';
}

}  // namespace qovae::analysis
