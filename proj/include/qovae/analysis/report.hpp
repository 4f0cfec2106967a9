#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qovae/analysis/stats.hpp"
#include "qovae/datagen/datagen.hpp"

namespace qovae::analysis {

/// Statistics of one labeled set.
struct SetProfile {
  std::string name;
  EntanglementStats stats;
  std::array<std::vector<double>, 7> entropies;  // per bipartition
  std::vector<double> totals;                    // S
  std::array<std::map<int, std::size_t>, 7> rank_hist;
  /// kind -> (devices of that kind per setup -> number of setups)
  std::map<std::string, std::map<int, std::size_t>> device_count_hist;
  /// "l1,l2,l3,l4" over OAM values {0,1} -> share of states containing that ket
  std::map<std::string, double> ket_frequency;
  std::size_t skipped = 0;
};

SetProfile profile(std::string name, const std::vector<datagen::LabeledSetup>& records,
                   const optics::SimulationConfig& sim = {});

struct DistributionReport {
  SetProfile generated;
  SetProfile training;
  UniqueNovel unique_novel;
};

DistributionReport compare_distributions(const std::vector<datagen::LabeledSetup>& generated,
                                         const std::vector<datagen::LabeledSetup>& training,
                                         const optics::SimulationConfig& sim = {});

/// Writes into `dir` (created if missing):
///   entropy_kde.csv         set,bipartition,x,density
///   schmidt_rank_hist.csv   set,bipartition,rank,count
///   device_count_hist.csv   set,kind,devices_per_setup,setups
///   ket_frequency.csv       set,ket,fraction
///   summary.json
void write_report(const std::filesystem::path& dir, const DistributionReport& report, int kde_points = 200);

}  // namespace qovae::analysis
