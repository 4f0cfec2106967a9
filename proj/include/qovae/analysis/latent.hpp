#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qovae/datagen/datagen.hpp"
#include "qovae/vae/model.hpp"

namespace qovae::analysis {

/// Great-circle interpolation; linear when the angle is below 1e-6.
/// Throws std::invalid_argument for zero vectors or (near-)antipodal inputs.
std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double t);

struct InterpolationStep {
  int step = 0;
  double t = 0.0;
  std::vector<double> z;
  repr::Setup setup;
  double entanglement = 0.0;
  std::string error;  // non-empty when the decoded setup could not be labeled
};

/// Encodes both ends to their means, slerps at `steps` evenly spaced t (ends
/// included), argmax-decodes and labels every point.
std::vector<InterpolationStep> interpolation_path(const vae::QovaeModel& model, const repr::Setup& from,
                                                  const repr::Setup& to, int steps,
                                                  const optics::SimulationConfig& sim = {});
/// step,t,S,length,tokens,error
void write_interpolation_csv(const std::filesystem::path& path, const std::vector<InterpolationStep>& steps);

struct DistancePair {
  std::size_t i = 0, j = 0;
  double distance = 0.0;
  double abs_ds = 0.0;
};
struct DistanceBin {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
  double mean_distance = 0.0;
  double mean_abs_ds = 0.0;
};

/// Random distinct index pairs over the encoded means of `records`.
std::vector<DistancePair> distance_vs_ds(const vae::QovaeModel& model, const std::vector<datagen::LabeledSetup>& records,
                                         std::size_t n_pairs, std::uint64_t seed);
/// Same, on precomputed latents (columns) and S values.
std::vector<DistancePair> distance_vs_ds(const Eigen::MatrixXd& latents, std::span<const double> s,
                                         std::size_t n_pairs, std::uint64_t seed);
/// Equal-width distance bins; empty bins are kept with count 0.
std::vector<DistanceBin> bin_distances(const std::vector<DistancePair>& pairs, int bins);
/// pair,i,j,distance,abs_dS
void write_distance_csv(const std::filesystem::path& path, const std::vector<DistancePair>& pairs);
/// bin,lo,hi,count,mean_distance,mean_abs_dS
void write_distance_bins_csv(const std::filesystem::path& path, const std::vector<DistanceBin>& bins);

/// Device kind (BS, DownConv, Ref, DP, OAMHolo); with `split_empty`, kinds
/// touching path e or f get an "-empty" suffix.
std::string functional_group(const optics::DeviceOp& op, bool split_empty = false);

struct LatentMapRow {
  std::size_t index = 0;
  double x = 0.0, y = 0.0;
  double entanglement = 0.0;
  int length = 0;
  std::string last_device;         // "" for the empty setup
  std::string second_last_device;  // "" when length < 2
  std::string functional_group;    // group of the last device
  std::string tokens;
};

/// Encoder means projected onto latent `axes` (default the first two).
std::vector<LatentMapRow> latent_map(const vae::QovaeModel& model, const std::vector<datagen::LabeledSetup>& records,
                                     std::array<int, 2> axes = {0, 1}, bool split_empty = false);
/// index,x,y,S,length,last_device,second_last_device,functional_group,tokens
void write_latent_map_csv(const std::filesystem::path& path, const std::vector<LatentMapRow>& rows);

}  // namespace qovae::analysis
