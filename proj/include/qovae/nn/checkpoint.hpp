#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qovae/nn/params.hpp"

namespace qovae::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contents of `<prefix>.manifest` + `<prefix>.params`.
///
/// Manifest lines (text, LF):
///   qovae-checkpoint 1
///   meta <key> <value to end of line>
///   param <name> <d0>x<d1>x... <offset> <size>
///   total <n>
/// The params file holds `total` little-endian IEEE-754 doubles.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::vector<ParamInfo> params;
  std::vector<double> values;
};

std::filesystem::path manifest_path(const std::filesystem::path& prefix);
std::filesystem::path params_path(const std::filesystem::path& prefix);

void write_checkpoint(const std::filesystem::path& prefix, const ParamStore& store,
                      const std::map<std::string, std::string>& meta);
Checkpoint read_checkpoint(const std::filesystem::path& prefix);

/// Copies checkpoint values into a store with an identical parameter layout.
void load_into(const Checkpoint& ckpt, ParamStore& store);

}  // namespace qovae::nn
