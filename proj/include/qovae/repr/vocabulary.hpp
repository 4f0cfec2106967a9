#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qovae/optics/device.hpp"

namespace qovae::repr {

struct VocabularyConfig {
  int num_paths = 6;
  std::vector<int> hologram_shifts{-2, -1, 1, 2};
  int max_length = 12;
  int down_conversion_order = 1;

  void validate() const;
  friend bool operator==(const VocabularyConfig&, const VocabularyConfig&) = default;
};

/// Index 0 is PAD, then BS pairs, DC pairs, mirrors, dove prisms, holograms
/// (path-major, shift ascending). Pairs are in lexicographic order.
class Vocabulary {
 public:
  static constexpr int kPad = 0;

  Vocabulary() : Vocabulary(VocabularyConfig{}) {}
  explicit Vocabulary(VocabularyConfig config);

  [[nodiscard]] const VocabularyConfig& config() const { return config_; }
  /// Number of classes D, PAD included.
  [[nodiscard]] int size() const { return static_cast<int>(devices_.size()) + 1; }
  [[nodiscard]] int max_length() const { return config_.max_length; }

  /// Device for index in [1, size()).
  [[nodiscard]] const optics::DeviceOp& device(int index) const;
  [[nodiscard]] std::optional<int> index_of(const optics::DeviceOp& op) const;
  [[nodiscard]] std::string token(int index) const;

  [[nodiscard]] bool allows_path(optics::Path p) const { return static_cast<int>(p) < config_.num_paths; }
  [[nodiscard]] bool allows_shift(int n) const;

  /// FNV-1a over the ordered token list, as 16 hex digits.
  [[nodiscard]] std::string hash() const;

 private:
  VocabularyConfig config_;
  std::vector<optics::DeviceOp> devices_;
  std::map<optics::DeviceOp, int> index_;
};

}  // namespace qovae::repr
