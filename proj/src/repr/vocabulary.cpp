#include "qovae/repr/vocabulary.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace qovae::repr {

using optics::DeviceOp;
using optics::Path;

void VocabularyConfig::validate() const {
  if (num_paths < 4 || num_paths > optics::kNumPaths) throw std::invalid_argument("num_paths must be in [4, 6]");
  if (max_length < 3 || max_length > 15) throw std::invalid_argument("max_length must be in [3, 15]");
  if (down_conversion_order < 0) throw std::invalid_argument("down_conversion_order must be >= 0");
  for (int n : hologram_shifts) {
    if (n == 0) throw std::invalid_argument("hologram shifts must be nonzero");
  }
  std::vector<int> sorted = hologram_shifts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("hologram shifts must be distinct");
  }
}

Vocabulary::Vocabulary(VocabularyConfig config) : config_(std::move(config)) {
  config_.validate();
  std::sort(config_.hologram_shifts.begin(), config_.hologram_shifts.end());
  const int np = config_.num_paths;
  auto path = [](int i) { return static_cast<Path>(i); };
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j) devices_.push_back(DeviceOp::beam_splitter(path(i), path(j)));
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j) devices_.push_back(DeviceOp::down_conv(path(i), path(j)));
  for (int i = 0; i < np; ++i) devices_.push_back(DeviceOp::mirror(path(i)));
  for (int i = 0; i < np; ++i) devices_.push_back(DeviceOp::dove_prism(path(i)));
  for (int i = 0; i < np; ++i)
    for (int n : config_.hologram_shifts) devices_.push_back(DeviceOp::hologram(path(i), n));
  for (std::size_t k = 0; k < devices_.size(); ++k) index_.emplace(devices_[k], static_cast<int>(k) + 1);
}

const DeviceOp& Vocabulary::device(int index) const {
  if (index <= 0 || index >= size()) throw std::out_of_range("vocabulary index is PAD or out of range");
  return devices_[static_cast<std::size_t>(index - 1)];
}

std::optional<int> Vocabulary::index_of(const DeviceOp& op) const {
  auto it = index_.find(op);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::token(int index) const { return index == kPad ? "PAD" : device(index).token(); }

bool Vocabulary::allows_shift(int n) const {
  return std::find(config_.hologram_shifts.begin(), config_.hologram_shifts.end(), n) !=
         config_.hologram_shifts.end();
}

std::string Vocabulary::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (int i = 0; i < size(); ++i) {
    for (char c : token(i)) mix(c);
    mix('\n');
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qovae::repr
