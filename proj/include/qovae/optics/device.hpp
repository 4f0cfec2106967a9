#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "qovae/optics/state.hpp"

namespace qovae::optics {

enum class DeviceKind : std::uint8_t { BeamSplitter, DownConv, Mirror, DovePrism, Hologram };

inline constexpr int kNumDeviceKinds = 5;

std::string_view device_kind_name(DeviceKind k);

/// One optical element. Two-path devices are stored with first < second.
struct DeviceOp {
  DeviceKind kind = DeviceKind::Mirror;
  Path first = Path::a;
  Path second = Path::a;  // two-path devices only
  int shift = 0;          // hologram only

  static DeviceOp beam_splitter(Path p, Path q);
  static DeviceOp down_conv(Path p, Path q);
  static DeviceOp mirror(Path p);
  static DeviceOp dove_prism(Path p);
  static DeviceOp hologram(Path p, int n);

  [[nodiscard]] bool is_two_photon() const {
    return kind == DeviceKind::BeamSplitter || kind == DeviceKind::DownConv;
  }
  [[nodiscard]] bool touches_empty_path() const;

  /// Token form, e.g. "BS(a,b)", "OAMHolo(c,-1)".
  [[nodiscard]] std::string token() const;

  friend auto operator<=>(const DeviceOp&, const DeviceOp&) = default;
};

}  // namespace qovae::optics
