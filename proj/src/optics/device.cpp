#include "qovae/optics/device.hpp"

#include <stdexcept>
#include <utility>

namespace qovae::optics {

std::string_view device_kind_name(DeviceKind k) {
  switch (k) {
    case DeviceKind::BeamSplitter: return "BS";
    case DeviceKind::DownConv: return "DownConv";
    case DeviceKind::Mirror: return "Ref";
    case DeviceKind::DovePrism: return "DP";
    case DeviceKind::Hologram: return "OAMHolo";
  }
  return "?";
}

namespace {

DeviceOp two_path(DeviceKind kind, Path p, Path q) {
  if (p == q) throw std::invalid_argument("two-path device needs distinct paths");
  if (q < p) std::swap(p, q);
  DeviceOp op;
  op.kind = kind;
  op.first = p;
  op.second = q;
  return op;
}

}  // namespace

DeviceOp DeviceOp::beam_splitter(Path p, Path q) { return two_path(DeviceKind::BeamSplitter, p, q); }
DeviceOp DeviceOp::down_conv(Path p, Path q) { return two_path(DeviceKind::DownConv, p, q); }

DeviceOp DeviceOp::mirror(Path p) {
  DeviceOp op;
  op.kind = DeviceKind::Mirror;
  op.first = op.second = p;
  return op;
}

DeviceOp DeviceOp::dove_prism(Path p) {
  DeviceOp op;
  op.kind = DeviceKind::DovePrism;
  op.first = op.second = p;
  return op;
}

DeviceOp DeviceOp::hologram(Path p, int n) {
  if (n == 0) throw std::invalid_argument("hologram shift must be nonzero");
  DeviceOp op;
  op.kind = DeviceKind::Hologram;
  op.first = op.second = p;
  op.shift = n;
  return op;
}

bool DeviceOp::touches_empty_path() const { return !is_detector_path(first) || !is_detector_path(second); }

std::string DeviceOp::token() const {
  std::string out(device_kind_name(kind));
  out += '(';
  out += path_letter(first);
  if (is_two_photon()) {
    out += ',';
    out += path_letter(second);
  } else if (kind == DeviceKind::Hologram) {
    out += ',';
    out += std::to_string(shift);
  }
  out += ')';
  return out;
}

}  // namespace qovae::optics
