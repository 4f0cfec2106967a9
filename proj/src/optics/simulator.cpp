#include "qovae/optics/simulator.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace qovae::optics {

namespace {

struct Branch {
  Photon photon;
  Amplitude amp;
};

// Image of a single photon under the device; an empty result means identity.
std::vector<Branch> photon_rule(const DeviceOp& op, const Photon& ph) {
  const Amplitude i = Amplitude::imag_unit();
  switch (op.kind) {
    case DeviceKind::BeamSplitter: {
      // |l>_p -> (|l>_p' + i|-l>_p) / sqrt2, symmetric in p, p'
      if (ph.path != op.first && ph.path != op.second) return {};
      const Path other = ph.path == op.first ? op.second : op.first;
      const Amplitude t = Amplitude::one().div_sqrt2();
      return {{{other, ph.oam}, t}, {{ph.path, -ph.oam}, t.times_i()}};
    }
    case DeviceKind::Mirror:
      if (ph.path != op.first) return {};
      return {{{ph.path, -ph.oam}, i}};
    case DeviceKind::DovePrism: {
      if (ph.path != op.first) return {};
      // i e^{i pi l} = i (-1)^l
      const Amplitude phase = (ph.oam % 2 == 0) ? i : -i;
      return {{{ph.path, -ph.oam}, phase}};
    }
    case DeviceKind::Hologram:
      if (ph.path != op.first) return {};
      return {{{ph.path, ph.oam + op.shift}, Amplitude::one()}};
    case DeviceKind::DownConv:
      return {};
  }
  return {};
}

void expand_ket(const DeviceOp& op, const Ket& ket, const Amplitude& amp, QuantumState& out) {
  // Tensor expansion over every photon of the ket.
  std::vector<std::pair<Ket, Amplitude>> partial{{Ket{}, amp}};
  for (const Photon& ph : ket) {
    std::vector<Branch> branches = photon_rule(op, ph);
    if (branches.empty()) {
      for (auto& [k, a] : partial) k.add(ph);
      continue;
    }
    std::vector<std::pair<Ket, Amplitude>> next;
    next.reserve(partial.size() * branches.size());
    for (const auto& [k, a] : partial) {
      for (const Branch& br : branches) {
        Ket nk = k;
        nk.add(br.photon);
        next.emplace_back(nk, a * br.amp);
      }
    }
    partial = std::move(next);
  }
  for (const auto& [k, a] : partial) out.accumulate(k, a);
}

}  // namespace

QuantumState initial_state() {
  QuantumState s;
  s.accumulate(Ket{{Path::a, 0}, {Path::b, 0}}, Amplitude::one());
  s.accumulate(Ket{{Path::c, 0}, {Path::d, 0}}, Amplitude::one());
  return s;
}

QuantumState apply_device(const QuantumState& state, const DeviceOp& op, const SimulationConfig& config) {
  if (state.normalized()) throw std::invalid_argument("apply_device expects a pre-squaring (unnormalized) state");
  if (op.kind == DeviceKind::DownConv) {
    if (config.down_conversion_order < 0) throw std::invalid_argument("negative down-conversion order");
    QuantumState out = state;
    for (int l = -config.down_conversion_order; l <= config.down_conversion_order; ++l) {
      out.accumulate(Ket{{op.first, l}, {op.second, -l}}, Amplitude::one());
    }
    return out;
  }
  QuantumState out;
  for (const auto& [ket, amp] : state.terms()) expand_ket(op, ket, amp, out);
  return out;
}

QuantumState square_and_postselect(const QuantumState& state) {
  std::vector<std::pair<Ket, Amplitude>> terms(state.terms().begin(), state.terms().end());
  for (const auto& [ket, amp] : terms) {
    if (ket.size() != 2) throw std::invalid_argument("square_and_postselect expects two-photon kets");
  }
  const Amplitude two = Amplitude::from_int(2);
  QuantumState out;
  // Self products put two photons on each path and never survive, so only
  // unordered distinct pairs are formed; each appears twice in |psi> (x) |psi>.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      std::optional<Ket> k = terms[i].first.merged(terms[j].first);
      if (!k || !k->is_fourfold()) continue;
      out.accumulate(*k, two * terms[i].second * terms[j].second);
    }
  }
  out.normalize();
  return out;
}

QuantumState run_setup(std::span<const DeviceOp> devices, const SimulationConfig& config) {
  QuantumState s = initial_state();
  for (const DeviceOp& op : devices) s = apply_device(s, op, config);
  return square_and_postselect(s);
}

}  // namespace qovae::optics
