#pragma once

#include <span>

#include "qovae/optics/device.hpp"
#include "qovae/optics/state.hpp"

namespace qovae::optics {

struct SimulationConfig {
  /// In-setup down-conversion emits sum over l in [-order, order] of |l>_p|-l>_p'.
  int down_conversion_order = 1;
};

/// |0>_a|0>_b + |0>_c|0>_d, unnormalized.
QuantumState initial_state();

/// Applies one device to a pre-squaring state.
QuantumState apply_device(const QuantumState& state, const DeviceOp& op, const SimulationConfig& config = {});

/// Squares the state, keeps four-fold coincidences (one photon on each of a-d,
/// none on e/f) and normalizes. Throws EmptyStateError when nothing survives.
QuantumState square_and_postselect(const QuantumState& state);

/// initial_state -> devices in order -> square_and_postselect.
QuantumState run_setup(std::span<const DeviceOp> devices, const SimulationConfig& config = {});

}  // namespace qovae::optics
