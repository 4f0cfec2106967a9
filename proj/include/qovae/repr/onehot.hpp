#pragma once

#include <span>
#include <vector>

#include "qovae/repr/setup.hpp"
#include "qovae/repr/vocabulary.hpp"

namespace qovae::repr {

/// T x D one-hot matrix stored as one class index per position.
struct OneHotMatrix {
  int steps = 0;    // T
  int classes = 0;  // D
  std::vector<int> index;

  /// Row-major T x D dense copy.
  [[nodiscard]] std::vector<double> dense() const;
};

/// Positions past the setup length hold PAD.
OneHotMatrix encode_onehot(const Setup& setup, const Vocabulary& vocab);

/// Stops at the first PAD. Rejects device classes after a PAD.
Setup decode_onehot(const OneHotMatrix& matrix, const Vocabulary& vocab);

/// Dense variant; every row must contain a single 1 and zeros elsewhere.
Setup decode_onehot(std::span<const double> dense, int steps, const Vocabulary& vocab);

/// Class indices up to the first PAD (inclusive cut), as a setup.
Setup setup_from_indices(std::span<const int> indices, const Vocabulary& vocab);

}  // namespace qovae::repr
