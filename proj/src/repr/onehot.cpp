#include "qovae/repr/onehot.hpp"

#include <stdexcept>
#include <string>

namespace qovae::repr {

std::vector<double> OneHotMatrix::dense() const {
  std::vector<double> out(static_cast<std::size_t>(steps) * static_cast<std::size_t>(classes), 0.0);
  for (int t = 0; t < steps; ++t) out[static_cast<std::size_t>(t * classes + index[static_cast<std::size_t>(t)])] = 1.0;
  return out;
}

OneHotMatrix encode_onehot(const Setup& setup, const Vocabulary& vocab) {
  const int T = vocab.max_length();
  if (static_cast<int>(setup.length()) > T) {
    throw std::length_error("setup length " + std::to_string(setup.length()) + " exceeds max length " + std::to_string(T));
  }
  OneHotMatrix m{T, vocab.size(), std::vector<int>(static_cast<std::size_t>(T), Vocabulary::kPad)};
  for (std::size_t t = 0; t < setup.length(); ++t) {
    std::optional<int> idx = vocab.index_of(setup.devices[t]);
    if (!idx) throw std::invalid_argument("device " + setup.devices[t].token() + " not in vocabulary");
    m.index[t] = *idx;
  }
  return m;
}

Setup setup_from_indices(std::span<const int> indices, const Vocabulary& vocab) {
  Setup out;
  for (int idx : indices) {
    if (idx == Vocabulary::kPad) break;
    out.devices.push_back(vocab.device(idx));
  }
  return out;
}

Setup decode_onehot(const OneHotMatrix& matrix, const Vocabulary& vocab) {
  if (matrix.classes != vocab.size()) throw std::invalid_argument("one-hot class count does not match vocabulary");
  bool padded = false;
  for (int idx : matrix.index) {
    if (idx < 0 || idx >= vocab.size()) throw std::invalid_argument("one-hot index out of range");
    if (idx == Vocabulary::kPad) padded = true;
    else if (padded) throw std::invalid_argument("device column after PAD");
  }
  return setup_from_indices(matrix.index, vocab);
}

Setup decode_onehot(std::span<const double> dense, int steps, const Vocabulary& vocab) {
  const int D = vocab.size();
  if (dense.size() != static_cast<std::size_t>(steps * D)) throw std::invalid_argument("dense one-hot has wrong size");
  OneHotMatrix m{steps, D, {}};
  for (int t = 0; t < steps; ++t) {
    int hot = -1;
    for (int k = 0; k < D; ++k) {
      const double v = dense[static_cast<std::size_t>(t * D + k)];
      if (v == 1.0 && hot < 0) hot = k;
      else if (v != 0.0) throw std::invalid_argument("column " + std::to_string(t) + " is not one-hot");
    }
    if (hot < 0) throw std::invalid_argument("column " + std::to_string(t) + " is not one-hot");
    m.index.push_back(hot);
  }
  return decode_onehot(m, vocab);
}

}  // namespace qovae::repr
