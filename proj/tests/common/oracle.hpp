#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "qovae/entanglement/entanglement.hpp"

namespace qovae::testing {

/// Entropy of the reduced state of `mask` by explicit partial trace of |psi><psi|.
inline double dense_entropy(const std::vector<entanglement::BasisAmplitude>& terms, unsigned mask) {
  std::array<int, 4> lo{}, hi{};
  lo.fill(1 << 20);
  hi.fill(-(1 << 20));
  for (const auto& t : terms)
    for (int p = 0; p < 4; ++p) {
      lo[p] = std::min(lo[p], t.labels[p]);
      hi[p] = std::max(hi[p], t.labels[p]);
    }
  std::array<int, 4> dim{};
  for (int p = 0; p < 4; ++p) dim[p] = hi[p] - lo[p] + 1;
  int dk = 1, dt = 1;
  for (int p = 0; p < 4; ++p) ((mask >> p) & 1 ? dk : dt) *= dim[p];
  // psi as a (kept x traced) matrix
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dk, dt);
  for (const auto& t : terms) {
    int ik = 0, it = 0;
    for (int p = 0; p < 4; ++p) {
      const int v = t.labels[p] - lo[p];
      if ((mask >> p) & 1) ik = ik * dim[p] + v;
      else it = it * dim[p] + v;
    }
    psi(ik, it) += t.amp;
  }
  // rho_kept[i, j] = sum_t psi[i, t] conj(psi[j, t]), written as an explicit trace
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int t = 0; t < dt; ++t) rho(i, j) += psi(i, t) * std::conj(psi(j, t));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double s = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double e = es.eigenvalues()(k);
    if (e > 1e-15) s -= e * std::log(e);
  }
  return s;
}

}  // namespace qovae::testing
