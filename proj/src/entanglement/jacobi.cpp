#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qovae/entanglement/entanglement.hpp"

namespace qovae::entanglement {

namespace {

constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const std::vector<std::complex<double>>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += std::norm(a[i * n + j]);
    }
  }
  return std::sqrt(s);
}

}  // namespace

std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("hermitian_eigenvalues: matrix size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> std::complex<double>& { return a[i * n + j]; };

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a, n) >= kOffDiagonalTolerance; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const std::complex<double> g = at(p, q);
        const double mag = std::abs(g);
        if (mag == 0.0) continue;

        // Phase q so the (p,q) entry becomes real positive.
        const std::complex<double> dq = std::conj(g / mag);
        for (std::size_t k = 0; k < n; ++k) at(k, q) *= dq;
        for (std::size_t k = 0; k < n; ++k) at(q, k) *= std::conj(dq);

        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const std::complex<double> kp = at(k, p);
          const std::complex<double> kq = at(k, q);
          at(k, p) = c * kp - s * kq;
          at(k, q) = s * kp + c * kq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const std::complex<double> pk = at(p, k);
          const std::complex<double> qk = at(q, k);
          at(p, k) = c * pk - s * qk;
          at(q, k) = s * pk + c * qk;
        }
        at(p, q) = at(q, p) = 0.0;
        at(p, p) = app - t * mag;
        at(q, q) = aqq + t * mag;
      }
    }
  }

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = at(i, i).real();
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return eigs;
}

}  // namespace qovae::entanglement
