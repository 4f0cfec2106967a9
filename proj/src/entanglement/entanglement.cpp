#include "qovae/entanglement/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qovae::entanglement {

namespace {

using Labels = std::array<int, 4>;

Labels select(const Labels& src, unsigned mask, int parties, bool inside) {
  Labels out{};
  int k = 0;
  for (int i = 0; i < parties; ++i) {
    if (((mask >> i) & 1u) == (inside ? 1u : 0u)) out[k++] = src[i];
  }
  for (; k < 4; ++k) out[k] = 0;
  return out;
}

}  // namespace

std::string_view bipartition_name(int k) {
  static constexpr std::array<std::string_view, kNumBipartitions> names{"a|bcd", "b|acd", "c|abd", "d|abc",
                                                                        "ab|cd", "ac|bd", "ad|bc"};
  return names.at(static_cast<std::size_t>(k));
}

std::vector<BasisAmplitude> basis_amplitudes(const optics::QuantumState& state) {
  std::vector<BasisAmplitude> out;
  out.reserve(state.size());
  for (const auto& [ket, amp] : state.terms()) {
    if (!ket.is_fourfold()) throw std::invalid_argument("state is not four-fold post-selected");
    out.push_back({ket.oam_tuple(), amp.to_complex() * state.scale()});
  }
  return out;
}

std::vector<double> reduced_spectrum(std::span<const BasisAmplitude> terms, unsigned mask, int parties) {
  if (parties < 2 || parties > 4) throw std::invalid_argument("reduced_spectrum: 2 to 4 parties supported");
  double norm = 0.0;
  for (const auto& t : terms) norm += std::norm(t.amp);
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("reduced_spectrum: state is not normalized");

  std::map<Labels, std::size_t> rows, cols;
  for (const auto& t : terms) {
    rows.try_emplace(select(t.labels, mask, parties, true), rows.size());
    cols.try_emplace(select(t.labels, mask, parties, false), cols.size());
  }
  const std::size_t nr = rows.size(), nc = cols.size();
  std::vector<std::complex<double>> m(nr * nc);
  for (const auto& t : terms) {
    m[rows[select(t.labels, mask, parties, true)] * nc + cols[select(t.labels, mask, parties, false)]] += t.amp;
  }

  // Diagonalize the smaller side: M M^dagger (nr x nr) or M^dagger M (nc x nc).
  const bool row_side = nr <= nc;
  const std::size_t n = row_side ? nr : nc;
  std::vector<std::complex<double>> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      if (row_side) {
        for (std::size_t k = 0; k < nc; ++k) acc += m[i * nc + k] * std::conj(m[j * nc + k]);
      } else {
        for (std::size_t k = 0; k < nr; ++k) acc += std::conj(m[k * nc + i]) * m[k * nc + j];
      }
      gram[i * n + j] = acc;
    }
  }
  std::vector<double> eigs = hermitian_eigenvalues(std::move(gram), n);
  for (double& e : eigs) e = std::max(e, 0.0);
  return eigs;
}

std::vector<double> bipartition_spectrum(const optics::QuantumState& state, unsigned part) {
  if (!state.normalized()) throw std::invalid_argument("bipartition_spectrum: state is not normalized");
  std::vector<BasisAmplitude> terms = basis_amplitudes(state);
  return reduced_spectrum(terms, part, 4);
}

double entropy(std::span<const double> eigs) {
  if (eigs.empty()) return 0.0;
  const double top = *std::max_element(eigs.begin(), eigs.end());
  double s = 0.0;
  for (double p : eigs) {
    if (p <= kRankTolerance * top) continue;
    s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

int schmidt_rank(std::span<const double> eigs) {
  if (eigs.empty()) return 0;
  const double top = *std::max_element(eigs.begin(), eigs.end());
  return static_cast<int>(std::count_if(eigs.begin(), eigs.end(), [&](double p) { return p > kRankTolerance * top; }));
}

EntanglementSummary summarize(const optics::QuantumState& state) {
  EntanglementSummary out;
  if (state.size() <= 1) return out;
  std::vector<BasisAmplitude> terms = basis_amplitudes(state);
  for (int k = 0; k < kNumBipartitions; ++k) {
    std::vector<double> eigs = reduced_spectrum(terms, kBipartitionMasks[static_cast<std::size_t>(k)], 4);
    out.entropies[static_cast<std::size_t>(k)] = entropy(eigs);
    out.ranks[static_cast<std::size_t>(k)] = schmidt_rank(eigs);
    out.total += out.entropies[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace qovae::entanglement
