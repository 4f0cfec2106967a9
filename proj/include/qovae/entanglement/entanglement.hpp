#pragma once

#include <array>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "qovae/optics/state.hpp"

namespace qovae::entanglement {

inline constexpr int kNumBipartitions = 7;

/// Eigenvalues below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-9;

/// Party masks over photons a=bit0 .. d=bit3, in the order
/// a|bcd, b|acd, c|abd, d|abc, ab|cd, ac|bd, ad|bc.
inline constexpr std::array<unsigned, kNumBipartitions> kBipartitionMasks{0b0001, 0b0010, 0b0100, 0b1000,
                                                                          0b0011, 0b0101, 0b1001};

std::string_view bipartition_name(int k);

/// One basis term of an n-party pure state (n <= 4).
struct BasisAmplitude {
  std::array<int, 4> labels{};
  std::complex<double> amp;
};

struct EntanglementSummary {
  std::array<double, kNumBipartitions> entropies{};
  std::array<int, kNumBipartitions> ranks{1, 1, 1, 1, 1, 1, 1};
  double total = 0.0;
};

/// Basis amplitudes of a normalized four-fold state in OAM order (a,b,c,d).
std::vector<BasisAmplitude> basis_amplitudes(const optics::QuantumState& state);

/// Reduced-density spectrum of the parties in `mask` for an n-party pure state,
/// via the smaller Gram matrix of the coefficient matrix. Sorted descending.
std::vector<double> reduced_spectrum(std::span<const BasisAmplitude> terms, unsigned mask, int parties);

/// Spectrum of the reduced state of `part` (mask over a-d). Requires a normalized state.
std::vector<double> bipartition_spectrum(const optics::QuantumState& state, unsigned part);

/// Natural-log von Neumann entropy.
double entropy(std::span<const double> eigs);

int schmidt_rank(std::span<const double> eigs);

/// All seven bipartitions; the empty state and single-ket states are unentangled.
EntanglementSummary summarize(const optics::QuantumState& state);

/// Eigenvalues of a Hermitian matrix (row-major n x n) by cyclic complex Jacobi.
std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> matrix, std::size_t n);

}  // namespace qovae::entanglement
