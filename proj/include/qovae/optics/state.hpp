#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qovae/optics/amplitude.hpp"

namespace qovae::optics {

// a-d end at detectors, e and f are empty paths without a source crystal.
enum class Path : std::uint8_t { a = 0, b, c, d, e, f };

inline constexpr int kNumPaths = 6;
inline constexpr int kNumDetectorPaths = 4;

char path_letter(Path p);
std::optional<Path> path_from_letter(char c);
inline bool is_detector_path(Path p) { return static_cast<int>(p) < kNumDetectorPaths; }

struct Photon {
  Path path = Path::a;
  int oam = 0;

  friend auto operator<=>(const Photon&, const Photon&) = default;
};

/// Sorted multiset of at most four photons.
class Ket {
 public:
  static constexpr std::size_t kMaxPhotons = 4;

  Ket() = default;
  Ket(std::initializer_list<Photon> photons);

  void add(Photon p);
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] const Photon& operator[](std::size_t i) const { return photons_[i]; }
  [[nodiscard]] const Photon* begin() const { return photons_.data(); }
  [[nodiscard]] const Photon* end() const { return photons_.data() + n_; }

  /// Multiset union; nullopt if the result would exceed kMaxPhotons.
  [[nodiscard]] std::optional<Ket> merged(const Ket& other) const;

  /// True when the ket holds exactly one photon on each detector path and none on e/f.
  [[nodiscard]] bool is_fourfold() const;

  /// OAM values in path order a,b,c,d; requires is_fourfold().
  [[nodiscard]] std::array<int, 4> oam_tuple() const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Ket& x, const Ket& y);
  friend std::strong_ordering operator<=>(const Ket& x, const Ket& y);

 private:
  std::array<Photon, kMaxPhotons> photons_{};
  std::uint8_t n_ = 0;
};

/// No surviving four-fold coincidence term after squaring.
class EmptyStateError : public std::runtime_error {
 public:
  EmptyStateError() : std::runtime_error("no four-fold coincidence term survives post-selection") {}
};

/// Sparse superposition with exact amplitudes.
///
/// Normalization is carried as a floating-point scale next to the exact
/// amplitudes, so zero detection stays exact after normalizing.
class QuantumState {
 public:
  using TermMap = std::map<Ket, Amplitude>;

  QuantumState() = default;
  explicit QuantumState(TermMap terms);

  /// Adds to an existing ket or inserts; drops the entry if the sum is exactly zero.
  void accumulate(const Ket& ket, const Amplitude& amp);

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] bool normalized() const { return normalized_; }

  /// Exact amplitude (zero if absent).
  [[nodiscard]] Amplitude exact(const Ket& ket) const;
  /// Amplitude including the normalization scale.
  [[nodiscard]] std::complex<double> amplitude(const Ket& ket) const;
  [[nodiscard]] double scale() const { return scale_; }

  /// Sum of |amplitude|^2 including the scale.
  [[nodiscard]] double norm_sq() const;

  /// Sets the scale so that norm_sq() == 1. Throws on the empty state.
  void normalize();

  /// Exact proportionality: same support and x_k * y_0 == y_k * x_0 for all kets.
  [[nodiscard]] bool proportional_to(const QuantumState& other) const;

  /// Float comparison after aligning the first amplitude of each state to be real-positive.
  [[nodiscard]] bool approx_equal_up_to_phase(const QuantumState& other, double tol) const;

 private:
  TermMap terms_;
  double scale_ = 1.0;
  bool normalized_ = false;
};

}  // namespace qovae::optics
