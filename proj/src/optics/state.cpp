#include "qovae/optics/state.hpp"

#include <algorithm>
#include <cmath>

namespace qovae::optics {

char path_letter(Path p) { return static_cast<char>('a' + static_cast<int>(p)); }

std::optional<Path> path_from_letter(char c) {
  if (c < 'a' || c >= 'a' + kNumPaths) return std::nullopt;
  return static_cast<Path>(c - 'a');
}

Ket::Ket(std::initializer_list<Photon> photons) {
  for (const Photon& p : photons) add(p);
}

void Ket::add(Photon p) {
  if (n_ == kMaxPhotons) throw std::length_error("ket holds at most four photons");
  std::size_t pos = n_;
  while (pos > 0 && p < photons_[pos - 1]) {
    photons_[pos] = photons_[pos - 1];
    --pos;
  }
  photons_[pos] = p;
  ++n_;
}

std::optional<Ket> Ket::merged(const Ket& other) const {
  if (n_ + other.n_ > kMaxPhotons) return std::nullopt;
  Ket out = *this;
  for (const Photon& p : other) out.add(p);
  return out;
}

bool Ket::is_fourfold() const {
  if (n_ != 4) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (static_cast<std::size_t>(photons_[i].path) != i) return false;
  }
  return true;
}

std::array<int, 4> Ket::oam_tuple() const {
  return {photons_[0].oam, photons_[1].oam, photons_[2].oam, photons_[3].oam};
}

std::string Ket::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < n_; ++i) {
    out += "|" + std::to_string(photons_[i].oam) + ">_" + path_letter(photons_[i].path);
  }
  return out.empty() ? "|vac>" : out;
}

bool operator==(const Ket& x, const Ket& y) {
  return x.n_ == y.n_ && std::equal(x.begin(), x.end(), y.begin());
}

std::strong_ordering operator<=>(const Ket& x, const Ket& y) {
  if (auto c = x.n_ <=> y.n_; c != 0) return c;
  for (std::size_t i = 0; i < x.n_; ++i) {
    if (auto c = x.photons_[i] <=> y.photons_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

QuantumState::QuantumState(TermMap terms) {
  for (auto& [ket, amp] : terms) accumulate(ket, amp);
}

void QuantumState::accumulate(const Ket& ket, const Amplitude& amp) {
  if (amp.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(ket, amp);
  if (inserted) return;
  it->second += amp;
  if (it->second.is_zero()) terms_.erase(it);
}

Amplitude QuantumState::exact(const Ket& ket) const {
  auto it = terms_.find(ket);
  return it == terms_.end() ? Amplitude::zero() : it->second;
}

std::complex<double> QuantumState::amplitude(const Ket& ket) const { return exact(ket).to_complex() * scale_; }

double QuantumState::norm_sq() const {
  double total = 0.0;
  for (const auto& [ket, amp] : terms_) total += amp.norm_sq();
  return total * scale_ * scale_;
}

void QuantumState::normalize() {
  if (terms_.empty()) throw EmptyStateError();
  double raw = 0.0;
  for (const auto& [ket, amp] : terms_) raw += amp.norm_sq();
  scale_ = 1.0 / std::sqrt(raw);
  normalized_ = true;
}

bool QuantumState::proportional_to(const QuantumState& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  if (terms_.empty()) return true;
  const Amplitude& x0 = terms_.begin()->second;
  const Amplitude& y0 = other.terms_.begin()->second;
  auto it = other.terms_.begin();
  for (const auto& [ket, x] : terms_) {
    if (!(it->first == ket)) return false;
    if (!(x * y0 == it->second * x0)) return false;
    ++it;
  }
  return true;
}

bool QuantumState::approx_equal_up_to_phase(const QuantumState& other, double tol) const {
  if (terms_.size() != other.terms_.size()) return false;
  if (terms_.empty()) return true;
  auto phase_of = [](const QuantumState& s) {
    std::complex<double> first = s.amplitude(s.terms_.begin()->first);
    return std::conj(first) / std::abs(first);
  };
  const std::complex<double> px = phase_of(*this);
  const std::complex<double> py = phase_of(other);
  auto it = other.terms_.begin();
  for (const auto& [ket, amp] : terms_) {
    if (!(it->first == ket)) return false;
    if (std::abs(amplitude(ket) * px - other.amplitude(ket) * py) > tol) return false;
    ++it;
  }
  return true;
}

}  // namespace qovae::optics
