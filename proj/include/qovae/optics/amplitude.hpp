#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qovae::optics {

/// Raised when an exact amplitude component leaves the 128-bit budget.
class AmplitudeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exact element of Z[i, sqrt2] / 2^m:
///   (a + b*sqrt2 + (c + d*sqrt2) * i) / 2^exp
///
/// Values are kept canonical (no common factor of two between the four
/// numerator components and the denominator), so structural equality is
/// value equality and the zero test is exact.
class Amplitude {
 public:
  using Int = __int128;

  Amplitude() = default;
  Amplitude(Int a, Int b, Int c, Int d, int exp = 0);

  static Amplitude zero() { return {}; }
  static Amplitude one() { return {1, 0, 0, 0}; }
  static Amplitude imag_unit() { return {0, 0, 1, 0}; }
  static Amplitude from_int(long long v) { return {v, 0, 0, 0}; }

  [[nodiscard]] bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }

  [[nodiscard]] Amplitude operator-() const;
  [[nodiscard]] Amplitude times_i() const;
  [[nodiscard]] Amplitude div_sqrt2() const;
  [[nodiscard]] Amplitude conj() const;

  friend Amplitude operator+(const Amplitude& x, const Amplitude& y);
  friend Amplitude operator-(const Amplitude& x, const Amplitude& y);
  friend Amplitude operator*(const Amplitude& x, const Amplitude& y);
  Amplitude& operator+=(const Amplitude& y) { return *this = *this + y; }
  Amplitude& operator*=(const Amplitude& y) { return *this = *this * y; }

  friend bool operator==(const Amplitude&, const Amplitude&) = default;

  [[nodiscard]] std::complex<double> to_complex() const;
  /// Exact |x|^2 rendered as a double.
  [[nodiscard]] double norm_sq() const { return std::norm(to_complex()); }

  [[nodiscard]] Int re_int() const { return a_; }
  [[nodiscard]] Int re_sqrt2() const { return b_; }
  [[nodiscard]] Int im_int() const { return c_; }
  [[nodiscard]] Int im_sqrt2() const { return d_; }
  [[nodiscard]] int exponent() const { return exp_; }

  /// e.g. "(-2+1r2 + (0+0r2)i)/2^1" where r2 stands for sqrt(2).
  [[nodiscard]] std::string to_string() const;

 private:
  void canonicalize();

  Int a_ = 0;
  Int b_ = 0;
  Int c_ = 0;
  Int d_ = 0;
  int exp_ = 0;
};

}  // namespace qovae::optics
