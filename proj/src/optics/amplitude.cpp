#include "qovae/optics/amplitude.hpp"

#include <cmath>
#include <numbers>

namespace qovae::optics {

namespace {

using Int = Amplitude::Int;

Int checked_add(Int x, Int y) {
  Int r;
  if (__builtin_add_overflow(x, y, &r)) throw AmplitudeOverflow("amplitude overflow in addition");
  return r;
}

Int checked_sub(Int x, Int y) {
  Int r;
  if (__builtin_sub_overflow(x, y, &r)) throw AmplitudeOverflow("amplitude overflow in subtraction");
  return r;
}

Int checked_mul(Int x, Int y) {
  Int r;
  if (__builtin_mul_overflow(x, y, &r)) throw AmplitudeOverflow("amplitude overflow in multiplication");
  return r;
}

Int checked_shl(Int x, int bits) {
  for (int k = 0; k < bits; ++k) x = checked_mul(x, 2);
  return x;
}

// (x0 + x1 r2)(y0 + y1 r2) = x0 y0 + 2 x1 y1 + (x0 y1 + x1 y0) r2
struct Quad {
  Int u, v;
};

Quad quad_mul(Quad x, Quad y) {
  return {checked_add(checked_mul(x.u, y.u), checked_mul(2, checked_mul(x.v, y.v))),
          checked_add(checked_mul(x.u, y.v), checked_mul(x.v, y.u))};
}

Quad quad_add(Quad x, Quad y) { return {checked_add(x.u, y.u), checked_add(x.v, y.v)}; }
Quad quad_sub(Quad x, Quad y) { return {checked_sub(x.u, y.u), checked_sub(x.v, y.v)}; }

std::string int_to_string(Int v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string out;
  // Works for the full range except INT128_MIN, which canonical values never reach.
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  while (u > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

}  // namespace

Amplitude::Amplitude(Int a, Int b, Int c, Int d, int exp) : a_(a), b_(b), c_(c), d_(d), exp_(exp) {
  if (exp_ < 0) {
    a_ = checked_shl(a_, -exp_);
    b_ = checked_shl(b_, -exp_);
    c_ = checked_shl(c_, -exp_);
    d_ = checked_shl(d_, -exp_);
    exp_ = 0;
  }
  canonicalize();
}

void Amplitude::canonicalize() {
  if (is_zero()) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && a_ % 2 == 0 && b_ % 2 == 0 && c_ % 2 == 0 && d_ % 2 == 0) {
    a_ /= 2;
    b_ /= 2;
    c_ /= 2;
    d_ /= 2;
    --exp_;
  }
}

Amplitude Amplitude::operator-() const {
  return {checked_sub(0, a_), checked_sub(0, b_), checked_sub(0, c_), checked_sub(0, d_), exp_};
}

// (A + Bi) i = -B + Ai
Amplitude Amplitude::times_i() const { return {checked_sub(0, c_), checked_sub(0, d_), a_, b_, exp_}; }

// (u + v r2) / r2 = (u r2 + 2v) / 2
Amplitude Amplitude::div_sqrt2() const {
  return {checked_mul(2, b_), a_, checked_mul(2, d_), c_, exp_ + 1};
}

Amplitude Amplitude::conj() const { return {a_, b_, checked_sub(0, c_), checked_sub(0, d_), exp_}; }

Amplitude operator+(const Amplitude& x, const Amplitude& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  int e = std::max(x.exp_, y.exp_);
  int sx = e - x.exp_;
  int sy = e - y.exp_;
  return {checked_add(checked_shl(x.a_, sx), checked_shl(y.a_, sy)),
          checked_add(checked_shl(x.b_, sx), checked_shl(y.b_, sy)),
          checked_add(checked_shl(x.c_, sx), checked_shl(y.c_, sy)),
          checked_add(checked_shl(x.d_, sx), checked_shl(y.d_, sy)), e};
}

Amplitude operator-(const Amplitude& x, const Amplitude& y) { return x + (-y); }

// (A + Bi)(C + Di) = (AC - BD) + (AD + BC) i with A..D in Z[r2]
Amplitude operator*(const Amplitude& x, const Amplitude& y) {
  if (x.is_zero() || y.is_zero()) return {};
  Quad A{x.a_, x.b_}, B{x.c_, x.d_}, C{y.a_, y.b_}, D{y.c_, y.d_};
  Quad re = quad_sub(quad_mul(A, C), quad_mul(B, D));
  Quad im = quad_add(quad_mul(A, D), quad_mul(B, C));
  return {re.u, re.v, im.u, im.v, x.exp_ + y.exp_};
}

std::complex<double> Amplitude::to_complex() const {
  const double r2 = std::numbers::sqrt2;
  const double scale = std::ldexp(1.0, -exp_);
  return {(static_cast<double>(a_) + static_cast<double>(b_) * r2) * scale,
          (static_cast<double>(c_) + static_cast<double>(d_) * r2) * scale};
}

std::string Amplitude::to_string() const {
  return "(" + int_to_string(a_) + (b_ < 0 ? "" : "+") + int_to_string(b_) + "r2 + (" + int_to_string(c_) +
         (d_ < 0 ? "" : "+") + int_to_string(d_) + "r2)i)/2^" + std::to_string(exp_);
}

}  // namespace qovae::optics
