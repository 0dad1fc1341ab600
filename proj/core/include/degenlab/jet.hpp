#pragma once

#include <cmath>

namespace degenlab {

// Second-order forward-mode scalar: carries (value, d/dx, d2/dx2) through
// arithmetic so profile derivatives stay consistent with the value formula
// by construction.
struct Jet2 {
  double v = 0.0;   // value
  double d1 = 0.0;  // first derivative
  double d2 = 0.0;  // second derivative

  static Jet2 var(double x) { return {x, 1.0, 0.0}; }
  static Jet2 cst(double c) { return {c, 0.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double w = a.v / b.v;
  const double w1 = (a.d1 - w * b.d1) / b.v;
  const double w2 = (a.d2 - 2.0 * w1 * b.d1 - w * b.d2) / b.v;
  return {w, w1, w2};
}
inline Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.v - c, a.d1, a.d2}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c}; }
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2::cst(c) / a; }

inline Jet2 log(const Jet2& a) {
  const double w1 = a.d1 / a.v;
  return {std::log(a.v), w1, a.d2 / a.v - w1 * w1};
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}
// a^c for constant exponent c
inline Jet2 pow(const Jet2& a, double c) {
  const double p = std::pow(a.v, c);
  const double p1 = c * std::pow(a.v, c - 1.0);
  const double p2 = c * (c - 1.0) * std::pow(a.v, c - 2.0);
  return {p, p1 * a.d1, p2 * a.d1 * a.d1 + p1 * a.d2};
}
inline Jet2 sqrt(const Jet2& a) { return pow(a, 0.5); }

}  // namespace degenlab
