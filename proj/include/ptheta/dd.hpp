#pragma once

// Double-double arithmetic built on error-free transforms. Each operation has
// a documented relative error constant so callers can carry a running bound.

#include <cmath>
#include <complex>
#include <cstdint>

namespace ptheta {

inline constexpr double unit_roundoff = 0x1p-53;
inline constexpr double dd_eps = unit_roundoff * unit_roundoff;

// Relative error constants, in units of dd_eps.
inline constexpr double dd_add_err = 4.0 * dd_eps;    // relative to |a| + |b|
inline constexpr double dd_mul_err = 8.0 * dd_eps;    // relative to |a b|
inline constexpr double dd_div_err = 16.0 * dd_eps;   // relative to |a / b|
inline constexpr double cdd_add_err = 6.0 * dd_eps;   // relative to |a| + |b|
inline constexpr double cdd_mul_err = 40.0 * dd_eps;  // relative to |a| |b|
inline constexpr double cdd_inv_err = 80.0 * dd_eps;  // relative to 1 / |z|

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  constexpr double to_double() const { return hi + lo; }
};

namespace eft {

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  double e = b - (s - a);
  return {s, e};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  if (!std::isfinite(p)) return {p, 0.0};
  return {p, std::fma(a, b, -p)};
}

}  // namespace eft

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }

inline dd operator+(dd a, dd b) {
  dd s = eft::two_sum(a.hi, b.hi);
  dd t = eft::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = eft::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return eft::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = eft::two_prod(a.hi, b.hi);
  if (!std::isfinite(p.hi)) return p;
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return eft::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  if (!std::isfinite(q1)) return {q1, 0.0};
  dd r = a - b * dd(q1);
  double q2 = r.hi / b.hi;
  r = r - b * dd(q2);
  double q3 = r.hi / b.hi;
  return eft::quick_two_sum(q1, q2) + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }

inline double abs(dd a) { return std::fabs(a.hi + a.lo); }

inline dd dd_sqrt(dd a) {
  if (a.hi <= 0.0) return {0.0, 0.0};
  double x = std::sqrt(a.hi);
  dd xx = eft::two_prod(x, x);
  dd r = a - xx;
  return eft::quick_two_sum(x, r.hi / (2.0 * x));
}

// Integer power by repeated squaring. Squaring doubles an existing relative
// error, so the rounding of base^n is bounded by (n-1) multiplication errors
// rather than by the number of multiplications performed; that weight is
// returned through `weight`.
inline dd dd_pow(dd base, std::int64_t n, std::int64_t* weight = nullptr) {
  dd result(1.0);
  if (weight != nullptr) *weight = n > 1 ? n - 1 : 0;
  while (n > 0) {
    if (n & 1) {
      result = result * base;
    }
    n >>= 1;
    if (n > 0) {
      base = base * base;
    }
  }
  return result;
}

struct cdd {
  dd re;
  dd im;

  constexpr cdd() = default;
  constexpr cdd(dd r) : re(r) {}
  constexpr cdd(dd r, dd i) : re(r), im(i) {}
  explicit cdd(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(const cdd& a, const cdd& b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator-(const cdd& a) { return {-a.re, -a.im}; }

inline cdd operator*(const cdd& a, const cdd& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline cdd operator*(const cdd& a, dd s) { return {a.re * s, a.im * s}; }
inline cdd operator*(dd s, const cdd& a) { return a * s; }

inline double abs(const cdd& a) { return std::hypot(a.re.to_double(), a.im.to_double()); }

inline cdd inverse(const cdd& z) {
  dd n = z.re * z.re + z.im * z.im;
  return {z.re / n, -(z.im / n)};
}

inline cdd operator/(const cdd& a, const cdd& b) { return a * inverse(b); }

inline cdd cdd_pow(cdd base, std::int64_t n, std::int64_t* weight = nullptr) {
  cdd result(dd(1.0));
  if (weight != nullptr) *weight = n > 1 ? n - 1 : 0;
  while (n > 0) {
    if (n & 1) {
      result = result * base;
    }
    n >>= 1;
    if (n > 0) {
      base = base * base;
    }
  }
  return result;
}

}  // namespace ptheta
