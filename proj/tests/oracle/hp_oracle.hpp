#pragma once

// Independent reference values computed in 50-digit software floating point
// by plain direct summation. Shares no code with the library under test.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <cstdint>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

struct hpc {
  hp re = 0;
  hp im = 0;
};

inline hpc operator+(const hpc& a, const hpc& b) { return {a.re + b.re, a.im + b.im}; }
inline hpc operator-(const hpc& a, const hpc& b) { return {a.re - b.re, a.im - b.im}; }
inline hpc operator*(const hpc& a, const hpc& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline hpc operator*(const hpc& a, const hp& s) { return {a.re * s, a.im * s}; }
inline hp norm(const hpc& a) { return a.re * a.re + a.im * a.im; }
inline hp mag(const hpc& a) { return sqrt(norm(a)); }
inline hpc inv(const hpc& a) {
  hp n = norm(a);
  return {a.re / n, -a.im / n};
}
inline hpc from(std::complex<double> z) { return {hp(z.real()), hp(z.imag())}; }
inline std::complex<double> to_complex(const hpc& a) {
  return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

inline hp falling(hp a, int k) {
  hp r = 1;
  for (int i = 0; i < k; ++i) r *= a - i;
  return r;
}

// Σ_j P(j) q^{e_j - n} x^{j - m}, stopping once terms stay below 1e-60
// relative to the largest term seen and the geometric ratio is small.
inline hpc theta(hp q, hpc x, int m = 0, int n = 0) {
  hpc sum;
  hp biggest = 0;
  hpc xp{hp(1), hp(0)};  // x^{j-m}
  int quiet = 0;
  for (std::int64_t j = m; j < 200000; ++j) {
    const std::int64_t e = j * (j + 1) / 2;
    if (e >= n) {
      const hp p = falling(hp(j), m) * falling(hp(e), n);
      const hp c = p * pow(q, static_cast<int>(e - n));
      const hpc t = xp * c;
      sum = sum + t;
      const hp tm = mag(t);
      if (tm > biggest) biggest = tm;
      if (j > m + 4 && tm <= biggest * hp("1e-60") + hp("1e-300")) {
        if (++quiet > 3) break;
      } else {
        quiet = 0;
      }
    }
    xp = xp * x;
  }
  return sum;
}

inline hpc theta(double q, std::complex<double> x, int m = 0, int n = 0) { return theta(hp(q), from(x), m, n); }

// Σ_{|j| <= J} q^{j(j+1)/2} x^j
inline hpc bilateral(hp q, hpc x, int J = 60) {
  hpc sum;
  for (int j = -J; j <= J; ++j) {
    const std::int64_t e = static_cast<std::int64_t>(j) * (j + 1) / 2;
    hpc xp{hp(1), hp(0)};
    const hpc base = j >= 0 ? x : inv(x);
    for (int i = 0; i < (j >= 0 ? j : -j); ++i) xp = xp * base;
    sum = sum + xp * pow(q, static_cast<int>(e));
  }
  return sum;
}

// G = Σ_{k>=0} q^{k(k+1)/2} x^{-(k+1)}
inline hpc g_tail(hp q, hpc x, int terms = 60) {
  const hpc w = inv(x);
  hpc wp = w;
  hpc sum;
  for (int k = 0; k < terms; ++k) {
    sum = sum + wp * pow(q, k * (k + 1) / 2);
    wp = wp * w;
  }
  return sum;
}

// Real-argument summation in 120-digit precision for points where the terms
// grow far beyond the value (q close to 1 with |x| > 1).
using hp_wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;

inline hp_wide theta_wide(double q, double x) {
  hp_wide sum = 0;
  hp_wide term = 1;  // q^{e_j} x^j
  hp_wide qj = q;    // q^{j+1}
  const hp_wide xw = x;
  hp_wide biggest = 0;
  for (int j = 0; j < 200000; ++j) {
    sum += term;
    if (abs(term) > biggest) biggest = abs(term);
    if (j > 4 && abs(term) < biggest * hp_wide("1e-110") && abs(qj * xw) < 0.5) break;
    term *= qj * xw;
    qj *= q;
  }
  return sum;
}

// Real root of the series by bisection on [lo, hi] (sign change required).
inline hp bisect_root(hp q, hp lo, hp hi, int iters = 180) {
  auto f = [&](hp x) { return theta(q, hpc{x, hp(0)}).re; };
  hp flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    hp mid = (lo + hi) / 2;
    hp fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

// Double zero (θ = θ_x = 0) near (q, y) by Newton in 50 digits on the pair
// of equations; residuals are returned so callers can confirm convergence.
struct DoubleZero {
  hp q;
  hp y;
  hp f;
  hp fx;
};

inline DoubleZero double_zero(hp q, hp y, int iters = 40) {
  auto at = [&](int m, int n) { return theta(q, hpc{y, hp(0)}, m, n).re; };
  for (int i = 0; i < iters; ++i) {
    const hp f = at(0, 0), fx = at(1, 0), fq = at(0, 1), fxx = at(2, 0), fxq = at(1, 1);
    const hp det = fq * fxx - fx * fxq;
    if (det == 0) break;
    const hp dq = -(f * fxx - fx * fx) / det;
    const hp dy = -(fq * fx - fxq * f) / det;
    q += dq;
    y += dy;
    if (abs(dq) < hp("1e-45") && abs(dy) < hp("1e-45")) break;
  }
  return {q, y, at(0, 0), at(1, 0)};
}

}  // namespace oracle
