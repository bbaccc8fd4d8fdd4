#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include "ptheta/dd.hpp"
#include "ptheta/errors.hpp"

namespace ptheta {

using complex = std::complex<double>;

enum class Case { A, B };

inline const char* to_string(Case c) noexcept { return c == Case::A ? "A" : "B"; }

// Configurable caps shared by the certified operations.
struct Limits {
  double q_max = 0.99;
  std::int64_t max_order = 100000;

  // THETA_MAX_N in the environment lowers the truncation cap.
  static Limits from_environment() {
    Limits lim;
    if (const char* env = std::getenv("THETA_MAX_N")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) lim.max_order = v;
    }
    return lim;
  }
};

// The nome q of the series. Zero is admitted because every operation
// short-circuits it exactly.
class Parameter {
 public:
  Parameter(double q) : q_(q) {
    if (!(std::fabs(q) < 1.0)) fail(ErrorKind::domain, "parameter q must satisfy |q| < 1, got " + std::to_string(q));
  }

  double value() const noexcept { return q_; }
  double abs() const noexcept { return std::fabs(q_); }
  Case regime() const noexcept { return q_ < 0.0 ? Case::B : Case::A; }
  bool is_zero() const noexcept { return q_ == 0.0; }

  operator double() const noexcept { return q_; }

 private:
  double q_;
};

inline void require_certifiable(Parameter q, const Limits& lim) {
  if (q.abs() > lim.q_max) {
    fail(ErrorKind::domain, "|q| = " + std::to_string(q.abs()) + " exceeds q_max = " + std::to_string(lim.q_max));
  }
}

// A value with a rigorous bound on the absolute error.
struct CertifiedValue {
  complex value{0.0, 0.0};
  double err = 0.0;

  double real() const { return value.real(); }
  double imag() const { return value.imag(); }
  double magnitude() const { return std::abs(value); }

  // +1 or -1 when the real part is separated from zero by the bound, else 0.
  int certified_sign() const {
    if (value.real() > err) return 1;
    if (value.real() < -err) return -1;
    return 0;
  }

  bool certainly_nonzero() const { return std::abs(value) > err; }
  bool contains(complex z) const { return std::abs(value - z) <= err; }
};

inline double rounding_slack(complex v) { return 2.0 * unit_roundoff * std::abs(v); }

inline CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
  complex v = a.value + b.value;
  return {v, a.err + b.err + rounding_slack(v)};
}

inline CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b) {
  complex v = a.value - b.value;
  return {v, a.err + b.err + rounding_slack(v)};
}

inline CertifiedValue operator-(const CertifiedValue& a) { return {-a.value, a.err}; }

inline CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b) {
  complex v = a.value * b.value;
  double err = std::abs(a.value) * b.err + std::abs(b.value) * a.err + a.err * b.err;
  return {v, err + 4.0 * unit_roundoff * std::abs(a.value) * std::abs(b.value)};
}

// Scaling by a number that is itself exact (or whose error is accounted elsewhere).
inline CertifiedValue scale(const CertifiedValue& a, complex s) {
  complex v = a.value * s;
  return {v, std::abs(s) * a.err + 4.0 * unit_roundoff * std::abs(a.value) * std::abs(s)};
}

inline CertifiedValue exact(complex v) { return {v, 0.0}; }

struct SeriesTerm {
  std::int64_t j = 0;
  std::int64_t exponent = 0;
  double coefficient = 0.0;
};

constexpr std::int64_t term_exponent(std::int64_t j) { return j * (j + 1) / 2; }

inline SeriesTerm series_term(double q, std::int64_t j) {
  std::int64_t e = term_exponent(j);
  return {j, e, std::pow(q, static_cast<double>(e))};
}

}  // namespace ptheta
