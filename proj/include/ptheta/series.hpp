#pragma once

// Certified summation of the partial theta series and its term-wise
// derivatives. Terms are generated by the recurrence
//   t_{j+1} = t_j * (q^{j+1} z)
// in double-double arithmetic with a running bound on the rounding error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "ptheta/certified.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/errors.hpp"

namespace ptheta {

struct TruncationOrder {
  std::int64_t order = 0;
  double tail = 0.0;
};

inline void require_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) fail(ErrorKind::domain, "tolerance must be positive and finite");
}

inline TruncationOrder truncation_order(double q_abs, double x_abs, double tol, std::int64_t cap = 100000) {
  if (!(q_abs >= 0.0 && q_abs < 1.0)) fail(ErrorKind::domain, "truncation_order needs 0 <= |q| < 1");
  if (!(x_abs >= 0.0) || !std::isfinite(x_abs)) fail(ErrorKind::domain, "truncation_order needs finite |x|");
  require_tolerance(tol);
  if (x_abs == 0.0 || q_abs == 0.0) return {0, 0.0};

  const double lq = std::log(q_abs);
  const double lx = std::log(x_abs);
  const double lhalf = std::log(0.5);
  const double ltol = std::log(tol);
  for (std::int64_t n = 0; n <= cap; ++n) {
    const double nn = static_cast<double>(n);
    if ((nn + 1.0) * lq + lx > lhalf) continue;
    const double ratio = std::exp((nn + 2.0) * lq + lx);
    const double log_tail = 0.5 * (nn + 1.0) * (nn + 2.0) * lq + (nn + 1.0) * lx - std::log1p(-ratio);
    if (log_tail <= ltol) return {n, std::exp(log_tail)};
  }
  fail(ErrorKind::infeasible_tolerance, "truncation order would exceed cap " + std::to_string(cap));
}

namespace detail {

inline std::int64_t first_index(int dx, int dq) {
  std::int64_t j = dx;
  while (term_exponent(j) < dq) ++j;
  return j;
}

inline double falling(double a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a - i;
  return r;
}

inline dd falling_dd(std::int64_t a, int k) {
  dd r(1.0);
  for (int i = 0; i < k; ++i) r = r * dd(static_cast<double>(a - i));
  return r;
}

// log of |P(j) q^{e_j - dq} x^{j - dx}|
inline double log_derivative_term(std::int64_t j, int dx, int dq, double lq, double lx) {
  const double e = static_cast<double>(term_exponent(j));
  const double lp = std::log(std::fabs(falling(static_cast<double>(j), dx))) + std::log(std::fabs(falling(e, dq)));
  return lp + (e - dq) * lq + static_cast<double>(j - dx) * lx;
}

// Largest log term of the differentiated series, for overflow detection.
inline double log_max_term(double q_abs, double x_abs, int dx, int dq) {
  if (q_abs == 0.0 || x_abs == 0.0) return 0.0;
  const double lq = std::log(q_abs);
  const double lx = std::log(x_abs);
  const std::int64_t j0 = first_index(dx, dq);
  const double jstar = std::max(0.0, lx / -lq);
  double best = log_derivative_term(j0, dx, dq, lq, lx);
  const std::int64_t lo = std::max<std::int64_t>(j0, static_cast<std::int64_t>(jstar) - 3);
  for (std::int64_t j = lo; j <= lo + 2 * (dx + dq) + 8; ++j) best = std::max(best, log_derivative_term(j, dx, dq, lq, lx));
  return best;
}

struct SumResult {
  cdd sum;
  double abs_err = 0.0;   // accumulated rounding plus input-error propagation
  double abs_sum = 0.0;   // sum of term magnitudes
};

// Sums j = j0..last of P(j) q^{e_j - dq} z^{j - dx}.
// q_rel and z_rel bound the relative error already present in q and z.
inline SumResult sum_terms(dd q, double q_rel, const cdd& z, double z_rel, int dx, int dq, std::int64_t last) {
  SumResult out;
  const std::int64_t j0 = first_index(dx, dq);
  if (last < j0) return out;

  std::int64_t mq = 0;
  std::int64_t mz = 0;
  const dd qpow = dd_pow(q, term_exponent(j0) - dq, &mq);
  const cdd zpow = cdd_pow(z, j0 - dx, &mz);
  cdd t = zpow * qpow;
  double t_rel = static_cast<double>(mq + 1) * dd_mul_err + static_cast<double>(mz) * cdd_mul_err + cdd_mul_err;

  std::int64_t mw = 0;
  cdd w = cdd_pow(cdd(q), j0 + 1, &mw);
  w = w * z;
  double w_rel = static_cast<double>(mw + 1) * cdd_mul_err;

  const double p_rel = (dx + dq + 1) * dd_mul_err;
  for (std::int64_t j = j0; j <= last; ++j) {
    const dd p = falling_dd(j, dx) * falling_dd(term_exponent(j), dq);
    const cdd term = t * p;
    const double term_abs = abs(term);
    const double input_exp = static_cast<double>(j - dx) * z_rel + static_cast<double>(term_exponent(j) - dq) * q_rel;
    const double input_rel = input_exp > 0.0 ? std::expm1(input_exp) : 0.0;
    const double before = abs(out.sum);
    out.sum = out.sum + term;
    out.abs_err += (t_rel + p_rel + cdd_mul_err) * term_abs + input_rel * term_abs * (1.0 + t_rel) +
                   cdd_add_err * (before + term_abs);
    out.abs_sum += term_abs;
    if (j == last) break;
    t = t * w;
    t_rel += w_rel + cdd_mul_err;
    w = w * q;
    w_rel += cdd_mul_err;
  }
  out.abs_err *= 1.0 + 1e-6;
  return out;
}

inline void check_overflow(double log_max) {
  if (log_max > 700.0) {
    fail(ErrorKind::domain, "series terms overflow binary64 (log max term " + std::to_string(log_max) + ")");
  }
}

inline CertifiedValue finish(const SumResult& s, double tail) {
  const complex v = s.sum.to_complex();
  return {v, tail + s.abs_err + 2.0 * unit_roundoff * std::abs(v)};
}

}  // namespace detail

inline TruncationOrder derivative_truncation(double q_abs, double x_abs, int dx, int dq, double tol,
                                             std::int64_t cap = 100000) {
  if (!(q_abs >= 0.0 && q_abs < 1.0)) fail(ErrorKind::domain, "derivative_truncation needs 0 <= |q| < 1");
  require_tolerance(tol);
  const std::int64_t j0 = detail::first_index(dx, dq);
  if (x_abs == 0.0 || q_abs == 0.0) return {j0, 0.0};

  const double lq = std::log(q_abs);
  const double lx = std::log(x_abs);
  const double ltol = std::log(tol);
  for (std::int64_t n = j0 + 2; n <= cap; ++n) {
    const double nn = static_cast<double>(n);
    if ((nn + 2.0) * lq + lx > std::log(0.25)) continue;
    const double l1 = detail::log_derivative_term(n + 1, dx, dq, lq, lx);
    const double l2 = detail::log_derivative_term(n + 2, dx, dq, lq, lx);
    const double ratio = std::exp(l2 - l1);
    if (ratio > 0.5) continue;
    const double log_tail = l1 - std::log1p(-ratio);
    if (log_tail <= ltol) return {n, std::exp(log_tail)};
  }
  fail(ErrorKind::infeasible_tolerance, "derivative truncation order would exceed cap " + std::to_string(cap));
}

// Series evaluation with inputs that may already carry relative error
// (used for composed arguments such as q^4 or x^2/q).
inline CertifiedValue theta_series(dd q, double q_rel, const cdd& z, double z_rel, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  const double qa = abs(q) * (1.0 + q_rel);
  const double za = abs(z) * (1.0 + z_rel);
  if (q.hi == 0.0 || (z.re.hi == 0.0 && z.im.hi == 0.0)) return exact(1.0);
  if (qa >= 1.0) fail(ErrorKind::domain, "composed parameter reached |q| >= 1");
  const TruncationOrder tr = truncation_order(qa, za, tol, lim.max_order);
  detail::check_overflow(detail::log_max_term(qa, za, 0, 0));
  return detail::finish(detail::sum_terms(q, q_rel, z, z_rel, 0, 0, tr.order), tr.tail);
}

inline CertifiedValue theta_certified(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  require_certifiable(q, lim);
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) fail(ErrorKind::domain, "x must be finite");
  if (q.is_zero() || x == complex(0.0, 0.0)) return exact(1.0);
  return theta_series(dd(q.value()), 0.0, cdd(x), 0.0, tol, lim);
}

inline CertifiedValue theta_derivative_series(dd q, double q_rel, const cdd& z, double z_rel, int dx, int dq, double tol,
                                              const Limits& lim = {}) {
  const double qa = abs(q) * (1.0 + q_rel);
  const double za = abs(z) * (1.0 + z_rel);
  const TruncationOrder tr = derivative_truncation(qa, za, dx, dq, tol, lim.max_order);
  detail::check_overflow(detail::log_max_term(qa, za, dx, dq));
  return detail::finish(detail::sum_terms(q, q_rel, z, z_rel, dx, dq, tr.order), tr.tail);
}

inline CertifiedValue theta_derivative(Parameter q, complex x, int dx_order, int dq_order, double tol,
                                       const Limits& lim = {}) {
  require_tolerance(tol);
  require_certifiable(q, lim);
  if (dx_order < 0 || dx_order > 4 || dq_order < 0 || dq_order > 2) {
    fail(ErrorKind::domain, "derivative orders must satisfy 0<=dx<=4, 0<=dq<=2");
  }
  if (dx_order == 0 && dq_order == 0) return theta_certified(q, x, tol, lim);

  if (x == complex(0.0, 0.0)) {
    // Only j = dx survives: P(dx) q^{e_dx - dq}.
    const std::int64_t j = dx_order;
    const std::int64_t e = term_exponent(j);
    if (e < dq_order) return exact(0.0);
    std::int64_t mults = 0;
    const dd p = detail::falling_dd(j, dx_order) * detail::falling_dd(e, dq_order);
    const dd v = p * dd_pow(dd(q.value()), e - dq_order, &mults);
    const double val = v.to_double();
    return {val, static_cast<double>(mults + dx_order + dq_order + 2) * dd_mul_err * std::fabs(val) + unit_roundoff * std::fabs(val)};
  }
  if (q.is_zero()) {
    // Only the term with e_j == dq survives.
    if (dq_order == 1 && dx_order <= 1) return exact(dx_order == 0 ? x : complex(1.0));
    return exact(0.0);
  }
  return theta_derivative_series(dd(q.value()), 0.0, cdd(x), 0.0, dx_order, dq_order, tol, lim);
}

// The degree-N partial sum, with only the rounding error bounded.
inline CertifiedValue theta_truncated(Parameter q, complex x, std::int64_t n, int dx_order = 0) {
  if (n < 0) fail(ErrorKind::domain, "truncation degree must be nonnegative");
  if (q.is_zero() || x == complex(0.0, 0.0)) {
    if (dx_order == 0) return exact(1.0);
    if (dx_order == 1) return exact(n >= 1 ? complex(q.value()) : complex(0.0));
  }
  return detail::finish(detail::sum_terms(dd(q.value()), 0.0, cdd(x), 0.0, dx_order, 0, n), 0.0);
}

}  // namespace ptheta
