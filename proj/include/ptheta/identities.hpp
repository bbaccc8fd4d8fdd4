#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "ptheta/certified.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/evaluate.hpp"
#include "ptheta/series.hpp"

namespace ptheta {

namespace detail {

inline CertifiedValue from_cdd(const cdd& z, double rel) {
  const complex v = z.to_complex();
  return {v, rel * abs(z) + 2.0 * unit_roundoff * std::abs(v)};
}

}  // namespace detail

// θ(q,x) − 1 − q x θ(q,qx)
inline CertifiedValue functional_equation_residual(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_certifiable(q, lim);
  if (x == complex(0.0, 0.0) || q.is_zero()) return exact(0.0);
  const cdd qx = cdd(x) * dd(q.value());
  const CertifiedValue lhs = theta_value(q, x, tol, Route::automatic, lim);
  const CertifiedValue inner = theta_value_at(q, qx, cdd_mul_err, tol, lim);
  const CertifiedValue rhs = detail::from_cdd(qx, cdd_mul_err) * inner;
  return lhs - exact(1.0) - rhs;
}

struct Decomposition {
  CertifiedValue theta1;
  CertifiedValue theta2;
  CertifiedValue recombined;
};

// θ(q,x) = θ(q⁴, x²/q) + q x θ(q⁴, q x²)
inline Decomposition decompose(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_certifiable(q, lim);
  Decomposition d;
  if (q.is_zero()) {
    d.theta1 = d.theta2 = d.recombined = exact(1.0);
    return d;
  }
  const dd qd(q.value());
  const dd q2 = qd * qd;
  const dd q4 = q2 * q2;
  const double q4_rel = 2.0 * dd_mul_err;
  const Parameter p4(q4.to_double());
  const cdd xc(x);
  const cdd x2 = xc * xc;
  const cdd z1 = x2 * (dd(1.0) / qd);
  const cdd z2 = x2 * qd;
  const double z1_rel = 2.0 * cdd_mul_err + dd_div_err;
  const double z2_rel = 2.0 * cdd_mul_err;

  auto eval = [&](const cdd& z, double z_rel) -> CertifiedValue {
    const complex zc = z.to_complex();
    if (zc == complex(0.0, 0.0)) return exact(1.0);
    if (choose_route(p4, zc) == Route::series) return theta_series(q4, q4_rel, z, z_rel, tol, lim);
    // q⁴ rounded to binary64 differs from the dd value; bound that shift with θ_q.
    CertifiedValue v = theta_value_at(p4, z, z_rel, tol, lim);
    const Jet jet = theta_jet(p4, zc, tol, lim);
    const double dq = std::fabs((q4 - dd(p4.value())).to_double()) + q4_rel * abs(q4);
    v.err += 2.0 * std::abs(jet.fq) * dq;
    return v;
  };
  d.theta1 = eval(z1, z1_rel);
  d.theta2 = eval(z2, z2_rel);
  const cdd qx = xc * qd;
  d.recombined = d.theta1 + detail::from_cdd(qx, cdd_mul_err) * d.theta2;
  return d;
}

// 2q θ_q − 2x θ_x − x² θ_xx
inline CertifiedValue pde_residual(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_certifiable(q, lim);
  if (x == complex(0.0, 0.0)) return exact(0.0);
  const CertifiedValue tq = theta_derivative(q, x, 0, 1, tol, lim);
  const CertifiedValue tx = theta_derivative(q, x, 1, 0, tol, lim);
  const CertifiedValue txx = theta_derivative(q, x, 2, 0, tol, lim);
  const CertifiedValue x2{x * x, 4.0 * unit_roundoff * std::norm(x)};
  return scale(tq, 2.0 * q.value()) - scale(tx, 2.0 * x) - x2 * txx;
}

// x θ_xx(q,x) − 2q² θ_q(q,qx)  and  x² θ_xxxx(q,x) − 4q⁵ θ_qq(q,q²x)
inline std::pair<CertifiedValue, CertifiedValue> mixed_identity_residuals(Parameter q, complex x, double tol,
                                                                          const Limits& lim = {}) {
  require_certifiable(q, lim);
  if (x == complex(0.0, 0.0) || q.is_zero()) return {exact(0.0), exact(0.0)};
  const dd qd(q.value());
  const cdd xc(x);
  const cdd qx = xc * qd;
  const cdd q2x = xc * (qd * qd);

  const CertifiedValue txx = theta_derivative(q, x, 2, 0, tol, lim);
  const CertifiedValue tq_at_qx = theta_derivative_series(qd, 0.0, qx, cdd_mul_err, 0, 1, tol, lim);
  const dd c1 = dd(2.0) * qd * qd;
  const CertifiedValue r1 = scale(txx, x) - detail::from_cdd(cdd(c1), 2.0 * dd_mul_err) * tq_at_qx;

  const CertifiedValue t4 = theta_derivative(q, x, 4, 0, tol, lim);
  const CertifiedValue tqq = theta_derivative_series(qd, 0.0, q2x, 2.0 * cdd_mul_err, 0, 2, tol, lim);
  const dd c2 = dd(4.0) * dd_pow(qd, 5);
  const CertifiedValue x2{x * x, 4.0 * unit_roundoff * std::norm(x)};
  const CertifiedValue r2 = x2 * t4 - detail::from_cdd(cdd(c2), 6.0 * dd_mul_err) * tqq;
  return {r1, r2};
}

// φ_k(q) = θ(q, −q^{k−1})
inline CertifiedValue phi(Parameter q, double k, double tol, const Limits& lim = {}) {
  if (q.value() < 0.0) fail(ErrorKind::domain, "phi is defined for q > 0");
  if (!(k >= 0.5)) fail(ErrorKind::domain, "phi needs k >= 1/2");
  if (q.is_zero()) return exact(1.0);
  const double x = -std::pow(q.value(), k - 1.0);
  return theta_value_at(q, cdd(complex(x)), 2.0 * unit_roundoff, tol, lim);
}

// ν(q) = Σ (−1)^k q^{k²/2}, summed directly.
inline CertifiedValue nu_series(Parameter q, double tol) {
  if (q.value() < 0.0) fail(ErrorKind::domain, "nu is defined for q > 0");
  if (q.is_zero()) return exact(1.0);
  const double lq = std::log(q.value());
  dd s(0.0);
  double err = 0.0;
  for (int k = 0;; ++k) {
    const double e = 0.5 * k * k;
    const double term = std::exp(e * lq);
    const double next = std::exp(0.5 * (k + 1) * (k + 1) * lq);
    s = s + dd((k % 2 == 0) ? term : -term);
    err += 4.0 * unit_roundoff * term;
    if (next <= tol) {
      err += next;  // alternating with decreasing magnitude
      break;
    }
  }
  return {s.to_double(), err + unit_roundoff * std::fabs(s.to_double())};
}

// Membership in the open regions bounded by the spiral contours, with a
// strict margin of 1e-6.
inline constexpr double katsnelson_margin = 1e-6;

inline bool inside_katsnelson_a(complex x) {
  const double r = std::abs(x);
  if (r < 1.0) return std::abs(x - 1.0) > katsnelson_margin;
  const double t = std::log(r);
  if (t >= std::numbers::pi - katsnelson_margin) return false;
  return std::fabs(std::arg(x)) > t + katsnelson_margin;
}

inline bool inside_katsnelson_b(complex x) { return inside_katsnelson_a(-x * x); }

inline complex katsnelson_limit(Case c, complex x) {
  if (c == Case::A) return 1.0 / (1.0 - x);
  return (1.0 - x) / (1.0 + x * x);
}

inline double katsnelson_residual(Parameter q, complex x, double tol = 1e-14) {
  const Case c = q.regime();
  const bool inside = c == Case::A ? inside_katsnelson_a(x) : inside_katsnelson_b(x);
  if (!inside) fail(ErrorKind::contour_membership, "x lies outside the convergence contour");
  Limits lim;
  lim.q_max = 0.9999;
  const CertifiedValue v = theta_value(q, x, tol, Route::automatic, lim);
  return std::abs(v.value - katsnelson_limit(c, x));
}

}  // namespace ptheta
