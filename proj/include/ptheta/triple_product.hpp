#pragma once

// The bilateral series Θ* through its product form, the negative-index tail
// G, and their difference θ = Θ* − G. The product route stays accurate for
// large |x| where the one-sided series suffers heavy cancellation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "ptheta/certified.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/series.hpp"

namespace ptheta {

struct TripleProductParts {
  CertifiedValue theta_star;
  CertifiedValue g_tail;
  CertifiedValue difference;
};

struct ProductOrder {
  std::int64_t factors = 1;
  double rel = 0.0;
};

// Smallest M for which the omitted factors perturb the product by a
// relative amount <= tol.
inline ProductOrder product_order(double q_abs, double x_abs, double tol, std::int64_t cap = 100000) {
  require_tolerance(tol);
  const double c = (1.0 + x_abs + 1.0 / x_abs) / (1.0 - q_abs);
  if (q_abs == 0.0) return {1, 0.0};
  double qp = q_abs * q_abs;  // q^{M+1} for M = 1
  for (std::int64_t m = 1; m <= cap; ++m) {
    const double delta = qp * c;
    const double rel = std::expm1(delta * std::exp(delta));
    if (rel <= tol) return {m, rel};
    qp *= q_abs;
  }
  fail(ErrorKind::infeasible_tolerance, "triple product would need more than " + std::to_string(cap) + " factors");
}

namespace detail {

struct TrackedCdd {
  cdd v;
  double err = 0.0;
};

inline TrackedCdd mul(const TrackedCdd& a, const TrackedCdd& b) {
  const double aa = abs(a.v);
  const double ba = abs(b.v);
  return {a.v * b.v, aa * b.err + ba * a.err + a.err * b.err + cdd_mul_err * aa * ba};
}

}  // namespace detail

inline CertifiedValue jacobi_theta_star(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  require_certifiable(q, lim);
  if (x == complex(0.0, 0.0)) fail(ErrorKind::zero_divide, "jacobi_theta_star is undefined at x = 0");

  const double xa = std::abs(x);
  const ProductOrder po = product_order(q.abs(), xa, tol, lim.max_order);
  const cdd xc(x);
  const cdd w = inverse(xc);
  const double wa = abs(w);
  const dd one(1.0);

  detail::TrackedCdd p{cdd(one) + w, cdd_inv_err * wa + cdd_add_err * (1.0 + wa)};
  const dd qd(q.value());
  dd qm = qd;
  double qm_rel = 0.0;
  for (std::int64_t m = 1; m <= po.factors; ++m) {
    const double qma = abs(qm);
    const detail::TrackedCdd a{cdd(one - qm), qm_rel * qma + dd_add_err * (1.0 + qma)};
    const cdd xq = xc * qm;
    const double xqa = abs(xq);
    const detail::TrackedCdd b{cdd(one) + xq, (qm_rel + cdd_mul_err) * xqa + cdd_add_err * (1.0 + xqa)};
    const cdd wq = w * qm;
    const double wqa = abs(wq);
    const detail::TrackedCdd c{cdd(one) + wq, (qm_rel + cdd_inv_err + cdd_mul_err) * wqa + cdd_add_err * (1.0 + wqa)};
    p = detail::mul(p, detail::mul(a, detail::mul(b, c)));
    qm = qm * qd;
    qm_rel += dd_mul_err;
  }
  const complex v = p.v.to_complex();
  const double trunc = po.rel * (std::abs(v) + p.err);
  return {v, p.err * (1.0 + 1e-6) + trunc + 2.0 * unit_roundoff * std::abs(v)};
}

inline CertifiedValue g_tail(Parameter q, complex x, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  require_certifiable(q, lim);
  if (x == complex(0.0, 0.0)) fail(ErrorKind::zero_divide, "G is undefined at x = 0");
  const cdd w = inverse(cdd(x));
  const double wa = abs(w);
  if (q.is_zero()) {
    const complex v = w.to_complex();
    return {v, cdd_inv_err * wa + unit_roundoff * std::abs(v)};
  }
  // G = w θ(q, w) with w = 1/x.
  const CertifiedValue t = theta_series(dd(q.value()), 0.0, w, cdd_inv_err, tol / wa, lim);
  const cdd tw = cdd(t.value) * w;
  const complex v = tw.to_complex();
  const double ta = std::abs(t.value);
  const double err = wa * t.err + (cdd_inv_err + cdd_mul_err) * wa * ta + 2.0 * unit_roundoff * std::abs(v);
  return {v, err};
}

inline TripleProductParts theta_via_triple_product(Parameter q, complex x, double tol, const Limits& lim = {}) {
  TripleProductParts parts;
  parts.theta_star = jacobi_theta_star(q, x, tol, lim);
  parts.g_tail = g_tail(q, x, tol, lim);
  parts.difference = parts.theta_star - parts.g_tail;
  return parts;
}

// Approximate first derivatives of θ through the product route, carried by
// forward-mode propagation through every factor.
struct ProductDerivatives {
  complex theta_x;
  complex theta_q;
};

inline ProductDerivatives product_derivatives(Parameter q, complex x, double tol, const Limits& lim = {}) {
  const double qv = q.value();
  const ProductOrder po = product_order(q.abs(), std::abs(x), tol, lim.max_order);
  const complex w = 1.0 / x;

  // (P, dP/dx, dP/dq)
  complex p = 1.0 + w;
  complex px = -w * w;
  complex pq = 0.0;
  double qm1 = 1.0;  // q^{m-1}
  for (std::int64_t m = 1; m <= po.factors; ++m) {
    const double qm = qm1 * qv;
    const double md = static_cast<double>(m);
    const complex f = (1.0 - qm) * (1.0 + x * qm) * (1.0 + w * qm);
    const complex fa = 1.0 - qm;
    const complex fb = 1.0 + x * qm;
    const complex fc = 1.0 + w * qm;
    const complex fx = fa * (qm * fc + fb * (-w * w * qm));
    const complex fq = -md * qm1 * fb * fc + fa * (x * md * qm1) * fc + fa * fb * (w * md * qm1);
    px = px * f + p * fx;
    pq = pq * f + p * fq;
    p = p * f;
    qm1 = qm;
  }

  // G = sum_{k>=0} q^{e_k} w^{k+1}
  complex gw = 0.0;  // dG/dw
  complex gq = 0.0;
  complex wk = 1.0;  // w^k
  for (std::int64_t k = 0; k < lim.max_order; ++k) {
    const double e = static_cast<double>(term_exponent(k));
    const double c = std::pow(qv, e);
    const complex tw = static_cast<double>(k + 1) * c * wk;
    const complex tq = (k == 0) ? complex(0.0) : e * std::pow(qv, e - 1.0) * wk * w;
    gw += tw;
    gq += tq;
    if (std::abs(tw) + std::abs(tq) < 1e-19 * (std::abs(gw) + std::abs(gq)) && std::pow(q.abs(), k + 1) * std::abs(w) < 0.5) {
      break;
    }
    if (c == 0.0 && k > 0) break;
    wk *= w;
  }
  const complex gx = -w * w * gw;
  return {px - gx, pq - gq};
}

}  // namespace ptheta
