#pragma once

// Route selection between the direct series and the triple-product form,
// plus the value-and-slope bundle used by Newton iterations and continuation.

#include <cmath>
#include <complex>

#include "ptheta/certified.hpp"
#include "ptheta/series.hpp"
#include "ptheta/triple_product.hpp"

namespace ptheta {

enum class Route { automatic, series, product };

inline const char* to_string(Route r) noexcept {
  switch (r) {
    case Route::automatic: return "auto";
    case Route::series: return "series";
    case Route::product: return "product";
  }
  return "auto";
}

// The series is preferred while its largest term stays below this size;
// beyond it cancellation costs more digits than the product route.
inline constexpr double series_max_term_log = 13.8;  // ln(1e6)

inline Route choose_route(Parameter q, complex x) {
  const double xa = std::abs(x);
  if (q.is_zero() || xa <= 1.0) return Route::series;
  return detail::log_max_term(q.abs(), xa, 0, 0) <= series_max_term_log ? Route::series : Route::product;
}

inline CertifiedValue theta_value(Parameter q, complex x, double tol, Route route = Route::automatic,
                                  const Limits& lim = {}) {
  if (route == Route::automatic) route = choose_route(q, x);
  if (route == Route::series) return theta_certified(q, x, tol, lim);
  return theta_via_triple_product(q, x, tol, lim).difference;
}

struct Jet {
  CertifiedValue f;
  complex fx;
  complex fq;
};

inline Jet theta_jet(Parameter q, complex x, double tol, const Limits& lim = {}) {
  const Route route = choose_route(q, x);
  Jet jet;
  jet.f = theta_value(q, x, tol, route, lim);
  if (route == Route::series) {
    jet.fx = theta_derivative(q, x, 1, 0, tol, lim).value;
    jet.fq = theta_derivative(q, x, 0, 1, tol, lim).value;
  } else {
    const ProductDerivatives d = product_derivatives(q, x, tol, lim);
    jet.fx = d.theta_x;
    jet.fq = d.theta_q;
  }
  return jet;
}

// θ at a point z that is itself only known to relative accuracy z_rel.
// The series route propagates the error term by term; the product route
// adds a first-order bound with a safety factor of two.
inline CertifiedValue theta_value_at(Parameter q, const cdd& z, double z_rel, double tol, const Limits& lim = {}) {
  require_certifiable(q, lim);
  const complex zc = z.to_complex();
  if (q.is_zero() || zc == complex(0.0, 0.0)) return exact(1.0);
  if (choose_route(q, zc) == Route::series) return theta_series(dd(q.value()), 0.0, z, z_rel, tol, lim);
  Jet jet = theta_jet(q, zc, tol, lim);
  const double dz = (z_rel + 2.0 * unit_roundoff) * abs(z);
  jet.f.err += 2.0 * std::abs(jet.fx) * dz;
  return jet.f;
}

}  // namespace ptheta
