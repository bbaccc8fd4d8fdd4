#pragma once

// Continuation of zeros of θ(q,·) in the parameter q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ptheta/certified.hpp"
#include "ptheta/errors.hpp"
#include "ptheta/evaluate.hpp"
#include "ptheta/roots.hpp"

namespace ptheta {

struct Trajectory {
  std::vector<double> q_grid;
  std::vector<complex> points;
  std::optional<double> collision_q;
  bool near_double = false;
};

struct TrackOptions {
  double max_step = 0.01;
  double min_step = 1e-13;
  double tol = 1e-12;
  int max_newton = 4;
  Limits lim{};
};

namespace detail {

struct Corrected {
  bool ok = false;
  complex x;
};

// |θ| within tolerance, or within the rounding floor set by binary64 x.
inline bool converged(const Jet& j, complex x, double tol) {
  const double floor = 10.0 * (j.f.err + ThetaEvaluator::location_err(j, x));
  return std::abs(j.f.value) <= std::max(tol, floor);
}

// Newton at fixed q from a predicted point; fails when it needs more than
// `max_newton` iterations or drifts further than `reach` from the prediction.
inline Corrected correct(double q, complex x, double reach, const TrackOptions& opt) {
  const complex start = x;
  for (int it = 0; it <= opt.max_newton; ++it) {
    const Jet j = theta_jet(q, x, 1e-18, opt.lim);
    if (converged(j, x, opt.tol) && it > 0) return {std::abs(x - start) <= reach, x};
    if (j.fx == complex(0.0, 0.0) || it == opt.max_newton) return {};
    const complex dx = j.f.value / j.fx;
    x -= dx;
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return {};
    if (std::abs(dx) <= 4.0 * unit_roundoff * std::abs(x)) {
      const Jet k = theta_jet(q, x, 1e-18, opt.lim);
      return {converged(k, x, opt.tol) && std::abs(x - start) <= reach, x};
    }
  }
  return {};
}

inline complex velocity(double q, complex x, const Limits& lim) {
  const Jet j = theta_jet(q, x, 1e-18, lim);
  return -j.fq / j.fx;
}

inline complex keep_kind(complex x, bool real) { return real ? complex(x.real(), 0.0) : x; }

}  // namespace detail

inline Trajectory track_zero(const ZeroRecord& start, double q_target, const TrackOptions& opt = {}) {
  if (start.residual > std::max(opt.tol, 10.0 * start.err)) {
    fail(ErrorKind::domain, "tracking needs a refined starting zero");
  }
  require_certifiable(q_target, opt.lim);
  const bool real = start.kind == ZeroKind::real;
  const double dir = q_target >= start.q ? 1.0 : -1.0;
  Trajectory t;
  double q = start.q;
  complex x = start.x;
  t.q_grid.push_back(q);
  t.points.push_back(x);
  double h = opt.max_step;
  while (dir * (q_target - q) > 0.0) {
    const double step = std::min(h, dir * (q_target - q));
    const double qn = q + dir * step;
    const complex dx = detail::keep_kind(detail::velocity(q, x, opt.lim) * (dir * step), real);
    const complex predicted = x + dx;
    const double reach = 0.5 * std::abs(dx) + 1e-12 * (1.0 + std::abs(x));
    const detail::Corrected c = detail::correct(qn, predicted, reach, opt);
    if (!c.ok) {
      h *= 0.5;
      if (h < opt.min_step) throw StepUnderflow(q, "continuation step underflow near q = " + std::to_string(q));
      continue;
    }
    q = qn;
    x = detail::keep_kind(c.x, real);
    t.q_grid.push_back(q);
    t.points.push_back(x);
    h = std::min(opt.max_step, 1.5 * h);
  }
  return t;
}

struct PairTrajectory {
  Trajectory first;
  Trajectory second;
  std::optional<double> collision_q;
  double closest = 0.0;  // distance between the zeros at the last common node
};

// Tracks two real zeros with a shared step until the target or until they
// coalesce. A collision is flagged when their distance falls within ten
// times the last displacement; continuation then proceeds until the step
// underflows, and the last q reached is recorded as the collision point.
inline PairTrajectory track_pair(const ZeroRecord& a, const ZeroRecord& b, double q_target, const TrackOptions& opt = {}) {
  if (a.q != b.q) fail(ErrorKind::domain, "pair tracking needs both zeros at the same q");
  for (const ZeroRecord* z : {&a, &b}) {
    if (z->residual > std::max(opt.tol, 10.0 * z->err)) fail(ErrorKind::domain, "tracking needs refined starting zeros");
  }
  require_certifiable(q_target, opt.lim);
  const double dir = q_target >= a.q ? 1.0 : -1.0;
  PairTrajectory p;
  double q = a.q;
  complex xa = a.x, xb = b.x;
  for (Trajectory* t : {&p.first, &p.second}) t->q_grid.push_back(q);
  p.first.points.push_back(xa);
  p.second.points.push_back(xb);
  p.closest = std::abs(xa - xb);
  bool flagged = false;
  double h = opt.max_step;
  while (dir * (q_target - q) > 0.0) {
    const double step = std::min(h, dir * (q_target - q));
    const double qn = q + dir * step;
    const complex da = detail::keep_kind(detail::velocity(q, xa, opt.lim) * (dir * step), true);
    const complex db = detail::keep_kind(detail::velocity(q, xb, opt.lim) * (dir * step), true);
    const double gap = std::abs(xa - xb);
    const double reach_a = std::min(0.5 * std::abs(da), 0.25 * gap) + 1e-12 * (1.0 + std::abs(xa));
    const double reach_b = std::min(0.5 * std::abs(db), 0.25 * gap) + 1e-12 * (1.0 + std::abs(xb));
    const detail::Corrected ca = detail::correct(qn, xa + da, reach_a, opt);
    const detail::Corrected cb = ca.ok ? detail::correct(qn, xb + db, reach_b, opt) : detail::Corrected{};
    const bool distinct = ca.ok && cb.ok && std::abs(ca.x - cb.x) > 4.0 * unit_roundoff * std::abs(ca.x);
    if (!distinct) {
      h *= 0.5;
      if (h < opt.min_step) {
        if (!flagged) throw StepUnderflow(q, "pair continuation step underflow near q = " + std::to_string(q));
        p.collision_q = q;
        p.first.collision_q = p.second.collision_q = q;
        p.first.near_double = p.second.near_double = true;
        return p;
      }
      continue;
    }
    const double moved = std::max(std::abs(ca.x - xa), std::abs(cb.x - xb));
    q = qn;
    xa = complex(ca.x.real(), 0.0);
    xb = complex(cb.x.real(), 0.0);
    p.first.q_grid.push_back(q);
    p.second.q_grid.push_back(q);
    p.first.points.push_back(xa);
    p.second.points.push_back(xb);
    p.closest = std::abs(xa - xb);
    if (p.closest <= 10.0 * moved) flagged = true;
    h = std::min(opt.max_step, 1.5 * h);
  }
  return p;
}

}  // namespace ptheta
