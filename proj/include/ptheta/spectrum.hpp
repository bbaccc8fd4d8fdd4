#pragma once

// Spectral values: parameters q at which θ(q,·) has a double real zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ptheta/certified.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/errors.hpp"
#include "ptheta/roots.hpp"
#include "ptheta/series.hpp"
#include "ptheta/tracking.hpp"

namespace ptheta {

enum class Character { local_min, local_max };

inline const char* to_string(Character c) noexcept { return c == Character::local_min ? "local_min" : "local_max"; }

struct SpectralPoint {
  Case which = Case::A;
  int k = 0;
  double q_star = 0.0;
  double y = 0.0;
  Character character = Character::local_min;
  double residual_theta = 0.0;
  double residual_theta_x = 0.0;
  double theta_xx = 0.0;
  int newton_iterations = 0;
};

inline constexpr int spectral_k_cap = 6;

// The pair of real zeros whose coalescence defines the k-th spectral value,
// and an interval holding both of them at a parameter value below it.
struct SpectralSeed {
  std::array<int, 2> indices;
  double lo;
  double hi;
};

inline SpectralSeed spectral_seed(Case c, int k, double q0) {
  const double r = 1.0 / std::fabs(q0);
  if (c == Case::A) return {{2 * k - 1, 2 * k}, -std::pow(r, 2 * k), -std::pow(r, 2 * k - 2)};
  if (k % 2 == 1) {
    const int l = (k + 1) / 2;
    return {{4 * l - 2, 4 * l}, -std::pow(r, 4 * l), -std::pow(r, 4 * l - 2)};
  }
  const int l = (k - 2) / 2;
  return {{4 * l + 3, 4 * l + 5}, std::pow(r, 4 * l + 3), std::pow(r, 4 * l + 5)};
}

namespace detail {

struct SystemEval {
  double f, fx, fq, fxx, fxq;
};

inline SystemEval spectral_system(double q, double y, const Limits& lim) {
  constexpr double t = 1e-20;
  return {theta_value(q, y, t, Route::automatic, lim).real(), theta_derivative(q, y, 1, 0, t, lim).real(),
          theta_derivative(q, y, 0, 1, t, lim).real(), theta_derivative(q, y, 2, 0, t, lim).real(),
          theta_derivative(q, y, 1, 1, t, lim).real()};
}

inline std::pair<ZeroRecord, ZeroRecord> seed_pair(Case c, int k, double q0, const Limits& lim) {
  const SpectralSeed s = spectral_seed(c, k, q0);
  // Both pair members sit close to anchors at the interval ends; widen the
  // scan and select by index.
  const double lo = s.lo < 0.0 ? s.lo * 1.1 : s.lo / 1.1;
  const double hi = s.hi < 0.0 ? s.hi / 1.1 : s.hi * 1.1;
  std::optional<ZeroRecord> a, b;
  for (const auto& z : real_zeros(ThetaEvaluator(q0, lim), lo, hi, 1e-13)) {
    if (z.index == s.indices[0]) a = z;
    if (z.index == s.indices[1]) b = z;
  }
  if (!a || !b) fail(ErrorKind::seed_failure, "seed zeros " + std::to_string(s.indices[0]) + "," +
                                                   std::to_string(s.indices[1]) + " not found at q = " + std::to_string(q0));
  return {*a, *b};
}

}  // namespace detail

// Damped Newton on θ = θ_x = 0 from a seed (q, y).
inline SpectralPoint solve_double_zero(Case c, int k, double q, double y, double tol, const Limits& lim = {}) {
  auto merit = [](const detail::SystemEval& e) { return e.f * e.f + e.fx * e.fx; };
  detail::SystemEval e = detail::spectral_system(q, y, lim);
  int it = 0;
  int polish = 0;
  for (; it < 80; ++it) {
    const bool converged = std::fabs(e.f) <= tol && std::fabs(e.fx) <= tol;
    if (converged && ++polish > 2) break;
    const double det = e.fq * e.fxx - e.fx * e.fxq;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dq = -(e.f * e.fxx - e.fx * e.fx) / det;
    const double dy = -(e.fq * e.fx - e.fxq * e.f) / det;
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 20; ++h, lambda *= 0.5) {
      const double qn = q + lambda * dq;
      const double yn = y + lambda * dy;
      if (!(std::fabs(qn) <= lim.q_max) || (qn > 0.0) != (q > 0.0)) continue;
      const detail::SystemEval en = detail::spectral_system(qn, yn, lim);
      if (merit(en) < merit(e) || (converged && merit(en) <= merit(e))) {
        q = qn;
        y = yn;
        e = en;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(std::fabs(e.f) <= tol && std::fabs(e.fx) <= tol)) {
    fail(ErrorKind::seed_failure, "double-zero Newton did not converge for k = " + std::to_string(k));
  }
  if (!(std::fabs(e.fxx) > 1e3 * tol)) {
    fail(ErrorKind::validation_failure, "second derivative too small at the double zero");
  }
  SpectralPoint p;
  p.which = c;
  p.k = k;
  p.q_star = q;
  p.y = y;
  p.residual_theta = std::fabs(e.f);
  p.residual_theta_x = std::fabs(e.fx);
  p.theta_xx = e.fxx;
  p.character = e.fxx > 0.0 ? Character::local_min : Character::local_max;
  p.newton_iterations = it;
  return p;
}

// Tracks the defining pair from q0 toward ±q_max until it coalesces, then
// solves for the double zero from the collision point.
inline SpectralPoint spectral_point(Case c, int k, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  if (k < 1 || k > spectral_k_cap) fail(ErrorKind::domain, "spectral index must lie in 1.." + std::to_string(spectral_k_cap));
  const double q0 = c == Case::A ? 0.25 : -0.5;
  const auto [a, b] = detail::seed_pair(c, k, q0, lim);
  TrackOptions opt;
  opt.lim = lim;
  opt.max_step = 0.02;
  const double target = c == Case::A ? lim.q_max : -lim.q_max;
  PairTrajectory t;
  try {
    t = track_pair(a, b, target, opt);
  } catch (const StepUnderflow& e) {
    fail(ErrorKind::seed_failure, std::string("pair tracking stalled before coalescing: ") + e.what());
  }
  if (!t.collision_q) fail(ErrorKind::seed_failure, "no collision before q_max for k = " + std::to_string(k));
  const double y0 = 0.5 * (t.first.points.back().real() + t.second.points.back().real());
  return solve_double_zero(c, k, *t.collision_q, y0, tol, lim);
}

inline SpectralPoint spectral_point_A(int k, double tol = 1e-12, const Limits& lim = {}) {
  return spectral_point(Case::A, k, tol, lim);
}
inline SpectralPoint spectral_point_B(int k, double tol = 1e-12, const Limits& lim = {}) {
  return spectral_point(Case::B, k, tol, lim);
}

struct OrderingReport {
  bool ordered = true;
  std::vector<std::string> violations;
};

// Within each case, |q*| must increase strictly with k.
inline OrderingReport ordering_check(std::vector<SpectralPoint> points) {
  OrderingReport r;
  std::sort(points.begin(), points.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return a.which != b.which ? a.which < b.which : a.k < b.k;
  });
  for (std::size_t i = 1; i < points.size(); ++i) {
    const SpectralPoint& p = points[i - 1];
    const SpectralPoint& n = points[i];
    if (p.which != n.which) continue;
    if (!(std::fabs(p.q_star) < std::fabs(n.q_star))) {
      r.ordered = false;
      r.violations.push_back(std::string("case ") + to_string(n.which) + ": k=" + std::to_string(p.k) + " and k=" +
                             std::to_string(n.k) + " out of order");
    }
  }
  return r;
}

// Interval of θ(q,·) containing the double zero of the case-B spectral value k.
inline std::pair<double, double> double_zero_interval(int k, double q) {
  const double r = 1.0 / std::fabs(q);
  if (k % 2 == 1) {
    const int l = (k + 1) / 2;
    return {-std::pow(r, 4 * l), -std::pow(r, 4 * l - 2)};
  }
  const int l = (k - 2) / 2;
  return {std::pow(r, 4 * l + 3), std::pow(r, 4 * l + 5)};
}

inline bool double_zero_interval_check(const SpectralPoint& p) {
  if (p.which != Case::B) fail(ErrorKind::domain, "interval membership is stated for case-B spectral values");
  const auto [lo, hi] = double_zero_interval(p.k, p.q_star);
  return lo < p.y && p.y < hi;
}

// Number of complex conjugate pairs at the midpoint between the k-th and
// (k+1)-th spectral values (between 0 and the first one when k = 0).
inline int pair_count_at(double q, double tol, const Limits& lim = {}) {
  const ZeroSearch s = search_zeros(q, tol, {}, lim);
  return static_cast<int>(std::count_if(s.zeros.begin(), s.zeros.end(),
                                        [](const ZeroRecord& z) { return z.kind == ZeroKind::complex_pair; }));
}

inline double spectral_midpoint(Case c, int k, double tol, const Limits& lim = {}) {
  const double lo = k == 0 ? 0.0 : spectral_point(c, k, tol, lim).q_star;
  const double hi = spectral_point(c, k + 1, tol, lim).q_star;
  return 0.5 * (lo + hi);
}

inline int pair_count_between(Case c, int k, double tol, const Limits& lim = {}) {
  return pair_count_at(spectral_midpoint(c, k, tol, lim), tol, lim);
}

// Signs of θ(q,−q^{−2s}) and θ(q,−q^{−2s−1}) for q < 0 at the exact anchors.
// With v = −q the leading terms cancel in pairs (j ↔ 4s−1−j, resp.
// j ↔ 4s+1−j), leaving
//   θ(q,−q^{−2s})   = Σ_{j≥4s}   (−1)^{j(j+3)/2} v^{j(j+1)/2−2sj},
//   θ(q,−q^{−2s−1}) = Σ_{j≥4s+2} (−1)^{j(j+1)/2} v^{j(j+1)/2−(2s+1)j}.
struct AnchorSigns {
  std::optional<CertifiedValue> even;  // θ(q,−q^{−2s}), s ≥ 1
  CertifiedValue odd;                  // θ(q,−q^{−2s−1})
};

namespace detail {

inline CertifiedValue reduced_anchor_series(double v, std::int64_t j0, std::int64_t shift, bool even) {
  const dd vd(v);
  auto exponent = [&](std::int64_t j) { return term_exponent(j) - shift * j; };
  auto sign = [&](std::int64_t j) {
    const std::int64_t e = even ? j * (j + 3) / 2 : j * (j + 1) / 2;
    return e % 2 == 0 ? 1.0 : -1.0;
  };
  const double lead = std::pow(v, static_cast<double>(exponent(j0)));
  dd sum(0.0);
  double err = 0.0;
  for (std::int64_t j = j0;; ++j) {
    std::int64_t weight = 0;
    const dd t = dd_pow(vd, exponent(j), &weight) * dd(sign(j));
    const double ta = std::fabs(t.hi);
    const double before = std::fabs(sum.hi);
    sum = sum + t;
    err += static_cast<double>(weight + 1) * dd_mul_err * ta + dd_add_err * (before + ta);
    const double next = std::pow(v, static_cast<double>(exponent(j + 1)));
    const double ratio = std::pow(v, static_cast<double>(j + 2 - shift));
    if (ratio <= 0.5 && next <= 1e-36 * lead) {
      err += next / (1.0 - ratio);
      break;
    }
    if (j - j0 > 200000) fail(ErrorKind::infeasible_tolerance, "anchor series did not settle");
  }
  const double value = sum.to_double();
  return {value, err * (1.0 + 1e-6) + unit_roundoff * std::fabs(value)};
}

}  // namespace detail

inline AnchorSigns anchor_values(double q, int s) {
  if (!(q < 0.0 && q > -1.0)) fail(ErrorKind::domain, "anchor signs are stated for q in (-1,0)");
  if (s < 0) fail(ErrorKind::domain, "anchor index must be nonnegative");
  const double v = -q;
  if ((2.0 * s + 1.0) * std::log(1.0 / v) > 700.0) fail(ErrorKind::domain, "anchor -q^(-2s-1) overflows binary64");
  AnchorSigns out;
  if (s >= 1) out.even = detail::reduced_anchor_series(v, 4 * s, 2 * s, true);
  out.odd = detail::reduced_anchor_series(v, 4 * s + 2, 2 * s + 1, false);
  return out;
}

struct AnchorSignPair {
  std::optional<int> even;  // sign of θ(q,−q^{−2s}) when s ≥ 1
  int odd;                  // sign of θ(q,−q^{−2s−1})
};

inline AnchorSignPair sign_at_anchor(double q, int s) {
  const AnchorSigns v = anchor_values(q, s);
  auto certified = [](const CertifiedValue& c, const char* which) {
    const int sg = c.certified_sign();
    if (sg == 0) fail(ErrorKind::indeterminate_sign, std::string("sign of theta at the ") + which + " anchor is not certified");
    return sg;
  };
  AnchorSignPair out{std::nullopt, certified(v.odd, "odd")};
  if (v.even) out.even = certified(*v.even, "even");
  return out;
}

}  // namespace ptheta
