#pragma once

// Vertical lines that split the real zeros of θ(q,·) from its complex
// conjugate pairs, and a sampled probe of the b-monotonicity behind them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ptheta/certified.hpp"
#include "ptheta/errors.hpp"
#include "ptheta/roots.hpp"
#include "ptheta/spectrum.hpp"
#include "ptheta/triple_product.hpp"

namespace ptheta {

enum class LineKind { separating, left, right };

inline const char* to_string(LineKind k) noexcept {
  switch (k) {
    case LineKind::separating: return "separating";
    case LineKind::left: return "left";
    case LineKind::right: return "right";
  }
  return "unknown";
}

// The line is Re x = -a for `separating` and `left`, Re x = a for `right`.
struct SeparationResult {
  double q = 0.0;
  LineKind kind = LineKind::separating;
  double a = 0.0;
  double epsilon = 0.0;
  // Smallest signed distance from a witness to the line, positive when the
  // witness is on its prescribed side. Degenerate lines are not validated and
  // may carry a negative margin.
  double margin = 0.0;
  bool degenerate = false;
  bool coverage_incomplete = false;
  std::vector<ZeroRecord> left;
  std::vector<ZeroRecord> right;

  double line() const { return kind == LineKind::right ? a : -a; }
};

inline constexpr double separating_bound_A = 5.0;
inline constexpr double left_bound_B = 2.4;
inline constexpr double right_bound_B = 3.2;

namespace detail {

inline double first_spectral_A() {
  static const double v = spectral_point_A(1).q_star;
  return v;
}

inline double spectral_B(int k) {
  static const double v1 = spectral_point_B(1).q_star;
  static const double v2 = spectral_point_B(2).q_star;
  return k == 1 ? v1 : v2;
}

// epsilon is half the gap to the nearest zero on the other side, capped so
// that the line never crosses the guaranteed bound.
inline double half_gap(double gap, double room) { return 0.5 * std::min(gap, room); }

inline void split_and_validate(SeparationResult& r, const std::vector<ZeroRecord>& zeros,
                               bool (*goes_left)(const ZeroRecord&, const std::vector<ZeroRecord>&)) {
  const double line = r.line();
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& z : zeros) {
    const bool want_left = goes_left(z, zeros);
    const double d = want_left ? line - z.x.real() : z.x.real() - line;
    if (!r.degenerate && !(d > 0.0)) {
      fail(ErrorKind::validation_failure, std::string(to_string(r.kind)) + " line at Re x = " + std::to_string(line) +
                                              " puts zero " + std::to_string(z.x.real()) + " on the wrong side");
    }
    r.margin = std::min(r.margin, d);
    (want_left ? r.left : r.right).push_back(z);
  }
}

inline std::vector<double> positive_reals(const std::vector<ZeroRecord>& zeros) {
  std::vector<double> p;
  for (const auto& z : zeros) {
    if (z.kind == ZeroKind::real && z.x.real() > 0.0) p.push_back(z.x.real());
  }
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace detail

inline SeparationResult separating_line_A(Parameter q, double tol = 1e-12, const ComplexSearchOptions& opt = {},
                                          const Limits& lim = {}) {
  if (!(q.value() > 0.0)) fail(ErrorKind::domain, "separating_line_A needs q in (0, q_max)");
  require_certifiable(q, lim);
  SeparationResult r;
  r.q = q.value();
  r.kind = LineKind::separating;
  const ZeroSearch s = search_zeros(q, tol, opt, lim);
  r.coverage_incomplete = s.coverage_incomplete;
  const auto rule = [](const ZeroRecord& z, const std::vector<ZeroRecord>&) { return z.kind == ZeroKind::real; };

  if (q.value() <= detail::first_spectral_A()) {
    r.degenerate = true;
    r.a = separating_bound_A;
    detail::split_and_validate(r, s.zeros, rule);
    return r;
  }

  std::optional<double> xi;
  std::optional<int> xi_index;
  double pair_min = std::numeric_limits<double>::infinity();
  for (const auto& z : s.zeros) {
    if (z.kind == ZeroKind::real) {
      if (!xi || z.x.real() > *xi) {
        xi = z.x.real();
        xi_index = z.index;
      }
    } else {
      pair_min = std::min(pair_min, z.x.real());
    }
  }
  const int k = s.pair_count;
  if (!xi) fail(ErrorKind::validation_failure, "no real zero found in the search disk");
  if (k == 0) fail(ErrorKind::validation_failure, "no complex pair found above the first spectral value");
  if (xi_index != 2 * k + 1) {
    fail(ErrorKind::validation_failure, "rightmost real zero has index " + std::to_string(xi_index.value_or(-1)) +
                                            ", expected " + std::to_string(2 * k + 1));
  }
  const double room = -*xi - separating_bound_A;
  if (!(room > 0.0)) fail(ErrorKind::validation_failure, "rightmost real zero lies to the right of -5");
  r.epsilon = detail::half_gap(pair_min - *xi, room);
  r.a = -*xi - r.epsilon;
  detail::split_and_validate(r, s.zeros, rule);
  return r;
}

inline SeparationResult left_separating_line_B(Parameter q, double tol = 1e-12, const ComplexSearchOptions& opt = {},
                                               const Limits& lim = {}) {
  if (!(q.value() < 0.0)) fail(ErrorKind::domain, "left_separating_line_B needs q in (-q_max, 0)");
  require_certifiable(q, lim);
  SeparationResult r;
  r.q = q.value();
  r.kind = LineKind::left;
  const ZeroSearch s = search_zeros(q, tol, opt, lim);
  r.coverage_incomplete = s.coverage_incomplete;
  const auto rule = [](const ZeroRecord& z, const std::vector<ZeroRecord>&) {
    return z.kind == ZeroKind::real && z.x.real() < 0.0;
  };

  if (q.value() >= detail::spectral_B(1)) {
    r.degenerate = true;
    r.a = left_bound_B;
    detail::split_and_validate(r, s.zeros, rule);
    return r;
  }

  std::optional<double> xi;
  double others_min = std::numeric_limits<double>::infinity();
  for (const auto& z : s.zeros) {
    if (rule(z, s.zeros)) {
      xi = std::max(xi.value_or(-std::numeric_limits<double>::infinity()), z.x.real());
    } else {
      others_min = std::min(others_min, z.x.real());
    }
  }
  if (!xi) fail(ErrorKind::validation_failure, "no negative real zero found in the search disk");
  const double room = -*xi - left_bound_B;
  if (!(room > 0.0)) fail(ErrorKind::validation_failure, "a negative zero lies to the right of -2.4");
  r.epsilon = detail::half_gap(others_min - *xi, room);
  r.a = -*xi - r.epsilon;
  detail::split_and_validate(r, s.zeros, rule);
  return r;
}

inline SeparationResult right_separating_line_B(Parameter q, double tol = 1e-12, const ComplexSearchOptions& opt = {},
                                                const Limits& lim = {}) {
  if (!(q.value() < 0.0)) fail(ErrorKind::domain, "right_separating_line_B needs q in (-q_max, 0)");
  require_certifiable(q, lim);
  SeparationResult r;
  r.q = q.value();
  r.kind = LineKind::right;
  const ZeroSearch s = search_zeros(q, tol, opt, lim);
  r.coverage_incomplete = s.coverage_incomplete;
  const auto rule = [](const ZeroRecord& z, const std::vector<ZeroRecord>& all) {
    if (z.kind == ZeroKind::complex_pair || z.x.real() < 0.0) return true;
    const std::vector<double> p = detail::positive_reals(all);
    return z.x.real() == p.front();
  };

  const std::vector<double> pos = detail::positive_reals(s.zeros);
  if (q.value() >= detail::spectral_B(2)) {
    r.degenerate = true;
    r.a = right_bound_B;
    detail::split_and_validate(r, s.zeros, rule);
    return r;
  }

  if (pos.size() < 2) fail(ErrorKind::validation_failure, "fewer than two positive real zeros in the search disk");
  double left_max = pos.front();
  for (const auto& z : s.zeros) {
    if (z.kind == ZeroKind::complex_pair) left_max = std::max(left_max, z.x.real());
  }
  const double second = pos[1];
  const double room = second - right_bound_B;
  if (!(room > 0.0)) fail(ErrorKind::validation_failure, "second positive zero lies to the left of 3.2");
  r.epsilon = detail::half_gap(second - left_max, room);
  r.a = second - r.epsilon;
  detail::split_and_validate(r, s.zeros, rule);
  return r;
}

// ---------------------------------------------------------------------------
// Monotonicity in b

enum class ProbeCase { A, B_left, B_right };

inline const char* to_string(ProbeCase c) noexcept {
  switch (c) {
    case ProbeCase::A: return "A";
    case ProbeCase::B_left: return "B_left";
    case ProbeCase::B_right: return "B_right";
  }
  return "unknown";
}

enum class ProbeStatus { holds, violated, indeterminate };

inline const char* to_string(ProbeStatus s) noexcept {
  switch (s) {
    case ProbeStatus::holds: return "holds";
    case ProbeStatus::violated: return "violated";
    case ProbeStatus::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct MonotonicityViolation {
  std::string quantity;  // "theta_star" or "majorant"
  double b0 = 0.0;
  double b1 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;
};

struct MonotonicityReport {
  ProbeCase which = ProbeCase::A;
  double q = 0.0;
  double a = 0.0;
  ProbeStatus theta_star = ProbeStatus::holds;
  ProbeStatus majorant = ProbeStatus::holds;
  std::vector<double> b;
  std::vector<double> theta_star_abs;
  std::vector<double> majorant_values;
  std::vector<MonotonicityViolation> violations;

  bool holds() const { return theta_star == ProbeStatus::holds && majorant == ProbeStatus::holds; }
};

namespace detail {

// Terms g_i = q^{i(i-1)/2} x^{-i} of G, i >= 1, until they stop mattering.
inline std::vector<complex> g_terms(double q, complex x) {
  std::vector<complex> g;
  const complex w = 1.0 / x;
  complex t = w;
  double qi = q;  // q^i
  double total = 0.0;
  for (int i = 1; i <= 4000; ++i) {
    g.push_back(t);
    total += std::abs(t);
    if (i >= 8 && i % 4 == 0 && std::abs(t) <= 1e-22 * total) break;
    t *= qi * w;
    qi *= q;
  }
  while (g.size() % 4 != 0) g.push_back(0.0);
  return g;
}

struct Majorant {
  double value = 0.0;
  double err = 0.0;
};

inline Majorant g_majorant(ProbeCase c, double q, complex x) {
  const std::vector<complex> g = g_terms(q, x);
  double m = 0.0;
  auto group = [&](std::size_t from, std::size_t count) {
    complex s = 0.0;
    for (std::size_t i = from; i < from + count && i < g.size(); ++i) s += g[i];
    m += std::abs(s);
  };
  switch (c) {
    case ProbeCase::A:
      for (std::size_t i = 0; i < g.size(); i += 2) group(i, 2);
      break;
    case ProbeCase::B_left:
      group(0, 8);
      for (std::size_t i = 8; i < g.size(); i += 4) group(i, 4);
      break;
    case ProbeCase::B_right:
      for (std::size_t i = 0; i < g.size(); i += 4) group(i, 4);
      m /= std::norm(x);
      break;
  }
  return {m, 16.0 * unit_roundoff * static_cast<double>(g.size()) * m};
}

inline ProbeStatus worse(ProbeStatus a, ProbeStatus b) {
  if (a == ProbeStatus::violated || b == ProbeStatus::violated) return ProbeStatus::violated;
  if (a == ProbeStatus::indeterminate || b == ProbeStatus::indeterminate) return ProbeStatus::indeterminate;
  return ProbeStatus::holds;
}

}  // namespace detail

// Samples |Θ*| (divided by |x|² for the right line) and the grouped
// G-majorant along x = ∓a + bi. The first must increase and the second
// decrease strictly; a step is decided only when the change exceeds the
// combined error bounds of its endpoints.
inline MonotonicityReport monotonicity_in_b_probe(ProbeCase c, Parameter q, double a, const std::vector<double>& b_grid,
                                                  const Limits& lim = {}) {
  require_certifiable(q, lim);
  const double qv = q.value();
  switch (c) {
    case ProbeCase::A:
      if (!(qv >= 0.3) || !(a >= separating_bound_A)) fail(ErrorKind::domain, "case A probe needs q >= 0.3 and a >= 5");
      break;
    case ProbeCase::B_left:
      if (!(qv < 0.0) || !(a >= left_bound_B)) fail(ErrorKind::domain, "left probe needs q < 0 and a >= 2.4");
      break;
    case ProbeCase::B_right:
      if (!(qv <= -0.75) || !(a >= right_bound_B)) fail(ErrorKind::domain, "right probe needs q <= -0.75 and a >= 3.2");
      break;
  }
  if (b_grid.size() < 2) fail(ErrorKind::domain, "b grid needs at least two points");
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (!(b_grid[i] >= 0.0) || (i > 0 && !(b_grid[i] > b_grid[i - 1]))) {
      fail(ErrorKind::domain, "b grid must be non-negative and strictly increasing");
    }
  }

  MonotonicityReport r;
  r.which = c;
  r.q = qv;
  r.a = a;
  r.b = b_grid;
  std::vector<double> ts_err, mj_err;
  for (double b : b_grid) {
    const complex x(c == ProbeCase::B_right ? a : -a, b);
    const CertifiedValue ts = jacobi_theta_star(q, x, 1e-18, lim);
    const double scale = c == ProbeCase::B_right ? std::norm(x) : 1.0;
    r.theta_star_abs.push_back(ts.magnitude() / scale);
    ts_err.push_back(ts.err / scale);
    const detail::Majorant m = detail::g_majorant(c, qv, x);
    r.majorant_values.push_back(m.value);
    mj_err.push_back(m.err);
  }

  auto judge = [&](const std::vector<double>& v, const std::vector<double>& e, double sign, const char* name) {
    ProbeStatus st = ProbeStatus::holds;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double d = sign * (v[i] - v[i - 1]);
      const double slack = e[i] + e[i - 1];
      if (d > slack) continue;
      if (d < -slack || (d <= 0.0 && slack == 0.0)) {
        st = ProbeStatus::violated;
        r.violations.push_back({name, b_grid[i - 1], b_grid[i], v[i - 1], v[i]});
      } else {
        st = detail::worse(st, ProbeStatus::indeterminate);
      }
    }
    return st;
  };
  r.theta_star = judge(r.theta_star_abs, ts_err, 1.0, "theta_star");
  r.majorant = judge(r.majorant_values, mj_err, -1.0, "majorant");
  return r;
}

}  // namespace ptheta
