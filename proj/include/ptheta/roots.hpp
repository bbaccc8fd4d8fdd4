#pragma once

// Real and complex zeros of θ(q,·): sign-change scanning with safeguarded
// Newton refinement, argument-principle counting along region boundaries,
// and simultaneous polynomial iteration on the truncated series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ptheta/certified.hpp"
#include "ptheta/dd.hpp"
#include "ptheta/errors.hpp"
#include "ptheta/evaluate.hpp"
#include "ptheta/region.hpp"
#include "ptheta/series.hpp"

namespace ptheta {

enum class ZeroKind { real, complex_pair };

inline const char* to_string(ZeroKind k) noexcept { return k == ZeroKind::real ? "real" : "complex_pair"; }

struct ZeroRecord {
  double q = 0.0;
  complex x{0.0, 0.0};
  ZeroKind kind = ZeroKind::real;
  std::optional<int> index;
  int multiplicity = 1;
  double residual = 0.0;  // |θ(q,x)| at the stored location
  double err = 0.0;       // evaluation bound plus the effect of rounding x to binary64
};

// Evaluates θ(q,·), or its degree-N truncation when a degree is given.
class ThetaEvaluator {
 public:
  explicit ThetaEvaluator(Parameter q, Limits lim = {}, std::optional<std::int64_t> degree = std::nullopt,
                          double eval_tol = 1e-18)
      : q_(q), lim_(lim), degree_(degree), eval_tol_(eval_tol) {
    if (!degree_) require_certifiable(q_, lim_);
  }

  Parameter q() const { return q_; }
  const std::optional<std::int64_t>& degree() const { return degree_; }

  CertifiedValue value(complex x) const {
    if (degree_) return theta_truncated(q_, x, *degree_);
    return theta_value(q_, x, eval_tol_, Route::automatic, lim_);
  }

  // Value with θ_x; θ_q is left at zero for the truncated polynomial.
  Jet jet(complex x) const {
    if (degree_) {
      Jet j;
      j.f = theta_truncated(q_, x, *degree_);
      j.fx = theta_truncated(q_, x, *degree_, 1).value;
      j.fq = 0.0;
      return j;
    }
    return theta_jet(q_, x, eval_tol_, lim_);
  }

  // Bound on the change of θ caused by rounding x to binary64.
  static double location_err(const Jet& j, complex x) { return std::abs(j.fx) * std::abs(x) * 2.0 * unit_roundoff; }

 private:
  Parameter q_;
  Limits lim_;
  std::optional<std::int64_t> degree_;
  double eval_tol_;
};

// ---------------------------------------------------------------------------
// Argument-principle counting

struct ContourReport {
  int count = 0;
  double winding_raw = 0.0;  // total change of argument over 2π
  std::size_t samples = 0;
  double min_abs = std::numeric_limits<double>::infinity();
};

namespace detail {

class ArgumentTracker {
 public:
  ArgumentTracker(const ThetaEvaluator& ev, double tol) : ev_(ev), tol_(tol) {}

  complex sample(complex z) {
    const CertifiedValue v = ev_.value(z);
    ++report_.samples;
    const double m = std::abs(v.value);
    report_.min_abs = std::min(report_.min_abs, m);
    bool close = m <= 4.0 * v.err;
    if (!close && m <= tol_) {
      // Small value: estimate the distance to the nearest zero by |θ|/|θ_x|.
      const double slope = std::abs(ev_.jet(z).fx);
      close = slope > 0.0 && m / slope <= 10.0 * tol_;
    }
    if (close) {
      std::ostringstream os;
      os << "|theta| = " << m << " (err " << v.err << ") at contour point " << z.real() << (z.imag() < 0 ? "" : "+")
         << z.imag() << "i";
      fail(ErrorKind::contour_too_close, os.str());
    }
    return v.value;
  }

  void walk(const BoundaryPiece& piece) {
    const double len = piece_length(piece);
    const int n = static_cast<int>(std::clamp(len * 4.0, 32.0, 4096.0));
    double sa = 0.0;
    complex fa = sample(piece_point(piece, 0.0));
    for (int i = 1; i <= n; ++i) {
      const double sb = static_cast<double>(i) / n;
      const complex fb = sample(piece_point(piece, sb));
      refine(piece, sa, fa, sb, fb, 0);
      sa = sb;
      fa = fb;
    }
  }

  ContourReport finish() {
    report_.winding_raw = total_ / (2.0 * std::numbers::pi);
    report_.count = static_cast<int>(std::lround(report_.winding_raw));
    if (std::fabs(report_.winding_raw - report_.count) > 0.05) {
      fail(ErrorKind::contour_too_close, "winding number did not settle near an integer");
    }
    return report_;
  }

 private:
  void refine(const BoundaryPiece& piece, double sa, complex fa, double sb, complex fb, int depth) {
    const double darg = std::arg(fb / fa);
    if (std::fabs(darg) < std::numbers::pi / 2 && std::abs(fb - fa) < std::min(std::abs(fa), std::abs(fb))) {
      total_ += darg;
      return;
    }
    if (depth > 48) fail(ErrorKind::contour_too_close, "argument tracking did not resolve along the contour");
    const double sm = 0.5 * (sa + sb);
    const complex fm = sample(piece_point(piece, sm));
    refine(piece, sa, fa, sm, fm, depth + 1);
    refine(piece, sm, fm, sb, fb, depth + 1);
  }

  const ThetaEvaluator& ev_;
  double tol_;
  double total_ = 0.0;
  ContourReport report_;
};

}  // namespace detail

inline ContourReport zero_count_report(const ThetaEvaluator& ev, const Region& region, double tol) {
  detail::ArgumentTracker tracker(ev, tol);
  for (const auto& piece : region.boundary()) tracker.walk(piece);
  return tracker.finish();
}

inline int zero_count(Parameter q, const Region& region, double tol, const Limits& lim = {}) {
  require_tolerance(tol);
  return zero_count_report(ThetaEvaluator(q, lim), region, tol).count;
}

// ---------------------------------------------------------------------------
// Index conventions

// Case A: θ(q,−q^{−n}) > 0 for every integer n, and the pair (ξ_{2k−1}, ξ_{2k})
// lives in (−q^{−2k}, −q^{−2k+2}); θ_x > 0 at the right member.
inline std::optional<int> case_a_index(double q, double x, double theta_x) {
  if (!(q > 0.0) || !(x < 0.0)) return std::nullopt;
  const double span = 2.0 * std::log(1.0 / q);
  const double t = std::log(-x) / span;
  if (!(t > 0.0) || !std::isfinite(t)) return std::nullopt;
  // ξ_{2k} hugs the left end −q^{−2k} of its interval; a zero within rounding
  // of an anchor belongs to the interval on whose left end it sits.
  const double n = std::round(t);
  const int k = std::fabs(t - n) < 1e-12 && n >= 1.0 ? static_cast<int>(n) : static_cast<int>(std::floor(t)) + 1;
  return theta_x >= 0.0 ? 2 * k - 1 : 2 * k;
}

// Case B nearest-anchor rule: index j with −1/q^j closest in log|x| among
// anchors of matching sign (odd j positive, even j negative).
inline int case_b_anchor_index(double q, double x) {
  const double lr = std::log(1.0 / std::fabs(q));
  const double t = std::log(std::fabs(x)) / lr;
  const int parity = x > 0.0 ? 1 : 0;
  int best = parity == 1 ? 1 : 2;
  double best_d = std::numeric_limits<double>::infinity();
  const int lo = std::max(1, static_cast<int>(std::floor(t)) - 3);
  for (int j = lo; j <= lo + 8; ++j) {
    if (j % 2 != parity) continue;
    const double d = std::fabs(t - j);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

// Case B interval rule: θ(q,−q^{−2s}) > 0 and θ(q,−q^{−2s−1}) < 0, so the
// pairs (x_{4l−2}, x_{4l}) sit in (−|q|^{−4l}, −|q|^{−4l+2}), the pairs
// (x_{4l+3}, x_{4l+5}) in (|q|^{−4l−3}, |q|^{−4l−5}), and x_1 in (1, 1/|q|).
inline std::optional<int> case_b_interval_index(double q, double x, double theta_x) {
  const double lr = std::log(1.0 / std::fabs(q));
  const double t = std::log(std::fabs(x)) / lr;
  if (!std::isfinite(t) || t <= 0.0) return std::nullopt;
  if (x > 0.0) {
    if (t < 1.0) return 1;
    const int s = static_cast<int>(std::floor((t - 1.0) / 2.0));  // x in (|q|^{-(2s+1)}, |q|^{-(2s+3)})
    if (s % 2 == 0) return std::nullopt;
    const int l = (s - 1) / 2;
    return theta_x >= 0.0 ? 4 * l + 3 : 4 * l + 5;
  }
  const int s = static_cast<int>(std::floor(t / 2.0));  // x in (−|q|^{−2s−2}, −|q|^{−2s})
  if (s % 2 == 0) return std::nullopt;
  const int l = (s + 1) / 2;
  return theta_x >= 0.0 ? 4 * l - 2 : 4 * l;
}

// Nearest-anchor rule for |q| <= 0.5, the interval rule beyond.
inline constexpr double case_b_anchor_threshold = 0.5;

inline void assign_case_b_indices(double q, std::vector<ZeroRecord>& zeros, const std::vector<double>& slopes) {
  if (!(q < 0.0)) fail(ErrorKind::domain, "case-B indices need q < 0");
  if (std::fabs(q) <= case_b_anchor_threshold) {
    std::vector<int> taken;
    for (auto& z : zeros) {
      if (z.kind != ZeroKind::real) continue;
      const int j = case_b_anchor_index(q, z.x.real());
      if (std::find(taken.begin(), taken.end(), j) != taken.end()) {
        fail(ErrorKind::ambiguity, "anchor " + std::to_string(j) + " claims two zeros");
      }
      taken.push_back(j);
      z.index = j;
    }
    return;
  }
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (zeros[i].kind != ZeroKind::real) continue;
    // Zeros hugging an anchor can round onto the wrong side of an interval
    // edge; the nearest anchor is unambiguous there.
    const double x = zeros[i].x.real();
    zeros[i].index = case_b_interval_index(q, x, i < slopes.size() ? slopes[i] : 0.0).value_or(case_b_anchor_index(q, x));
  }
}

inline std::vector<ZeroRecord> assign_case_b_indices(double q, std::vector<ZeroRecord> zeros, const Limits& lim = {}) {
  std::vector<double> slopes;
  for (const auto& z : zeros) slopes.push_back(theta_derivative(q, z.x.real(), 1, 0, 1e-18, lim).real());
  assign_case_b_indices(q, zeros, slopes);
  return zeros;
}

// ---------------------------------------------------------------------------
// Real zeros

namespace detail {

inline std::vector<double> scan_nodes(double q_abs, double lo, double hi) {
  const double ratio = std::clamp(std::pow(q_abs, -1.0 / 8.0), 1.0005, 1.25);
  const double reach = std::max(std::fabs(lo), std::fabs(hi));
  std::vector<double> mags;
  for (int i = 0; i <= 16; ++i) mags.push_back(i / 16.0);
  for (double m = ratio; m < reach * ratio; m *= ratio) mags.push_back(m);
  std::vector<double> nodes{lo, hi};
  for (double m : mags) {
    if (m >= lo && m <= hi) nodes.push_back(m);
    if (-m >= lo && -m <= hi) nodes.push_back(-m);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

struct NodeSample {
  double x;
  double f;
  double err;
  double fx;
};

inline NodeSample sample_real(const ThetaEvaluator& ev, double x) {
  const Jet j = ev.jet(x);
  return {x, j.f.value.real(), j.f.err, j.fx.real()};
}

inline int node_sign(const NodeSample& s) {
  if (s.f > s.err) return 1;
  if (s.f < -s.err) return -1;
  return 0;
}

inline double next_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Safeguarded Newton on a bracket [lo, hi] with a certified sign change.
inline ZeroRecord refine_bracket(const ThetaEvaluator& ev, double lo, double hi, int sign_lo, double tol) {
  double x = 0.5 * (lo + hi);
  double dx_old = hi - lo;
  double dx = dx_old;
  for (int it = 0; it < 400; ++it) {
    const Jet j = ev.jet(x);
    const double f = j.f.value.real();
    const double fx = j.fx.real();
    if (f == 0.0 || std::fabs(f) <= j.f.err) break;
    if ((f > 0.0) == (sign_lo > 0)) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi <= next_up(lo) || hi - lo <= 4.0 * unit_roundoff * std::fabs(x)) {
      // Bracket exhausted at binary64 resolution; keep the better endpoint.
      const Jet jl = ev.jet(lo);
      const Jet jh = ev.jet(hi);
      x = std::fabs(jl.f.value.real()) <= std::fabs(jh.f.value.real()) ? lo : hi;
      break;
    }
    double xn = fx != 0.0 ? x - f / fx : std::numeric_limits<double>::quiet_NaN();
    const bool newton_ok = std::isfinite(xn) && xn > lo && xn < hi && std::fabs(2.0 * f) <= std::fabs(dx_old * fx);
    dx_old = dx;
    if (newton_ok) {
      dx = xn - x;
    } else {
      xn = 0.5 * (lo + hi);
      dx = xn - x;
    }
    if (newton_ok && std::fabs(f) <= tol && std::fabs(dx) <= 4.0 * unit_roundoff * std::fabs(x)) {
      x = xn;
      break;
    }
    x = xn;
  }
  // Newton may stop well inside a wide bracket; pull the ends in around x.
  {
    const Jet j0 = ev.jet(x);
    const double fx = std::fabs(j0.fx.real());
    if (fx > 0.0) {
      const double d = 2.0 * (std::fabs(j0.f.value.real()) + j0.f.err) / fx + 4.0 * unit_roundoff * std::fabs(x);
      const double a = std::max(lo, x - d), b = std::min(hi, x + d);
      if (a > lo || b < hi) {
        const int sa = node_sign(sample_real(ev, a)), sb = node_sign(sample_real(ev, b));
        if (sa == sign_lo && sb == -sign_lo) {
          lo = a;
          hi = b;
        }
      }
    }
  }
  const Jet j = ev.jet(x);
  ZeroRecord r;
  r.q = ev.q().value();
  r.x = x;
  r.kind = ZeroKind::real;
  r.residual = std::fabs(j.f.value.real());
  r.err = j.f.err + ThetaEvaluator::location_err(j, x) + std::fabs(j.fx.real()) * (hi - lo);
  if (r.residual > tol && r.residual > 10.0 * r.err) {
    fail(ErrorKind::unresolved_bracket, "sign change near x = " + std::to_string(x) + " could not be refined");
  }
  r.multiplicity = std::fabs(j.fx.real()) <= std::sqrt(tol) ? 2 : 1;
  return r;
}

// Critical point of θ between a and b by bisection on θ_x.
inline NodeSample critical_point(const ThetaEvaluator& ev, NodeSample a, NodeSample b) {
  for (int it = 0; it < 200 && b.x > next_up(a.x); ++it) {
    const double m = 0.5 * (a.x + b.x);
    const NodeSample s = sample_real(ev, m);
    if ((s.fx > 0.0) == (a.fx > 0.0)) {
      a = s;
    } else {
      b = s;
    }
  }
  return std::fabs(a.f) < std::fabs(b.f) ? a : b;
}

}  // namespace detail

inline std::vector<ZeroRecord> real_zeros(const ThetaEvaluator& ev, double x_min, double x_max, double tol) {
  require_tolerance(tol);
  if (!(x_min < x_max)) fail(ErrorKind::domain, "real_zeros needs x_min < x_max");
  const double q = ev.q().value();
  if (q == 0.0) return {};

  const std::vector<double> nodes = detail::scan_nodes(std::fabs(q), x_min, x_max);
  std::vector<detail::NodeSample> s;
  s.reserve(nodes.size());
  for (double x : nodes) s.push_back(detail::sample_real(ev, x));

  std::vector<ZeroRecord> out;
  auto add_at_node = [&](const detail::NodeSample& n) {
    const Jet j = ev.jet(n.x);
    ZeroRecord r;
    r.q = q;
    r.x = n.x;
    r.residual = std::fabs(n.f);
    r.err = n.err + ThetaEvaluator::location_err(j, n.x);
    r.multiplicity = std::fabs(n.fx) <= std::sqrt(tol) ? 2 : 1;
    out.push_back(r);
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    const int si = detail::node_sign(s[i]);
    if (si == 0) {
      add_at_node(s[i]);
      continue;
    }
    if (i + 1 == s.size()) break;
    const int sj = detail::node_sign(s[i + 1]);
    if (sj == 0) continue;
    if (si != sj) {
      out.push_back(detail::refine_bracket(ev, s[i].x, s[i + 1].x, si, tol));
      continue;
    }
    // Same sign at both nodes: look for a dip toward zero between them.
    const bool dip = si > 0 ? (s[i].fx < 0.0 && s[i + 1].fx > 0.0) : (s[i].fx > 0.0 && s[i + 1].fx < 0.0);
    if (!dip) continue;
    const detail::NodeSample c = detail::critical_point(ev, s[i], s[i + 1]);
    const int sc = detail::node_sign(c);
    if (sc == 0) {
      add_at_node(c);
    } else if (sc != si) {
      out.push_back(detail::refine_bracket(ev, s[i].x, c.x, si, tol));
      out.push_back(detail::refine_bracket(ev, c.x, s[i + 1].x, sc, tol));
    }
  }
  std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) { return a.x.real() < b.x.real(); });

  std::vector<double> slopes;
  for (const auto& z : out) slopes.push_back(ev.jet(z.x).fx.real());
  if (q > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = case_a_index(q, out[i].x.real(), slopes[i]);
  } else {
    assign_case_b_indices(q, out, slopes);
  }
  return out;
}

inline std::vector<ZeroRecord> real_zeros(Parameter q, double x_min, double x_max, double tol, const Limits& lim = {}) {
  return real_zeros(ThetaEvaluator(q, lim), x_min, x_max, tol);
}

// ---------------------------------------------------------------------------
// Complex zeros

namespace detail {

// Roots of Σ_{j<=n} b_j y^j by Aberth–Ehrlich iteration; b_j real, b_n != 0.
class AberthSolver {
 public:
  explicit AberthSolver(std::vector<double> b) : b_(std::move(b)) {}

  std::vector<complex> solve(const std::vector<complex>& start, int max_iter = 2000) const {
    std::vector<complex> y = start;
    const std::size_t n = y.size();
    std::vector<bool> done(n, false);
    for (int it = 0; it < max_iter; ++it) {
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        all = false;
        const complex ratio = newton_ratio(y[i]);
        complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i) s += 1.0 / (y[i] - y[k]);
        }
        const complex w = ratio / (1.0 - ratio * s);
        y[i] -= w;
        if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag())) y[i] = start[i] * 1.0001;
        if (std::abs(w) <= 1e-14 * std::abs(y[i])) done[i] = true;
      }
      if (all) break;
    }
    return y;
  }

  // p(y)/p'(y), evaluated through the reversed polynomial when |y| > 1.
  complex newton_ratio(complex y) const {
    const std::size_t n = b_.size() - 1;
    if (std::abs(y) <= 1.0) {
      cdd p(dd(0.0)), dp(dd(0.0));
      const cdd yc(y);
      for (std::size_t j = n + 1; j-- > 0;) {
        dp = dp * yc + p;
        p = p * yc + cdd(dd(b_[j]));
      }
      return p.to_complex() / dp.to_complex();
    }
    // p(y) = y^n r(1/y) with r(s) = Σ b_j s^{n−j}; p/p' = y / (n − s r'(s)/r(s)).
    const cdd sc(1.0 / y);
    cdd r(dd(0.0)), dr(dd(0.0));
    for (std::size_t j = 0; j <= n; ++j) {
      dr = dr * sc + r;
      r = r * sc + cdd(dd(b_[j]));
    }
    const complex s = 1.0 / y;
    return y / (static_cast<double>(n) - s * dr.to_complex() / r.to_complex());
  }

 private:
  std::vector<double> b_;
};

}  // namespace detail

// Roots of the degree-n truncation Σ_{j<=n} q^{j(j+1)/2} x^j, located by
// simultaneous iteration in the scaled variable y = x / scale.
inline std::vector<complex> truncation_roots(double q, std::int64_t n, double scale) {
  if (q == 0.0 || n < 1) return {};
  const double lq = std::log(std::fabs(q));
  const double ls = std::log(scale);
  std::vector<double> logs(n + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (std::int64_t j = 0; j <= n; ++j) {
    logs[j] = static_cast<double>(term_exponent(j)) * lq + static_cast<double>(j) * ls;
    top = std::max(top, logs[j]);
  }
  std::vector<double> b(n + 1);
  for (std::int64_t j = 0; j <= n; ++j) {
    const double sign = (q < 0.0 && term_exponent(j) % 2 == 1) ? -1.0 : 1.0;
    b[j] = sign * std::exp(logs[j] - top);
  }
  while (b.size() > 1 && b.back() == 0.0) b.pop_back();
  const std::size_t deg = b.size() - 1;
  if (deg == 0) return {};

  std::vector<complex> start(deg);
  for (std::size_t j = 1; j <= deg; ++j) {
    const double radius = std::fabs(b[j - 1] / b[j]);
    start[j - 1] = std::polar(radius, 2.1 + 1.3 * static_cast<double>(j));
  }
  const std::vector<complex> y = detail::AberthSolver(b).solve(start);
  std::vector<complex> x;
  x.reserve(y.size());
  for (const complex& v : y) x.push_back(v * scale);
  return x;
}

// Radius beyond which the truncation polynomial's largest term exceeds 1e24,
// where double-double Horner evaluation can no longer separate its roots.
inline double desk_radius(double q_abs) { return std::exp(std::sqrt(2.0 * std::log(1e24) * std::log(1.0 / q_abs))); }

struct ComplexSearchOptions {
  std::optional<std::int64_t> truncation;  // use the degree-N polynomial instead of θ
  bool cross_check = true;
  double desk_q_cap = 0.95;
};

struct ZeroSearch {
  std::vector<ZeroRecord> zeros;  // real zeros first (ascending), then pairs by real part
  int real_count = 0;             // with multiplicity
  int pair_count = 0;             // pairs whose both members lie in the region
  int winding = -1;               // argument-principle count, -1 when not run
  std::int64_t degree = 0;
  bool coverage_incomplete = false;
  std::string region;
};

namespace detail {

inline std::optional<ZeroRecord> polish_complex(const ThetaEvaluator& ev, complex z) {
  for (int it = 0; it < 80; ++it) {
    const Jet j = ev.jet(z);
    if (j.fx == complex(0.0, 0.0)) return std::nullopt;
    const complex step = j.f.value / j.fx;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    if (std::abs(step) <= 2.0 * unit_roundoff * std::abs(z) || std::abs(j.f.value) <= j.f.err) break;
  }
  const Jet j = ev.jet(z);
  ZeroRecord r;
  r.q = ev.q().value();
  r.x = z;
  r.kind = ZeroKind::complex_pair;
  r.residual = std::abs(j.f.value);
  r.err = j.f.err + ThetaEvaluator::location_err(j, z);
  if (r.residual > 10.0 * r.err) return std::nullopt;
  return r;
}

}  // namespace detail

inline ZeroSearch complex_zeros(Parameter q, const Region& region, double tol, const ComplexSearchOptions& opt = {},
                                const Limits& lim = {}) {
  require_tolerance(tol);
  if (!opt.truncation && q.abs() > opt.desk_q_cap) {
    fail(ErrorKind::domain, "complex zero search is capped at |q| <= " + std::to_string(opt.desk_q_cap));
  }
  ZeroSearch out;
  out.region = region.describe();
  if (q.is_zero()) {
    out.winding = 0;
    return out;
  }
  const double radius = region.bounding_radius();
  const ThetaEvaluator ev(q, lim, opt.truncation);
  out.degree = opt.truncation ? *opt.truncation : truncation_order(q.abs(), radius, tol / 10.0, lim.max_order).order;
  if (out.degree > lim.max_order) fail(ErrorKind::infeasible_tolerance, "truncation degree exceeds the configured cap");

  // Real zeros come from the sign scan; the polynomial roots supply the pairs.
  for (const auto& [lo, hi] : region.real_intervals()) {
    for (auto& z : real_zeros(ev, lo, hi, tol)) {
      if (!region.contains(z.x)) continue;
      out.real_count += z.multiplicity;
      out.zeros.push_back(z);
    }
  }

  const double dedupe = 1e3 * tol;
  std::vector<ZeroRecord> pairs;
  for (const complex& guess : truncation_roots(q.value(), out.degree, std::max(radius, 1.0))) {
    if (std::abs(guess) > 1.5 * radius + 1.0) continue;
    if (std::fabs(guess.imag()) <= 1e-7 * (1.0 + std::abs(guess))) continue;
    const std::optional<ZeroRecord> r = detail::polish_complex(ev, guess);
    if (!r) continue;
    if (std::fabs(r->x.imag()) <= 1e-9 * (1.0 + std::abs(r->x))) continue;
    ZeroRecord z = *r;
    if (z.x.imag() < 0.0) z.x = std::conj(z.x);
    const double margin = std::sqrt(tol);
    if (region.boundary_distance(z.x) < margin || region.boundary_distance(std::conj(z.x)) < margin) {
      fail(ErrorKind::contour_too_close, "zero " + std::to_string(z.x.real()) + "+" + std::to_string(z.x.imag()) +
                                             "i lies within tol^(1/2) of the region boundary");
    }
    if (!region.contains(z.x) && !region.contains(std::conj(z.x))) continue;
    const bool duplicate = std::any_of(pairs.begin(), pairs.end(), [&](const ZeroRecord& p) {
      return std::abs(p.x - z.x) <= std::max(dedupe, 1e-10 * std::abs(z.x));
    });
    if (!duplicate) pairs.push_back(z);
  }
  std::sort(pairs.begin(), pairs.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    return a.x.real() != b.x.real() ? a.x.real() < b.x.real() : a.x.imag() < b.x.imag();
  });
  int inside = out.real_count;
  for (const auto& p : pairs) {
    const bool up = region.contains(p.x);
    const bool down = region.contains(std::conj(p.x));
    inside += (up ? 1 : 0) + (down ? 1 : 0);
    if (up && down) ++out.pair_count;
    out.zeros.push_back(p);
  }

  if (opt.cross_check) {
    out.winding = zero_count_report(ev, region, tol).count;
    if (out.winding != inside) {
      fail(ErrorKind::count_mismatch, "polynomial roots give " + std::to_string(inside) + " zeros in " + out.region +
                                          ", winding number gives " + std::to_string(out.winding));
    }
  }
  return out;
}

// Default search region per case: the radius-49.8 disk in case A, radius 50
// in case B, both shrunk to the desk radius when |q| is large. Case B never
// covers the full 364.2 x 132 rectangle, so its coverage is always flagged.
struct DefaultSearch {
  Region region;
  bool coverage_incomplete;
};

inline DefaultSearch default_search_region(Parameter q) {
  const double nominal = q.value() > 0.0 ? 49.8 : 50.0;
  const double r = std::min(nominal, desk_radius(q.abs()));
  return {Region::disk(0.0, r), q.value() < 0.0 || r < nominal};
}

// Complex search in the default region, retrying with slightly smaller radii
// when the contour passes too close to a zero.
inline ZeroSearch search_zeros(Parameter q, double tol, const ComplexSearchOptions& opt = {}, const Limits& lim = {}) {
  const DefaultSearch d = default_search_region(q);
  const double r0 = d.region.bounding_radius();
  for (int attempt = 0;; ++attempt) {
    const double r = r0 * (1.0 - 0.031 * attempt);
    try {
      ZeroSearch s = complex_zeros(q, Region::disk(0.0, r), tol, opt, lim);
      s.coverage_incomplete = d.coverage_incomplete || attempt > 0;
      return s;
    } catch (const NumericError& e) {
      const bool retry = e.kind() == ErrorKind::contour_too_close || e.kind() == ErrorKind::count_mismatch;
      if (!retry || attempt >= 3) throw;
    }
  }
}

// Case-B string ordering, read as two chains starting at the origin:
//   0 > q x_3 > x_2 > x_4 > q x_5 > q x_7 > x_6 > x_8 > q x_9 > ...
//   0 < x_1 < q x_2 < q x_4 < x_3 < x_5 < q x_6 < q x_8 < x_7 < ...
// Each comparison between present neighbours is decided only when the gap
// exceeds the location uncertainty of both zeros; since x_j + 1/q^j -> 0
// very fast, high-index comparisons become indeterminate in binary64.
struct StringCheck {
  int decided = 0;
  int violated = 0;
  int indeterminate = 0;
  bool holds() const { return violated == 0 && decided > 0; }
};

inline StringCheck case_b_string_check(double q, const std::vector<ZeroRecord>& zeros, int max_index = 400) {
  auto find = [&](int j) -> std::optional<double> {
    for (const auto& z : zeros) {
      if (z.kind == ZeroKind::real && z.index && *z.index == j) return z.x.real();
    }
    return std::nullopt;
  };
  struct Element {
    double v;
    double u;
  };
  auto element = [&](int j, bool scaled) -> std::optional<Element> {
    const auto x = find(j);
    if (!x) return std::nullopt;
    const double v = scaled ? q * *x : *x;
    return Element{v, 8.0 * unit_roundoff * std::fabs(v)};
  };
  StringCheck out;
  auto walk = [&](const std::vector<std::pair<int, bool>>& chain, double direction) {
    Element prev{0.0, 0.0};
    for (const auto& [j, scaled] : chain) {
      const auto e = element(j, scaled);
      if (!e) continue;
      const double gap = direction * (e->v - prev.v);
      if (gap > e->u + prev.u) {
        ++out.decided;
      } else if (-gap > e->u + prev.u) {
        ++out.violated;
      } else {
        ++out.indeterminate;
      }
      prev = *e;
    }
  };
  std::vector<std::pair<int, bool>> left, right;
  for (int k = 0; 4 * k + 5 <= max_index; ++k) {
    left.insert(left.end(), {{4 * k + 3, true}, {4 * k + 2, false}, {4 * k + 4, false}, {4 * k + 5, true}});
    if (k > 0) right.push_back({4 * k - 1, false});
    right.insert(right.end(), {{4 * k + 1, false}, {4 * k + 2, true}, {4 * k + 4, true}});
  }
  walk(left, -1.0);
  walk(right, 1.0);
  return out;
}

}  // namespace ptheta
