#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptheta/certified.hpp"
#include "ptheta/errors.hpp"

namespace ptheta {

struct SegmentPiece {
  complex from;
  complex to;
};

// Arc of the circle |x - center| = radius, traversed from angle `from`
// to angle `to` (counterclockwise when to > from).
struct ArcPiece {
  complex center;
  double radius;
  double from;
  double to;
};

using BoundaryPiece = std::variant<SegmentPiece, ArcPiece>;

inline complex piece_point(const BoundaryPiece& p, double s) {
  if (const auto* seg = std::get_if<SegmentPiece>(&p)) return seg->from + s * (seg->to - seg->from);
  const auto& arc = std::get<ArcPiece>(p);
  return arc.center + std::polar(arc.radius, arc.from + s * (arc.to - arc.from));
}

inline double piece_length(const BoundaryPiece& p) {
  if (const auto* seg = std::get_if<SegmentPiece>(&p)) return std::abs(seg->to - seg->from);
  const auto& arc = std::get<ArcPiece>(p);
  return arc.radius * std::fabs(arc.to - arc.from);
}

inline double piece_distance(const BoundaryPiece& p, complex z) {
  if (const auto* seg = std::get_if<SegmentPiece>(&p)) {
    const complex d = seg->to - seg->from;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((z - seg->from) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (seg->from + t * d));
  }
  const auto& arc = std::get<ArcPiece>(p);
  const double lo = std::min(arc.from, arc.to);
  const double hi = std::max(arc.from, arc.to);
  double ang = std::arg(z - arc.center);
  while (ang < lo) ang += 2.0 * std::numbers::pi;
  while (ang > lo + 2.0 * std::numbers::pi) ang -= 2.0 * std::numbers::pi;
  if (ang <= hi) return std::fabs(std::abs(z - arc.center) - arc.radius);
  return std::min(std::abs(z - piece_point(p, 0.0)), std::abs(z - piece_point(p, 1.0)));
}

// Closed planar regions used for zero counting and search.
class Region {
 public:
  enum class Shape { disk, rectangle, right_half_annulus, left_half_disk, left_clipped_disk };

  static Region disk(complex center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::domain, "disk radius must be positive and finite");
    Region r(Shape::disk);
    r.center_ = center;
    r.r_out_ = radius;
    return r;
  }

  static Region rectangle(double re_lo, double re_hi, double im_lo, double im_hi) {
    if (!(re_lo < re_hi && im_lo < im_hi)) fail(ErrorKind::domain, "rectangle needs positive extents");
    Region r(Shape::rectangle);
    r.re_lo_ = re_lo;
    r.re_hi_ = re_hi;
    r.im_lo_ = im_lo;
    r.im_hi_ = im_hi;
    return r;
  }

  // {Re x >= 0, r_in <= |x| <= r_out}
  static Region right_half_annulus(double r_in, double r_out) {
    if (!(0.0 < r_in && r_in < r_out)) fail(ErrorKind::domain, "half-annulus needs 0 < r_in < r_out");
    Region r(Shape::right_half_annulus);
    r.r_in_ = r_in;
    r.r_out_ = r_out;
    return r;
  }

  // {Re x <= 0, |x| <= radius}
  static Region left_half_disk(double radius) {
    if (!(radius > 0.0)) fail(ErrorKind::domain, "half-disk radius must be positive");
    Region r(Shape::left_half_disk);
    r.r_out_ = radius;
    return r;
  }

  // {Re x <= 0, |x| <= radius, |Im x| <= im_cap} with im_cap < radius
  static Region left_clipped_disk(double radius, double im_cap) {
    if (!(0.0 < im_cap && im_cap < radius)) fail(ErrorKind::domain, "clipped disk needs 0 < im_cap < radius");
    Region r(Shape::left_clipped_disk);
    r.r_out_ = radius;
    r.im_hi_ = im_cap;
    return r;
  }

  Shape shape() const { return shape_; }

  bool contains(complex z) const {
    switch (shape_) {
      case Shape::disk: return std::abs(z - center_) <= r_out_;
      case Shape::rectangle:
        return z.real() >= re_lo_ && z.real() <= re_hi_ && z.imag() >= im_lo_ && z.imag() <= im_hi_;
      case Shape::right_half_annulus: {
        const double m = std::abs(z);
        return z.real() >= 0.0 && m >= r_in_ && m <= r_out_;
      }
      case Shape::left_half_disk: return z.real() <= 0.0 && std::abs(z) <= r_out_;
      case Shape::left_clipped_disk:
        return z.real() <= 0.0 && std::abs(z) <= r_out_ && std::fabs(z.imag()) <= im_hi_;
    }
    return false;
  }

  // Counterclockwise boundary.
  std::vector<BoundaryPiece> boundary() const {
    const double pi = std::numbers::pi;
    switch (shape_) {
      case Shape::disk: return {ArcPiece{center_, r_out_, -pi, pi}};
      case Shape::rectangle: {
        const complex a(re_lo_, im_lo_), b(re_hi_, im_lo_), c(re_hi_, im_hi_), d(re_lo_, im_hi_);
        return {SegmentPiece{a, b}, SegmentPiece{b, c}, SegmentPiece{c, d}, SegmentPiece{d, a}};
      }
      case Shape::right_half_annulus:
        return {ArcPiece{0.0, r_out_, -pi / 2, pi / 2}, SegmentPiece{{0.0, r_out_}, {0.0, r_in_}},
                ArcPiece{0.0, r_in_, pi / 2, -pi / 2}, SegmentPiece{{0.0, -r_in_}, {0.0, -r_out_}}};
      case Shape::left_half_disk:
        return {ArcPiece{0.0, r_out_, pi / 2, 3 * pi / 2}, SegmentPiece{{0.0, -r_out_}, {0.0, r_out_}}};
      case Shape::left_clipped_disk: {
        const double h = im_hi_;
        const double phi = std::asin(h / r_out_);
        const double xr = -r_out_ * std::cos(phi);
        return {SegmentPiece{{0.0, -h}, {0.0, h}}, SegmentPiece{{0.0, h}, {xr, h}},
                ArcPiece{0.0, r_out_, pi - phi, pi + phi}, SegmentPiece{{xr, -h}, {0.0, -h}}};
      }
    }
    return {};
  }

  double boundary_distance(complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : boundary()) d = std::min(d, piece_distance(p, z));
    return d;
  }

  // Largest modulus attained in the region.
  double bounding_radius() const {
    switch (shape_) {
      case Shape::disk: return std::abs(center_) + r_out_;
      case Shape::rectangle:
        return std::hypot(std::max(std::fabs(re_lo_), std::fabs(re_hi_)), std::max(std::fabs(im_lo_), std::fabs(im_hi_)));
      default: return r_out_;
    }
  }

  // The intersection with the real axis as closed intervals.
  std::vector<std::pair<double, double>> real_intervals() const {
    switch (shape_) {
      case Shape::disk: {
        const double h2 = r_out_ * r_out_ - center_.imag() * center_.imag();
        if (h2 < 0.0) return {};
        const double h = std::sqrt(h2);
        return {{center_.real() - h, center_.real() + h}};
      }
      case Shape::rectangle:
        if (im_lo_ > 0.0 || im_hi_ < 0.0) return {};
        return {{re_lo_, re_hi_}};
      case Shape::right_half_annulus: return {{r_in_, r_out_}};
      case Shape::left_half_disk:
      case Shape::left_clipped_disk: return {{-r_out_, 0.0}};
    }
    return {};
  }

  std::string describe() const {
    std::ostringstream os;
    switch (shape_) {
      case Shape::disk: os << "disk(center=" << center_.real() << (center_.imag() < 0 ? "" : "+") << center_.imag() << "i, radius=" << r_out_ << ")"; break;
      case Shape::rectangle: os << "rectangle([" << re_lo_ << "," << re_hi_ << "]x[" << im_lo_ << "," << im_hi_ << "])"; break;
      case Shape::right_half_annulus: os << "right_half_annulus(" << r_in_ << "," << r_out_ << ")"; break;
      case Shape::left_half_disk: os << "left_half_disk(" << r_out_ << ")"; break;
      case Shape::left_clipped_disk: os << "left_clipped_disk(" << r_out_ << ", |Im|<=" << im_hi_ << ")"; break;
    }
    return os.str();
  }

 private:
  explicit Region(Shape s) : shape_(s) {}

  Shape shape_;
  complex center_{0.0, 0.0};
  double r_in_ = 0.0;
  double r_out_ = 0.0;
  double re_lo_ = 0.0, re_hi_ = 0.0, im_lo_ = 0.0, im_hi_ = 0.0;
};

// The domain {|x| <= 3, Re x <= 0, |Im x| <= 3/sqrt(2)} that is free of zeros in case A.
inline Region zero_free_domain() { return Region::left_clipped_disk(3.0, 3.0 / std::numbers::sqrt2); }

}  // namespace ptheta
