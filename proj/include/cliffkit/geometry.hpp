#pragma once

// Points in R^2 / R^3 and the three model domains (disk/ball, box).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "cliffkit/errors.hpp"

namespace cliffkit {

inline constexpr int kMaxMeshDim = 3;

// Trailing coordinates beyond the ambient dimension are kept at zero.
using Point = std::array<double, kMaxMeshDim>;

inline Point operator+(Point a, const Point& b) {
  for (int i = 0; i < kMaxMeshDim; ++i) a[i] += b[i];
  return a;
}
inline Point operator-(Point a, const Point& b) {
  for (int i = 0; i < kMaxMeshDim; ++i) a[i] -= b[i];
  return a;
}
inline Point operator*(double s, Point a) {
  for (double& c : a) c *= s;
  return a;
}
inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double length(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return length(a - b); }

inline std::span<const double> coords(const Point& p, int dim) { return {p.data(), static_cast<std::size_t>(dim)}; }

enum class DomainTag { disk, box };

// A disk (n = 2) or ball (n = 3) of given center and radius, or an
// axis-aligned box [lo, hi].
struct Domain {
  DomainTag tag = DomainTag::disk;
  int dim = 2;
  Point center{};
  double radius = 1.0;
  Point lo{};
  Point hi{};

  static Domain unit_disk() { return ball(2, Point{}, 1.0); }
  static Domain unit_ball() { return ball(3, Point{}, 1.0); }

  static Domain ball(int dim, Point center, double radius) {
    if (dim != 2 && dim != 3) throw UnsupportedDomain("ball domain needs dimension 2 or 3");
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    Domain d;
    d.tag = DomainTag::disk;
    d.dim = dim;
    d.center = center;
    d.radius = radius;
    return d;
  }

  static Domain box(int dim, Point lo, Point hi) {
    if (dim != 2 && dim != 3) throw UnsupportedDomain("box domain needs dimension 2 or 3");
    for (int i = 0; i < dim; ++i)
      if (!(hi[i] > lo[i])) throw InvalidArgument("box needs hi > lo on every axis");
    Domain d;
    d.tag = DomainTag::box;
    d.dim = dim;
    d.lo = lo;
    d.hi = hi;
    return d;
  }

  static Domain unit_box(int dim) {
    Point hi{};
    for (int i = 0; i < dim; ++i) hi[i] = 1.0;
    return box(dim, Point{}, hi);
  }

  std::string name() const {
    if (tag == DomainTag::box) return "box";
    return dim == 2 ? "disk" : "ball";
  }

  Point centroid() const {
    if (tag == DomainTag::disk) return center;
    return 0.5 * (lo + hi);
  }

  double volume() const {
    if (tag == DomainTag::disk)
      return dim == 2 ? std::numbers::pi * radius * radius : 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
  }

  double boundary_measure() const {
    if (tag == DomainTag::disk)
      return dim == 2 ? 2.0 * std::numbers::pi * radius : 4.0 * std::numbers::pi * radius * radius;
    if (dim == 2) return 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
    const double a = hi[0] - lo[0], b = hi[1] - lo[1], c = hi[2] - lo[2];
    return 2.0 * (a * b + b * c + a * c);
  }

  double diameter() const {
    if (tag == DomainTag::disk) return 2.0 * radius;
    return length(hi - lo);
  }

  // Signed distance: negative inside, positive outside.
  double signed_distance(const Point& x) const {
    if (tag == DomainTag::disk) return distance(x, center) - radius;
    double outside = 0.0;
    double inside = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
      const double d = std::max(lo[i] - x[i], x[i] - hi[i]);
      inside = std::max(inside, d);
      if (d > 0) outside += d * d;
    }
    return outside > 0 ? std::sqrt(outside) : inside;
  }

  bool contains(const Point& x) const { return signed_distance(x) < 0.0; }
  double distance_to_boundary(const Point& x) const { return std::abs(signed_distance(x)); }

  Point nearest_boundary_point(const Point& x) const {
    if (tag == DomainTag::disk) {
      Point r = x - center;
      double len = length(r);
      if (len == 0.0) {
        r = Point{};
        r[0] = 1.0;
        len = 1.0;
      }
      return center + (radius / len) * r;
    }
    Point p = x;
    if (!contains(x)) {
      for (int i = 0; i < dim; ++i) p[i] = std::clamp(x[i], lo[i], hi[i]);
      return p;
    }
    int axis = 0;
    double best = std::numeric_limits<double>::infinity();
    double target = 0.0;
    for (int i = 0; i < dim; ++i) {
      if (x[i] - lo[i] < best) { best = x[i] - lo[i]; axis = i; target = lo[i]; }
      if (hi[i] - x[i] < best) { best = hi[i] - x[i]; axis = i; target = hi[i]; }
    }
    p[axis] = target;
    return p;
  }

  // Distance along unit direction u from an interior point x to the boundary.
  double exit_distance(const Point& x, const Point& u) const {
    if (tag == DomainTag::disk) {
      const Point r = x - center;
      const double b = dot(r, u);
      const double c = dot(r, r) - radius * radius;
      const double disc = std::max(0.0, b * b - c);
      return std::max(0.0, -b + std::sqrt(disc));
    }
    double t = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
      if (u[i] > 0) t = std::min(t, (hi[i] - x[i]) / u[i]);
      else if (u[i] < 0) t = std::min(t, (lo[i] - x[i]) / u[i]);
    }
    return std::max(0.0, t);
  }
};

}  // namespace cliffkit
