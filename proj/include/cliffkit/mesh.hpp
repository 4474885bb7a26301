#pragma once

// One-point (midpoint) quadrature meshes for the model domains and their
// boundaries. Cell weights and panel areas are the exact measures of the
// underlying polar/spherical/Cartesian pieces, so they sum to |Omega| and
// |dOmega| up to rounding.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cliffkit/errors.hpp"
#include "cliffkit/geometry.hpp"

namespace cliffkit {

struct Cell {
  Point center{};
  double weight = 0.0;
  double diameter = 0.0;
};

struct Panel {
  Point center{};
  Point normal{};
  double area = 0.0;
  double diameter = 0.0;
};

struct VolumeMesh {
  Domain domain;
  int resolution = 0;
  std::vector<Cell> cells;

  int dim() const { return domain.dim; }
  std::size_t size() const { return cells.size(); }

  double total_weight() const {
    double s = 0.0;
    for (const Cell& c : cells) s += c.weight;
    return s;
  }

  double max_diameter() const {
    double d = 0.0;
    for (const Cell& c : cells) d = std::max(d, c.diameter);
    return d;
  }

  std::vector<Point> centers() const {
    std::vector<Point> out;
    out.reserve(cells.size());
    for (const Cell& c : cells) out.push_back(c.center);
    return out;
  }
};

struct BoundaryMesh {
  Domain domain;
  int resolution = 0;
  std::vector<Panel> panels;

  int dim() const { return domain.dim; }
  std::size_t size() const { return panels.size(); }

  double total_area() const {
    double s = 0.0;
    for (const Panel& p : panels) s += p.area;
    return s;
  }

  double max_diameter() const {
    double d = 0.0;
    for (const Panel& p : panels) d = std::max(d, p.diameter);
    return d;
  }

  std::vector<Point> centers() const {
    std::vector<Point> out;
    out.reserve(panels.size());
    for (const Panel& p : panels) out.push_back(p.center);
    return out;
  }
};

namespace detail {

inline void mesh_disk(const Domain& d, int n, VolumeMesh& m) {
  const double dr = d.radius / n;
  const double dt = 2.0 * std::numbers::pi / n;
  m.cells.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double r0 = i * dr, r1 = (i + 1) * dr, rm = 0.5 * (r0 + r1);
    const double w = 0.5 * (r1 * r1 - r0 * r0) * dt;
    const double diam = std::hypot(dr, 2.0 * r1 * std::sin(0.5 * dt));
    for (int j = 0; j < n; ++j) {
      const double t = (j + 0.5) * dt;
      Cell c;
      c.center = d.center;
      c.center[0] += rm * std::cos(t);
      c.center[1] += rm * std::sin(t);
      c.weight = w;
      c.diameter = diam;
      m.cells.push_back(c);
    }
  }
}

inline void mesh_ball(const Domain& d, int n, VolumeMesh& m) {
  const int nr = n, nt = n, np = 2 * n;
  const double dr = d.radius / nr;
  const double dt = std::numbers::pi / nt;
  const double dp = 2.0 * std::numbers::pi / np;
  m.cells.reserve(static_cast<std::size_t>(nr) * nt * np);
  for (int i = 0; i < nr; ++i) {
    const double r0 = i * dr, r1 = (i + 1) * dr, rm = 0.5 * (r0 + r1);
    const double radial = (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    for (int j = 0; j < nt; ++j) {
      const double t0 = j * dt, t1 = (j + 1) * dt, tm = 0.5 * (t0 + t1);
      const double polar = std::cos(t0) - std::cos(t1);
      const double smax = (t0 <= 0.5 * std::numbers::pi && t1 >= 0.5 * std::numbers::pi)
                              ? 1.0
                              : std::max(std::sin(t0), std::sin(t1));
      const double diam = std::sqrt(dr * dr + std::pow(r1 * dt, 2) + std::pow(r1 * smax * dp, 2));
      for (int k = 0; k < np; ++k) {
        const double p = (k + 0.5) * dp;
        Cell c;
        c.center = d.center;
        c.center[0] += rm * std::sin(tm) * std::cos(p);
        c.center[1] += rm * std::sin(tm) * std::sin(p);
        c.center[2] += rm * std::cos(tm);
        c.weight = radial * polar * dp;
        c.diameter = diam;
        m.cells.push_back(c);
      }
    }
  }
}

inline void mesh_box(const Domain& d, int n, VolumeMesh& m) {
  Point h{};
  double w = 1.0, diam2 = 0.0;
  for (int i = 0; i < d.dim; ++i) {
    h[i] = (d.hi[i] - d.lo[i]) / n;
    w *= h[i];
    diam2 += h[i] * h[i];
  }
  const int nz = d.dim == 3 ? n : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Cell c;
        c.center[0] = d.lo[0] + (i + 0.5) * h[0];
        c.center[1] = d.lo[1] + (j + 0.5) * h[1];
        if (d.dim == 3) c.center[2] = d.lo[2] + (k + 0.5) * h[2];
        c.weight = w;
        c.diameter = std::sqrt(diam2);
        m.cells.push_back(c);
      }
}

inline void panel_circle(const Domain& d, int n, BoundaryMesh& b) {
  const double dt = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    const double t = (j + 0.5) * dt;
    Panel p;
    p.normal = Point{std::cos(t), std::sin(t), 0.0};
    p.center = d.center + d.radius * p.normal;
    p.area = d.radius * dt;
    p.diameter = 2.0 * d.radius * std::sin(0.5 * dt);
    b.panels.push_back(p);
  }
}

inline void panel_sphere(const Domain& d, int n, BoundaryMesh& b) {
  const int nt = n, np = 2 * n;
  const double dt = std::numbers::pi / nt, dp = 2.0 * std::numbers::pi / np;
  const double r = d.radius;
  for (int j = 0; j < nt; ++j) {
    const double t0 = j * dt, t1 = (j + 1) * dt, tm = 0.5 * (t0 + t1);
    const double smax = (t0 <= 0.5 * std::numbers::pi && t1 >= 0.5 * std::numbers::pi)
                            ? 1.0
                            : std::max(std::sin(t0), std::sin(t1));
    for (int k = 0; k < np; ++k) {
      const double ph = (k + 0.5) * dp;
      Panel p;
      p.normal = Point{std::sin(tm) * std::cos(ph), std::sin(tm) * std::sin(ph), std::cos(tm)};
      p.center = d.center + r * p.normal;
      p.area = r * r * (std::cos(t0) - std::cos(t1)) * dp;
      p.diameter = r * std::hypot(dt, smax * dp);
      b.panels.push_back(p);
    }
  }
}

inline void panel_box(const Domain& d, int n, BoundaryMesh& b) {
  for (int axis = 0; axis < d.dim; ++axis) {
    for (int side = 0; side < 2; ++side) {
      Point normal{};
      normal[axis] = side == 0 ? -1.0 : 1.0;
      const double plane = side == 0 ? d.lo[axis] : d.hi[axis];
      // Tangential axes of this face.
      int t[2] = {-1, -1};
      int nt = 0;
      for (int i = 0; i < d.dim; ++i)
        if (i != axis) t[nt++] = i;
      const double h0 = (d.hi[t[0]] - d.lo[t[0]]) / n;
      const double h1 = nt > 1 ? (d.hi[t[1]] - d.lo[t[1]]) / n : 0.0;
      const int n1 = nt > 1 ? n : 1;
      for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n; ++i) {
          Panel p;
          p.normal = normal;
          p.center[axis] = plane;
          p.center[t[0]] = d.lo[t[0]] + (i + 0.5) * h0;
          if (nt > 1) p.center[t[1]] = d.lo[t[1]] + (j + 0.5) * h1;
          p.area = nt > 1 ? h0 * h1 : h0;
          p.diameter = std::hypot(h0, h1);
          b.panels.push_back(p);
        }
    }
  }
}

}  // namespace detail

// Disk: resolution radial x resolution angular polar cells.
// Ball: resolution radial x resolution polar x 2*resolution azimuthal cells.
// Box:  resolution^n uniform cells.
inline VolumeMesh make_volume_mesh(const Domain& domain, int resolution) {
  if (resolution < 4) throw InvalidArgument("make_volume_mesh: resolution must be >= 4");
  VolumeMesh m;
  m.domain = domain;
  m.resolution = resolution;
  if (domain.tag == DomainTag::disk && domain.dim == 2) detail::mesh_disk(domain, resolution, m);
  else if (domain.tag == DomainTag::disk && domain.dim == 3) detail::mesh_ball(domain, resolution, m);
  else if (domain.tag == DomainTag::box && (domain.dim == 2 || domain.dim == 3)) detail::mesh_box(domain, resolution, m);
  else throw UnsupportedDomain("make_volume_mesh: unsupported domain/dimension");
  return m;
}

// Circle: resolution equal-angle arcs. Sphere: resolution x 2*resolution
// latitude-longitude panels. Box: each face split into resolution^(n-1).
inline BoundaryMesh make_boundary_mesh(const Domain& domain, int resolution) {
  if (resolution < 8) throw InvalidArgument("make_boundary_mesh: resolution must be >= 8");
  BoundaryMesh b;
  b.domain = domain;
  b.resolution = resolution;
  if (domain.tag == DomainTag::disk && domain.dim == 2) detail::panel_circle(domain, resolution, b);
  else if (domain.tag == DomainTag::disk && domain.dim == 3) detail::panel_sphere(domain, resolution, b);
  else if (domain.tag == DomainTag::box && (domain.dim == 2 || domain.dim == 3)) detail::panel_box(domain, resolution, b);
  else throw UnsupportedDomain("make_boundary_mesh: unsupported domain/dimension");
  return b;
}

inline int default_volume_resolution(const Domain& d) { return d.dim == 2 ? 64 : 24; }
inline int default_boundary_resolution(const Domain& d) {
  if (d.dim == 2) return d.tag == DomainTag::box ? 64 : 256;
  return d.tag == DomainTag::box ? 24 : 24;
}

inline void write_csv(std::ostream& os, const VolumeMesh& m) {
  const char* axes[] = {"x1", "x2", "x3"};
  for (int i = 0; i < m.dim(); ++i) os << axes[i] << ',';
  os << "weight,diameter\n";
  os.precision(17);
  for (const Cell& c : m.cells) {
    for (int i = 0; i < m.dim(); ++i) os << c.center[i] << ',';
    os << c.weight << ',' << c.diameter << '\n';
  }
}

inline void write_csv(std::ostream& os, const BoundaryMesh& b) {
  const char* axes[] = {"x1", "x2", "x3"};
  const char* normals[] = {"n1", "n2", "n3"};
  for (int i = 0; i < b.dim(); ++i) os << axes[i] << ',';
  os << "area,";
  for (int i = 0; i < b.dim(); ++i) os << normals[i] << ',';
  os << "diameter\n";
  os.precision(17);
  for (const Panel& p : b.panels) {
    for (int i = 0; i < b.dim(); ++i) os << p.center[i] << ',';
    os << p.area << ',';
    for (int i = 0; i < b.dim(); ++i) os << p.normal[i] << ',';
    os << p.diameter << '\n';
  }
}

}  // namespace cliffkit
