#pragma once

// Fundamental solution of the Dirac operator and the two integral transforms
// built from it: the Teodorescu (volume) transform and the Cauchy boundary
// transform, plus the Borel-Pompeiu residual check that ties them together.
//
// Sign convention. With psi(x) = conj(x) / (omega_n |x|^n), left and right
// D psi = delta. The boundary transform uses psi(y - x) nu(y) and reproduces
// constants inside the domain. The volume transform uses psi(x - y), which
// makes it a right inverse of D, so that
//     f = cauchy(trace f) + teodorescu(Df)
// holds with a plus sign.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "cliffkit/clifford.hpp"
#include "cliffkit/errors.hpp"
#include "cliffkit/field.hpp"
#include "cliffkit/geometry.hpp"
#include "cliffkit/mesh.hpp"
#include "cliffkit/parallel.hpp"
#include "cliffkit/quadrature.hpp"

namespace cliffkit {

enum class QuadratureKind { midpoint };

struct TransformConfig {
  // Singular split radius, in units of the mesh's largest cell diameter.
  double singular_split_radius = 3.0;
  // Offset used for trace extraction; Cauchy evaluations closer than this to
  // the boundary are reported as near-singular.
  double near_boundary_offset = 1e-3;
  QuadratureKind quadrature = QuadratureKind::midpoint;
  // Local polar rule inside the split radius.
  int radial_nodes = 16;
  int angular_nodes = 64;
  // Cauchy: integrate psi nu (g - g(x*)) and add g(x*) analytically.
  bool subtract_boundary_singularity = true;

  void validate() const {
    if (!(singular_split_radius >= 1.0)) throw InvalidArgument("TransformConfig: split radius must be >= 1 cell diameter");
    if (!(near_boundary_offset > 0.0)) throw InvalidArgument("TransformConfig: near_boundary_offset must be positive");
    if (radial_nodes < 1 || angular_nodes < 4) throw InvalidArgument("TransformConfig: too few local quadrature nodes");
  }
};

// Coefficients of psi(d) as a vector: conj(d)/(omega |d|^n) = -d/(omega |d|^n).
inline Point kernel_vector(const Point& d, int n) {
  const double r = length(d);
  const double s = -1.0 / (unit_sphere_area(n) * std::pow(r, n));
  return s * d;
}

inline Multivector fundamental_solution(const Point& x, int n) {
  if (n != 2 && n != 3) throw InvalidArgument("fundamental_solution: dimension must be 2 or 3");
  if (length(x) == 0.0) throw Singularity("fundamental_solution: x = 0");
  return embed_vector(coords(kernel_vector(x, n), n));
}

// Any dimension n >= 1 for points given as coordinate spans.
inline Multivector fundamental_solution(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n) throw InvalidArgument("fundamental_solution: point dimension mismatch");
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (r2 == 0.0) throw Singularity("fundamental_solution: x = 0");
  Multivector v = mv_conj(embed_vector(x));
  return v / (unit_sphere_area(n) * std::pow(std::sqrt(r2), n));
}

inline CliffordField fundamental_solution_field(int n) {
  return CliffordField::closed_form(n, [n](const Point& x) { return fundamental_solution(x, n); });
}

namespace detail {

// Angular breakpoints in [0, 2 pi) where the clipped radial limit
// min(R, exit(theta)) stops being smooth.
inline std::vector<double> angular_breakpoints(const Domain& dom, const Point& x, double R) {
  constexpr int kScan = 512;
  const double two_pi = 2.0 * std::numbers::pi;
  if (dom.tag == DomainTag::disk) {
    // |x - c + R u| = radius  <=>  cos(angle(u, x - c)) = (radius^2 - d^2 - R^2) / (2 R d)
    const Point xc = x - dom.center;
    const double d = length(xc);
    if (d == 0.0) return {};
    const double cs = (dom.radius * dom.radius - d * d - R * R) / (2.0 * R * d);
    if (!(cs > -1.0 && cs < 1.0)) return {};
    const double base = std::atan2(xc[1], xc[0]);
    const double half = std::acos(cs);
    std::vector<double> out;
    for (double t : {base - half, base + half}) out.push_back(t - two_pi * std::floor(t / two_pi));
    std::sort(out.begin(), out.end());
    return out;
  }
  auto g = [&](double t) { return dom.exit_distance(x, Point{std::cos(t), std::sin(t), 0.0}) - R; };
  std::vector<double> out;
  double t0 = 0.0, g0 = g(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double t1 = two_pi * i / kScan;
    const double g1 = g(t1);
    if ((g0 < 0) != (g1 < 0)) {
      double a = t0, b = t1, ga = g0;
      for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm < 0) == (ga < 0)) { a = m; ga = gm; } else { b = m; }
      }
      out.push_back(0.5 * (a + b));
    }
    t0 = t1;
    g0 = g1;
  }
  if (dom.tag == DomainTag::box) {
    for (int c = 0; c < 4; ++c) {
      Point corner{c & 1 ? dom.hi[0] : dom.lo[0], c & 2 ? dom.hi[1] : dom.lo[1], 0.0};
      const Point d = corner - x;
      if (length(d) < R) {
        double t = std::atan2(d[1], d[0]);
        if (t < 0) t += two_pi;
        out.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// zeta f(x) = int_Omega psi(x - y) f(y) dy.
//
// The kernel is split with a smooth partition of unity of radius R around x.
// The outer part (smooth, vanishing to all orders at x) is summed with the
// mesh's midpoint rule on cached cell samples. The inner part is integrated
// in local polar/spherical coordinates centred at x, where the radial
// Jacobian r^{n-1} cancels the kernel's r^{1-n}; the radial limit is clipped
// to the domain, so f must be evaluable at arbitrary interior points.
class TeodorescuTransform {
 public:
  TeodorescuTransform(std::shared_ptr<const VolumeMesh> mesh, const CliffordField& f, TransformConfig cfg = {})
      : mesh_(std::move(mesh)), field_(f), cfg_(cfg) {
    cfg_.validate();
    if (!field_.has_evaluator()) throw InvalidArgument("teodorescu: field must be evaluable off the mesh nodes");
    const int n = mesh_->dim();
    omega_ = unit_sphere_area(n);
    radius_ = cfg_.singular_split_radius * mesh_->max_diameter();
    radial_ = gauss_legendre(cfg_.radial_nodes, 0.0, 1.0);
    auto centers = mesh_->centers();
    if (field_.has_samples() && field_.nodes() == centers) {
      samples_ = field_.samples();
    } else {
      samples_.resize(centers.size());
      parallel_for(centers.size(), [&](std::size_t i) { samples_[i] = field_(centers[i]); });
    }
    if (!samples_.empty()) algebra_dim_ = samples_.front().dim();
    if (n == 3) {
      polar_ = gauss_legendre(std::max(4, cfg_.angular_nodes / 2), -1.0, 1.0);
    }
  }

  TeodorescuTransform(const VolumeMesh& mesh, const CliffordField& f, TransformConfig cfg = {})
      : TeodorescuTransform(std::make_shared<const VolumeMesh>(mesh), f, cfg) {}

  double split_radius() const { return radius_; }
  const VolumeMesh& mesh() const { return *mesh_; }

  Multivector operator()(const Point& x) const {
    const Domain& dom = mesh_->domain;
    if (!dom.contains(x)) throw OutOfDomain("teodorescu: evaluation point outside the domain");
    Multivector acc(algebra_dim_);
    far_part(x, acc);
    if (dom.dim == 2) near_part_2d(x, acc);
    else near_part_3d(x, acc);
    return acc;
  }

 private:
  void far_part(const Point& x, Multivector& acc) const {
    const int n = mesh_->dim();
    const auto& cells = mesh_->cells;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Point d = cells[i].center - x;
      const double r = length(d);
      const double s = r >= radius_ ? 1.0 : smooth_step(r / radius_);
      if (s == 0.0) continue;
      // psi(x - y) = (y - x) / (omega r^n)
      const double w = s * cells[i].weight / (omega_ * std::pow(r, n));
      accumulate_vector_left(coords(d, n), samples_[i], w, acc);
    }
  }

  // int_0^rho chi(r/R) f(x + r u) dr
  Multivector radial_integral(const Point& x, const Point& u, double rho) const {
    Multivector line(algebra_dim_);
    for (std::size_t q = 0; q < radial_.nodes.size(); ++q) {
      const double r = rho * radial_.nodes[q];
      const double chi = 1.0 - smooth_step(r / radius_);
      if (chi == 0.0) continue;
      line.add_scaled(field_(x + r * u), chi * rho * radial_.weights[q]);
    }
    return line;
  }

  void near_part_2d(const Point& x, Multivector& acc) const {
    const Domain& dom = mesh_->domain;
    const double two_pi = 2.0 * std::numbers::pi;
    const int m = cfg_.angular_nodes;
    auto add_direction = [&](double t, double w) {
      const Point u{std::cos(t), std::sin(t), 0.0};
      const double rho = std::min(radius_, dom.exit_distance(x, u));
      if (rho <= 0.0) return;
      Multivector line = radial_integral(x, u, rho);
      accumulate_vector_left(coords(u, 2), line, w / omega_, acc);
    };
    std::vector<double> breaks =
        dom.distance_to_boundary(x) >= radius_ ? std::vector<double>{} : detail::angular_breakpoints(dom, x, radius_);
    if (breaks.empty()) {
      // Periodic smooth integrand: trapezoid rule.
      for (int j = 0; j < m; ++j) add_direction(two_pi * j / m, two_pi / m);
      return;
    }
    for (std::size_t b = 0; b < breaks.size(); ++b) {
      const double a = breaks[b];
      const double e = b + 1 < breaks.size() ? breaks[b + 1] : breaks.front() + two_pi;
      if (e - a <= 0.0) continue;
      // Fixed count per arc: a length-proportional count would jump as x
      // moves and make the result non-smooth in x.
      const int nodes = std::max(4, m / static_cast<int>(breaks.size()));
      const QuadratureRule rule = gauss_legendre(nodes, a, e);
      for (int j = 0; j < nodes; ++j) add_direction(rule.nodes[j], rule.weights[j]);
    }
  }

  void near_part_3d(const Point& x, Multivector& acc) const {
    const Domain& dom = mesh_->domain;
    const double two_pi = 2.0 * std::numbers::pi;
    const int m = cfg_.angular_nodes;
    for (std::size_t i = 0; i < polar_.nodes.size(); ++i) {
      const double c = polar_.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < m; ++j) {
        const double ph = two_pi * (j + 0.5) / m;
        const Point u{s * std::cos(ph), s * std::sin(ph), c};
        const double rho = std::min(radius_, dom.exit_distance(x, u));
        if (rho <= 0.0) continue;
        Multivector line = radial_integral(x, u, rho);
        accumulate_vector_left(coords(u, 3), line, polar_.weights[i] * (two_pi / m) / omega_, acc);
      }
    }
  }

  std::shared_ptr<const VolumeMesh> mesh_;
  CliffordField field_;
  TransformConfig cfg_;
  std::vector<Multivector> samples_;
  int algebra_dim_ = 2;
  double omega_ = 0.0;
  double radius_ = 0.0;
  QuadratureRule radial_;
  QuadratureRule polar_;
};

// xi g(x) = int_dOmega psi(y - x) nu(y) g(y) dsigma_y for x off the boundary.
//
// With singularity subtraction the constant c = g(x*) (x* the nearest
// boundary point) is pulled out: xi c = c inside, 0 outside, exactly, and
// only psi nu (g - c) is summed. This keeps evaluations near the boundary
// bounded; it changes nothing in exact arithmetic.
class CauchyTransform {
 public:
  CauchyTransform(std::shared_ptr<const BoundaryMesh> mesh, const CliffordField& g, TransformConfig cfg = {})
      : mesh_(std::move(mesh)), field_(g), cfg_(cfg) {
    cfg_.validate();
    omega_ = unit_sphere_area(mesh_->dim());
    samples_ = field_.sample_at(mesh_->centers());
    if (!samples_.empty()) algebra_dim_ = samples_.front().dim();
  }

  CauchyTransform(const BoundaryMesh& mesh, const CliffordField& g, TransformConfig cfg = {})
      : CauchyTransform(std::make_shared<const BoundaryMesh>(mesh), g, cfg) {}

  const BoundaryMesh& mesh() const { return *mesh_; }

  bool near_singular(const Point& x) const {
    return mesh_->domain.distance_to_boundary(x) < cfg_.near_boundary_offset;
  }

  Multivector operator()(const Point& x) const {
    const Domain& dom = mesh_->domain;
    const double sd = dom.signed_distance(x);
    if (std::abs(sd) <= 1e-14 * dom.diameter())
      throw OnBoundary("cauchy: evaluation point lies on the boundary");
    const bool inside = sd < 0.0;
    const int n = dom.dim;

    Multivector c(algebra_dim_);
    if (cfg_.subtract_boundary_singularity) {
      if (field_.has_evaluator()) {
        c = field_(dom.nearest_boundary_point(x));
      } else {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mesh_->panels.size(); ++i) {
          const double d = distance(mesh_->panels[i].center, x);
          if (d < bd) { bd = d; best = i; }
        }
        c = samples_[best];
      }
    }

    Multivector acc(algebra_dim_);
    Multivector tmp(algebra_dim_);
    Multivector diff(algebra_dim_);
    for (std::size_t i = 0; i < mesh_->panels.size(); ++i) {
      const Panel& p = mesh_->panels[i];
      diff = samples_[i];
      diff -= c;
      if (diff.is_zero()) continue;
      const Point k = kernel_vector(p.center - x, n);
      std::fill(tmp.coeffs().begin(), tmp.coeffs().end(), 0.0);
      accumulate_vector_left(coords(p.normal, n), diff, 1.0, tmp);
      accumulate_vector_left(coords(k, n), tmp, p.area, acc);
    }
    if (inside) acc += c;
    return acc;
  }

 private:
  std::shared_ptr<const BoundaryMesh> mesh_;
  CliffordField field_;
  TransformConfig cfg_;
  std::vector<Multivector> samples_;
  int algebra_dim_ = 2;
  double omega_ = 0.0;
};

inline Multivector teodorescu(const CliffordField& f, const VolumeMesh& vmesh, const Point& x,
                              const TransformConfig& cfg = {}) {
  return TeodorescuTransform(vmesh, f, cfg)(x);
}

inline Multivector cauchy(const CliffordField& g, const BoundaryMesh& bmesh, const Point& x,
                          const TransformConfig& cfg = {}) {
  return CauchyTransform(bmesh, g, cfg)(x);
}

inline CliffordField as_field(std::shared_ptr<const TeodorescuTransform> t, int dim) {
  return CliffordField::closed_form(dim, [t](const Point& x) { return (*t)(x); });
}

inline CliffordField as_field(std::shared_ptr<const CauchyTransform> c, int dim) {
  return CliffordField::closed_form(dim, [c](const Point& x) { return (*c)(x); });
}

struct BorelPompeiuReport {
  std::vector<Point> points;
  std::vector<double> residuals;  // |f - xi tau f - zeta Df| per point
  double residual_max = 0.0;
  double residual_mean = 0.0;
  double field_sup = 0.0;         // max |f| over the points
  double relative_max = 0.0;      // residual_max / field_sup (field_sup = 0 -> residual_max)
};

// Per-point residual of f = xi(tau f) + zeta(Df). The trace is the direct
// restriction of f to the panel centers; Df is analytic when f provides it.
inline BorelPompeiuReport borel_pompeiu_residual(const CliffordField& f, const VolumeMesh& vmesh,
                                                 const BoundaryMesh& bmesh, std::span<const Point> points,
                                                 const TransformConfig& cfg = {}, double h = kDefaultStep) {
  const Domain& dom = vmesh.domain;
  for (const Point& x : points)
    if (!dom.contains(x) || dom.distance_to_boundary(x) < 0.1)
      throw InvalidArgument("borel_pompeiu_residual: points must be interior with distance >= 0.1");

  auto vm = std::make_shared<const VolumeMesh>(vmesh);
  auto bm = std::make_shared<const BoundaryMesh>(bmesh);
  const CauchyTransform xi(bm, restrict_to_boundary(f, bmesh), cfg);
  const TeodorescuTransform zeta(vm, dirac_field(f, dom, h, StencilPolicy::adaptive), cfg);

  BorelPompeiuReport rep;
  rep.points.assign(points.begin(), points.end());
  rep.residuals.resize(points.size());
  std::vector<double> fnorm(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Multivector fx = f(points[i]);
    Multivector r = fx - xi(points[i]);
    r -= zeta(points[i]);
    rep.residuals[i] = mv_norm(r);
    fnorm[i] = mv_norm(fx);
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.residual_max = std::max(rep.residual_max, rep.residuals[i]);
    rep.residual_mean += rep.residuals[i];
    rep.field_sup = std::max(rep.field_sup, fnorm[i]);
  }
  if (!points.empty()) rep.residual_mean /= static_cast<double>(points.size());
  rep.relative_max = rep.field_sup > 0 ? rep.residual_max / rep.field_sup : rep.residual_max;
  return rep;
}

}  // namespace cliffkit
