#pragma once

// First- and second-order elliptic boundary value problems solved through
// their integral representations:
//
//   D u = f in Omega,  tau u = g on dOmega         u = xi g + zeta f
//   -Delta u = f, tau Du = g1, tau u = g2          u = xi g2 + zeta xi g1 + zeta zeta f
//
// plus direct residual verification and empirical estimate constants.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cliffkit/clifford.hpp"
#include "cliffkit/errors.hpp"
#include "cliffkit/field.hpp"
#include "cliffkit/fields.hpp"
#include "cliffkit/mesh.hpp"
#include "cliffkit/norms.hpp"
#include "cliffkit/parallel.hpp"
#include "cliffkit/transforms.hpp"

namespace cliffkit {

enum class BvpOrder { first, second };

struct BVPSpec {
  BvpOrder order = BvpOrder::first;
  CliffordField f;
  CliffordField g;   // first order
  CliffordField g1;  // second order: trace of Du
  CliffordField g2;  // second order: trace of u
  int k = 1;
  double p = 2.0;
  Domain domain = Domain::unit_disk();
  int volume_resolution = 64;
  int boundary_resolution = 256;
  TransformConfig transform;
  // Split radius (in max cell diameters) of the outer transform in the
  // second-order formula. Its far-part quadrature error oscillates on the cell
  // scale, which the -Delta residual check amplifies by 1/h^2; a wider smooth
  // split damps it.
  double outer_split_radius = 6.0;

  void validate() const {
    if (!f.has_evaluator()) throw InvalidArgument("BVPSpec: interior data f must be closed-form");
    const int n = domain.dim;
    auto same_dim = [n](const CliffordField& c) { return c.dim() == n; };
    if (!same_dim(f)) throw InvalidArgument("BVPSpec: f dimension mismatch");
    if (order == BvpOrder::first) {
      if (!g.has_evaluator() && !g.has_samples()) throw InvalidArgument("BVPSpec: boundary data g missing");
      if (!same_dim(g)) throw InvalidArgument("BVPSpec: g dimension mismatch");
    } else {
      if (!g1.has_evaluator() || !g2.has_evaluator()) throw InvalidArgument("BVPSpec: boundary data g1/g2 missing");
      if (!same_dim(g1) || !same_dim(g2)) throw InvalidArgument("BVPSpec: g1/g2 dimension mismatch");
    }
    if (!(p > 1.0)) throw InvalidArgument("BVPSpec: p must exceed 1");
    if (k < 0) throw InvalidArgument("BVPSpec: k must be nonnegative");
  }
};

// Data for the first-order problem manufactured from a polynomial u*.
inline BVPSpec first_order_from_solution(const PolyField& u, const Domain& dom, int vres, int bres) {
  BVPSpec s;
  s.order = BvpOrder::first;
  s.f = u.dirac().field();
  s.g = u.field();
  s.domain = dom;
  s.volume_resolution = vres;
  s.boundary_resolution = bres;
  return s;
}

inline BVPSpec second_order_from_solution(const PolyField& u, const Domain& dom, int vres, int bres) {
  BVPSpec s;
  s.order = BvpOrder::second;
  s.f = u.laplacian().scaled(-1.0).field();
  s.g1 = u.dirac().field();
  s.g2 = u.field();
  s.domain = dom;
  s.volume_resolution = vres;
  s.boundary_resolution = bres;
  return s;
}

// Builds the meshes and transforms once; evaluation is then a pure function of
// the point.
class BvpSolver {
 public:
  explicit BvpSolver(BVPSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    vmesh_ = std::make_shared<const VolumeMesh>(make_volume_mesh(spec_.domain, spec_.volume_resolution));
    bmesh_ = std::make_shared<const BoundaryMesh>(make_boundary_mesh(spec_.domain, spec_.boundary_resolution));
    const int n = spec_.domain.dim;
    if (spec_.order == BvpOrder::first) {
      boundary_ = std::make_shared<const CauchyTransform>(bmesh_, spec_.g, spec_.transform);
      volume_ = std::make_shared<const TeodorescuTransform>(vmesh_, spec_.f, spec_.transform);
      return;
    }
    boundary_ = std::make_shared<const CauchyTransform>(bmesh_, spec_.g2, spec_.transform);
    // Inner fields xi g1 and zeta f, materialized on the cell centers; their
    // evaluators stay available for the outer transform's near region.
    auto xi1 = std::make_shared<const CauchyTransform>(bmesh_, spec_.g1, spec_.transform);
    auto zf = std::make_shared<const TeodorescuTransform>(vmesh_, spec_.f, spec_.transform);
    const auto centers = vmesh_->centers();
    std::vector<Multivector> inner(centers.size());
    parallel_for(centers.size(), [&](std::size_t i) { inner[i] = (*xi1)(centers[i]) + (*zf)(centers[i]); });
    for (const Point& c : centers)
      if (xi1->near_singular(c)) ++flagged_cells_;
    // zeta(xi g1) + zeta(zeta f) = zeta(xi g1 + zeta f)
    CliffordField inner_field = CliffordField::closed_form(n, [xi1, zf](const Point& x) {
      return (*xi1)(x) + (*zf)(x);
    }).with_samples(centers, std::move(inner));
    // Each outer near-part node costs a full inner evaluation; the inner field
    // is smooth, so half the nodes per direction suffice.
    TransformConfig outer = spec_.transform;
    outer.radial_nodes = std::max(4, outer.radial_nodes / 2);
    outer.angular_nodes = std::max(8, outer.angular_nodes / 2);
    outer.singular_split_radius = outer_split_radius_checked();
    volume_ = std::make_shared<const TeodorescuTransform>(vmesh_, inner_field, outer);
  }

  Multivector operator()(const Point& x) const {
    const Domain& dom = spec_.domain;
    if (!dom.contains(x)) throw OutOfDomain("BVP solution evaluated outside the domain");
    return (*boundary_)(x) + (*volume_)(x);
  }

  CliffordField field() const {
    auto self = std::make_shared<const BvpSolver>(*this);
    return CliffordField::closed_form(spec_.domain.dim, [self](const Point& x) { return (*self)(x); });
  }

  const BVPSpec& spec() const { return spec_; }
  const VolumeMesh& volume_mesh() const { return *vmesh_; }
  const BoundaryMesh& boundary_mesh() const { return *bmesh_; }
  // Cell centers whose inner Cauchy evaluation was near-singular.
  std::size_t flagged_cells() const { return flagged_cells_; }

 private:
  double outer_split_radius_checked() const {
    if (!(spec_.outer_split_radius > 0.0)) throw InvalidArgument("BVPSpec: outer_split_radius must be positive");
    return spec_.outer_split_radius;
  }

  BVPSpec spec_;
  std::shared_ptr<const VolumeMesh> vmesh_;
  std::shared_ptr<const BoundaryMesh> bmesh_;
  std::shared_ptr<const CauchyTransform> boundary_;
  std::shared_ptr<const TeodorescuTransform> volume_;
  std::size_t flagged_cells_ = 0;
};

inline Multivector solve_first_order(const BVPSpec& spec, const Point& x) {
  if (spec.order != BvpOrder::first) throw InvalidArgument("solve_first_order: spec is second order");
  return BvpSolver(spec)(x);
}

inline Multivector solve_second_order(const BVPSpec& spec, const Point& x) {
  if (spec.order != BvpOrder::second) throw InvalidArgument("solve_second_order: spec is first order");
  return BvpSolver(spec)(x);
}

struct ResidualOptions {
  double first_order_step = 1e-3;
  double second_order_step = 5e-2;
  // Every stride-th panel is used for the boundary mismatch.
  std::size_t boundary_stride = 1;
};

struct ResidualReport {
  double interior_residual = 0.0;  // max |Du - f| or |-Delta u - f|
  double boundary_mismatch = 0.0;  // max |trace(u) - g| (g2 for second order)
  double interior_data_sup = 0.0;  // max |f| over the sample points
  double boundary_data_sup = 0.0;  // max |g| over the used panels
  std::size_t sample_points = 0;
  std::size_t boundary_panels = 0;
};

// Interior residual by finite differences of the evaluated solution; boundary
// mismatch through trace_extract with the solver's near_boundary_offset.
inline ResidualReport residual_check(const BvpSolver& u, std::span<const Point> points,
                                     const ResidualOptions& opt = {}) {
  const BVPSpec& spec = u.spec();
  const Domain& dom = spec.domain;
  for (const Point& x : points)
    if (!dom.contains(x) || dom.distance_to_boundary(x) < 0.1)
      throw InvalidArgument("residual_check: sample points must be interior with distance >= 0.1");

  const CliffordField uf = CliffordField::closed_form(dom.dim, [&u](const Point& x) { return u(x); });
  ResidualReport rep;
  rep.sample_points = points.size();
  std::vector<double> res(points.size()), fs(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& x = points[i];
    const Multivector fx = spec.f(x);
    Multivector r;
    if (spec.order == BvpOrder::first) {
      Multivector du(fx.dim());
      for (int j = 0; j < dom.dim; ++j) {
        Multivector dj = partial_derivative(uf, dom, j, x, opt.first_order_step);
        Point ej{};
        ej[j] = 1.0;
        accumulate_vector_left(coords(ej, dom.dim), dj, 1.0, du);
      }
      r = du - fx;
    } else {
      r = laplacian_apply(uf, dom, x, opt.second_order_step) * -1.0 - fx;
    }
    res[i] = mv_norm(r);
    fs[i] = mv_norm(fx);
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.interior_residual = std::max(rep.interior_residual, res[i]);
    rep.interior_data_sup = std::max(rep.interior_data_sup, fs[i]);
  }

  const BoundaryMesh& bm = u.boundary_mesh();
  const CliffordField& g = spec.order == BvpOrder::first ? spec.g : spec.g2;
  const double eps = spec.transform.near_boundary_offset;
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < bm.size(); i += std::max<std::size_t>(1, opt.boundary_stride)) used.push_back(i);
  std::vector<double> mism(used.size()), gs(used.size());
  parallel_for(used.size(), [&](std::size_t k) {
    const Panel& p = bm.panels[used[k]];
    const Point a = p.center - eps * p.normal;
    const Point b = p.center - (2.0 * eps) * p.normal;
    if (!dom.contains(a) || !dom.contains(b)) throw InvalidOffset("residual_check: offset point leaves the domain");
    const Multivector trace = u(a) * 2.0 - u(b);
    const Multivector gv = g(p.center);
    mism[k] = mv_norm(trace - gv);
    gs[k] = mv_norm(gv);
  });
  for (std::size_t k = 0; k < used.size(); ++k) {
    rep.boundary_mismatch = std::max(rep.boundary_mismatch, mism[k]);
    rep.boundary_data_sup = std::max(rep.boundary_data_sup, gs[k]);
  }
  rep.boundary_panels = used.size();
  return rep;
}

struct RhsTerm {
  std::string label;
  double value = 0.0;
  double weight = 1.0;
};

struct EstimateReport {
  std::string lhs_label;
  double lhs = 0.0;
  std::vector<RhsTerm> rhs_terms;
  double empirical_constant = 0.0;
  bool skipped = false;
  std::string notice;
  std::map<std::string, double> metadata;

  double rhs_total() const {
    double s = 0.0;
    for (const RhsTerm& t : rhs_terms) s += t.weight * t.value;
    return s;
  }
};

enum class EstimateKind {
  sobolev,  // |u|_{W^{k,p}} against |g|_{W^{k-1/p,p}(dOmega)} + |f|_{W^{k-1,p}}
  holder,   // Hoelder C^{0,1/2} norm of u against the same right side at p = 2n
};

struct EstimateParams {
  EstimateKind kind = EstimateKind::sobolev;
  int k = 1;
  double p = 2.0;
  // Resolution of the mesh on which the solution's norm is evaluated; the
  // solver keeps its own meshes.
  int norm_resolution = 16;
  double holder_exponent = 0.5;
  std::size_t holder_pairs = 10000;
  std::uint64_t seed = 42;
  double h = kDefaultStep;
};

inline bool field_is_zero_on(const CliffordField& f, std::span<const Point> pts) {
  for (const Point& x : pts)
    if (!f(x).is_zero()) return false;
  return true;
}

// Per instance: lhs = norm of u; rhs = boundary norms of the data plus the
// interior norm of f; constant = lhs / rhs.
//   first order:  |g|_{W^{k-1/p,p}(dOmega)} + |f|_{W^{k-1,p}}
//   second order: |g2|_{W^{k-1/p,p}(dOmega)} + |g1|_{W^{k-1-1/p,p}(dOmega)} + |f|_{W^{k-2,p}}
//                 (the g1 term falls back to L^p(dOmega) when k = 1, the f term to L^p when k < 2)
inline EstimateReport measure_estimate_constant(const BVPSpec& raw, const EstimateParams& params) {
  BVPSpec spec = raw;
  spec.k = params.k;
  spec.p = params.p;
  EstimateReport rep;
  const VolumeMesh vmesh = make_volume_mesh(spec.domain, spec.volume_resolution);
  const BoundaryMesh bmesh = make_boundary_mesh(spec.domain, spec.boundary_resolution);
  const auto vc = vmesh.centers();
  const auto bc = bmesh.centers();
  const bool first = spec.order == BvpOrder::first;
  const bool zero_data = field_is_zero_on(spec.f, vc) &&
                         (first ? field_is_zero_on(spec.g, bc)
                                : field_is_zero_on(spec.g1, bc) && field_is_zero_on(spec.g2, bc));
  if (zero_data) {
    rep.skipped = true;
    rep.notice = "all-zero data; instance skipped";
    return rep;
  }
  const BvpSolver solver(spec);
  const CliffordField u = solver.field();
  const VolumeMesh norm_mesh = make_volume_mesh(spec.domain, params.norm_resolution);

  if (params.kind == EstimateKind::sobolev) {
    rep.lhs_label = "u in W^{k,p}(Omega)";
    rep.lhs = sobolev_norm(u, norm_mesh, params.k, params.p, params.h).value;
  } else {
    rep.lhs_label = "u in C^{0,lambda}(Omega)";
    rep.lhs = holder_norm(u, norm_mesh, params.holder_exponent, params.holder_pairs, params.seed).value;
  }
  if (first) {
    rep.rhs_terms.push_back({"g in W^{k-1/p,p}(dOmega)", trace_space_norm(spec.g, bmesh, params.k, params.p, params.h).value, 1.0});
    const double fnorm = params.k >= 1 ? sobolev_norm(spec.f, vmesh, params.k - 1, params.p, params.h).value : 0.0;
    rep.rhs_terms.push_back({"f in W^{k-1,p}(Omega)", fnorm, 1.0});
  } else {
    rep.rhs_terms.push_back({"g2 in W^{k-1/p,p}(dOmega)", trace_space_norm(spec.g2, bmesh, params.k, params.p, params.h).value, 1.0});
    if (params.k >= 2) {
      rep.rhs_terms.push_back({"g1 in W^{k-1-1/p,p}(dOmega)", trace_space_norm(spec.g1, bmesh, params.k - 1, params.p, params.h).value, 1.0});
    } else {
      const double s = detail::boundary_lp_sum(bmesh, spec.g1.sample_at(bc), params.p);
      rep.rhs_terms.push_back({"g1 in L^p(dOmega)", std::pow(s, 1.0 / params.p), 1.0});
    }
    rep.rhs_terms.push_back({"f in W^{k-2,p}(Omega)", sobolev_norm(spec.f, vmesh, std::max(0, params.k - 2), params.p, params.h).value, 1.0});
  }
  const double rhs = rep.rhs_total();
  rep.empirical_constant = rhs > 0 ? rep.lhs / rhs : std::numeric_limits<double>::infinity();
  rep.metadata["volume_resolution"] = spec.volume_resolution;
  rep.metadata["boundary_resolution"] = spec.boundary_resolution;
  rep.metadata["norm_resolution"] = params.norm_resolution;
  rep.metadata["k"] = params.k;
  rep.metadata["p"] = params.p;
  rep.metadata["flagged_cells"] = static_cast<double>(solver.flagged_cells());
  return rep;
}

inline std::vector<EstimateReport> measure_estimate_constants(const std::vector<BVPSpec>& family,
                                                              const EstimateParams& params) {
  std::vector<EstimateReport> out;
  out.reserve(family.size());
  for (const BVPSpec& spec : family) out.push_back(measure_estimate_constant(spec, params));
  return out;
}

// Seeded family of first-order problems with independent random polynomial
// data f, g (degree <= 3 per coordinate, coefficients uniform in [-1, 1]).
inline std::vector<BVPSpec> random_first_order_family(const Domain& dom, std::size_t count, std::uint64_t seed,
                                                      int vres, int bres, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::vector<BVPSpec> out;
  for (std::size_t i = 0; i < count; ++i) {
    BVPSpec s;
    s.order = BvpOrder::first;
    s.f = random_polynomial(dom.dim, 3, rng).scaled(scale).field();
    s.g = random_polynomial(dom.dim, 3, rng).scaled(scale).field();
    s.domain = dom;
    s.volume_resolution = vres;
    s.boundary_resolution = bres;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace cliffkit
