#pragma once

// Quadrature evaluation of the Sobolev W^{k,p}, boundary Slobodeckij
// W^{lambda,p}, discrete dual W^{-1,p} (lower bound) and Hoelder C^{0,lambda}
// norms of Clifford-valued fields.
//
// Derivatives D^alpha are coordinate partials d^alpha. Reductions run in a
// fixed order (per-node partial results, then a serial sum), so values do not
// depend on the thread count.

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cliffkit/clifford.hpp"
#include "cliffkit/errors.hpp"
#include "cliffkit/field.hpp"
#include "cliffkit/mesh.hpp"
#include "cliffkit/parallel.hpp"

namespace cliffkit {

enum class NormKind { sobolev, slobodeckij, dual_lower, holder };

inline std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::sobolev: return "sobolev";
    case NormKind::slobodeckij: return "slobodeckij";
    case NormKind::dual_lower: return "dual";
    case NormKind::holder: return "holder";
  }
  return "unknown";
}

struct NormSpec {
  NormKind kind = NormKind::sobolev;
  int k = 0;
  double lambda = 0.5;
  double p = 2.0;
  double holder_exponent = 0.5;
};

struct NormReport {
  double value = 0.0;
  NormSpec spec;
  int resolution = 0;
  std::size_t nodes = 0;
  std::size_t diagonal_exclusion_count = 0;
  // Dual and Hoelder values are lower bounds of the true norm.
  bool lower_bound = false;
  // Hoelder: value = seminorm + sup_norm. Slobodeckij: value^p = lower_order + seminorm^p.
  double seminorm = 0.0;
  double sup_norm = 0.0;
  double lower_order = 0.0;
};

inline void require_exponent(double p, const char* who) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument(std::string(who) + ": p must be in (1, inf)");
}

// (sum_{|alpha| <= k} int_Omega |d^alpha f|^p dx)^{1/p} by midpoint quadrature.
// Cells whose central stencil would leave the domain use one-sided stencils;
// the choice depends only on alpha and the cell, not on k.
inline NormReport sobolev_norm(const CliffordField& f, const VolumeMesh& vmesh, int k, double p,
                               double h = kDefaultStep) {
  if (k < 0) throw InvalidArgument("sobolev_norm: k must be >= 0");
  require_exponent(p, "sobolev_norm");
  const auto alphas = multi_indices_up_to(vmesh.dim(), k);
  std::vector<double> per_cell(vmesh.size());
  parallel_for(vmesh.size(), [&](std::size_t i) {
    const Cell& c = vmesh.cells[i];
    double s = 0.0;
    for (const MultiIndex& a : alphas)
      s += std::pow(mv_norm(multi_index_derivative(f, vmesh.domain, a, c.center, h, StencilPolicy::adaptive)), p);
    per_cell[i] = s * c.weight;
  });
  double total = 0.0;
  for (double v : per_cell) total += v;
  NormReport rep;
  rep.value = std::pow(total, 1.0 / p);
  rep.spec = NormSpec{NormKind::sobolev, k, 0.0, p, 0.5};
  rep.resolution = vmesh.resolution;
  rep.nodes = vmesh.size();
  return rep;
}

// Per-cell sum_{|alpha| <= k} |d^alpha f|^p (no weights); exposed for the
// monotonicity checks.
inline std::vector<double> sobolev_integrand(const CliffordField& f, const VolumeMesh& vmesh, int k, double p,
                                             double h = kDefaultStep) {
  const auto alphas = multi_indices_up_to(vmesh.dim(), k);
  std::vector<double> out(vmesh.size());
  parallel_for(vmesh.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const MultiIndex& a : alphas)
      s += std::pow(
          mv_norm(multi_index_derivative(f, vmesh.domain, a, vmesh.cells[i].center, h, StencilPolicy::adaptive)), p);
    out[i] = s;
  });
  return out;
}

// Outward normal field extended off the boundary: radial for disk/ball,
// nearest-face normal for the box.
inline Point extended_normal(const Domain& dom, const Point& x) {
  if (dom.tag == DomainTag::disk) {
    Point r = x - dom.center;
    const double len = length(r);
    return len > 0 ? (1.0 / len) * r : Point{1.0, 0.0, 0.0};
  }
  int axis = 0;
  double best = std::numeric_limits<double>::infinity();
  double sign = 1.0;
  for (int i = 0; i < dom.dim; ++i) {
    const double dl = std::abs(x[i] - dom.lo[i]), dh = std::abs(dom.hi[i] - x[i]);
    if (dl < best) { best = dl; axis = i; sign = -1.0; }
    if (dh < best) { best = dh; axis = i; sign = 1.0; }
  }
  Point nrm{};
  nrm[axis] = sign;
  return nrm;
}

// Tangential partial (P grad g)_j with P = I - nu nu^T, using central
// differences of the ambient closed-form extension of g.
inline CliffordField tangential_partial(const CliffordField& g, const Domain& dom, int axis, double h = kDefaultStep) {
  if (!g.has_evaluator()) throw InvalidArgument("tangential derivatives need closed-form boundary data");
  return CliffordField::closed_form(g.dim(), [g, dom, axis, h](const Point& x) {
    const Point nu = extended_normal(dom, x);
    Multivector acc;
    for (int k = 0; k < dom.dim; ++k) {
      const double proj = (k == axis ? 1.0 : 0.0) - nu[axis] * nu[k];
      if (proj == 0.0) continue;
      Point a = x, b = x;
      a[k] += h;
      b[k] -= h;
      Multivector d = g(a) - g(b);
      if (acc.empty()) acc = Multivector(d.dim());
      acc.add_scaled(d, proj / (2.0 * h));
    }
    if (acc.empty()) acc = Multivector(g(x).dim());
    return acc;
  });
}

// delta^alpha g, applying the tangential partials axis by axis.
inline CliffordField tangential_derivative(const CliffordField& g, const Domain& dom, const MultiIndex& alpha,
                                           double h = kDefaultStep) {
  CliffordField out = g;
  for (int j = 0; j < alpha.dim; ++j)
    for (int r = 0; r < alpha.orders[j]; ++r) out = tangential_partial(out, dom, j, h);
  return out;
}

namespace detail {

// sum_{i != j} |v_i - v_j|^p / |x_i - x_j|^e a_i a_j
inline double gagliardo_double_sum(const BoundaryMesh& bmesh, const std::vector<Multivector>& v, double p, double e) {
  const auto& panels = bmesh.panels;
  std::vector<double> rows(panels.size());
  parallel_for(panels.size(), [&](std::size_t i) {
    double row = 0.0;
    for (std::size_t j = 0; j < panels.size(); ++j) {
      if (j == i) continue;
      const double dist = distance(panels[i].center, panels[j].center);
      if (dist == 0.0) continue;
      row += std::pow(mv_norm(v[i] - v[j]), p) / std::pow(dist, e) * panels[j].area;
    }
    rows[i] = row * panels[i].area;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

inline double boundary_lp_sum(const BoundaryMesh& bmesh, const std::vector<Multivector>& v, double p) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += std::pow(mv_norm(v[i]), p) * bmesh.panels[i].area;
  return total;
}

}  // namespace detail

struct SlobodeckijOptions {
  // Add sum_{|alpha| <= [lambda]} int |delta^alpha g|^p even when [lambda] = 0.
  bool include_lower_order = false;
  double h = kDefaultStep;
};

// Boundary Slobodeckij norm with kernel exponent n + {lambda} p - 1 (the
// boundary has dimension n - 1). For 0 < lambda < 1 this is the pure double
// integral; for lambda > 1 the lower-order boundary L^p terms of all
// tangential derivatives up to [lambda] are added. Exact-diagonal pairs are
// excluded.
inline NormReport slobodeckij_norm(const CliffordField& g, const BoundaryMesh& bmesh, double lambda, double p,
                                   const SlobodeckijOptions& opt = {}) {
  require_exponent(p, "slobodeckij_norm");
  if (!(lambda > 0.0)) throw InvalidArgument("slobodeckij_norm: lambda must be positive");
  const double whole = std::floor(lambda);
  const double frac = lambda - whole;
  if (frac <= 1e-12 || frac >= 1.0 - 1e-12)
    throw InvalidArgument("slobodeckij_norm: lambda must not be an integer");
  const int m = static_cast<int>(whole);
  const int n = bmesh.dim();
  const double e = n + frac * p - 1.0;
  const auto centers = bmesh.centers();

  NormReport rep;
  rep.spec = NormSpec{NormKind::slobodeckij, m, lambda, p, 0.5};
  rep.resolution = bmesh.resolution;
  rep.nodes = bmesh.size();
  rep.diagonal_exclusion_count = bmesh.size();

  double lower = 0.0, semi = 0.0;
  if (m == 0) {
    const auto v = g.sample_at(centers);
    semi = detail::gagliardo_double_sum(bmesh, v, p, e);
    if (opt.include_lower_order) lower = detail::boundary_lp_sum(bmesh, v, p);
  } else {
    for (const MultiIndex& a : multi_indices_up_to(n, m)) {
      const CliffordField da = tangential_derivative(g, bmesh.domain, a, opt.h);
      const auto v = da.sample_at(centers);
      lower += detail::boundary_lp_sum(bmesh, v, p);
      if (a.total() == m) semi += detail::gagliardo_double_sum(bmesh, v, p, e);
    }
  }
  rep.lower_order = lower;
  rep.seminorm = std::pow(semi, 1.0 / p);
  rep.value = std::pow(lower + semi, 1.0 / p);
  return rep;
}

// Norm of boundary data in W^{k - 1/p, p}(dOmega) in the form used by the BVP
// estimates: lower-order terms always included.
inline NormReport trace_space_norm(const CliffordField& g, const BoundaryMesh& bmesh, int k, double p,
                                   double h = kDefaultStep) {
  if (k < 1) throw InvalidArgument("trace_space_norm: k must be >= 1");
  return slobodeckij_norm(g, bmesh, k - 1.0 / p, p, SlobodeckijOptions{true, h});
}

// Lower bound of |Df|_{W^{-1,p}} = sup_v |<Df, v>| / |v|_{W_0^{1,q}} over a
// finite family of compactly supported test fields. The pairing is computed in
// integrated-by-parts form <Df, v> = int (conj(f) Dv)_0.
inline NormReport dual_norm_lower_bound(const CliffordField& f, const VolumeMesh& vmesh, double p,
                                        const std::vector<CliffordField>& test_family, double h = kDefaultStep) {
  require_exponent(p, "dual_norm_lower_bound");
  if (test_family.empty()) throw InvalidArgument("dual_norm_lower_bound: empty test family");
  const double q = p / (p - 1.0);
  const double band = 2.0 * vmesh.max_diameter();
  const auto fvals = f.sample_at(vmesh.centers());

  double best = 0.0;
  for (const CliffordField& v : test_family) {
    for (const Cell& c : vmesh.cells)
      if (vmesh.domain.distance_to_boundary(c.center) < band && !v(c.center).is_zero())
        throw InvalidArgument("dual_norm_lower_bound: test field does not vanish near the boundary");
    std::vector<double> terms(vmesh.size());
    parallel_for(vmesh.size(), [&](std::size_t i) {
      const Cell& c = vmesh.cells[i];
      terms[i] = c.weight *
                 scalar_pairing(fvals[i], dirac_apply(v, vmesh.domain, c.center, h, StencilPolicy::adaptive));
    });
    double pairing = 0.0;
    for (double t : terms) pairing += t;
    const double denom = sobolev_norm(v, vmesh, 1, q, h).value;
    if (denom > 0.0) best = std::max(best, std::abs(pairing) / denom);
  }
  NormReport rep;
  rep.value = best;
  rep.spec = NormSpec{NormKind::dual_lower, -1, 0.0, p, 0.5};
  rep.resolution = vmesh.resolution;
  rep.nodes = vmesh.size();
  rep.lower_bound = true;
  return rep;
}

// Uniform random interior points (rejection sampling in the bounding box).
inline std::vector<Point> random_interior_points(const Domain& dom, std::size_t count, std::uint64_t seed,
                                                 double min_boundary_distance = 0.0) {
  std::mt19937_64 rng(seed);
  Point lo{}, hi{};
  for (int i = 0; i < dom.dim; ++i) {
    lo[i] = dom.tag == DomainTag::disk ? dom.center[i] - dom.radius : dom.lo[i];
    hi[i] = dom.tag == DomainTag::disk ? dom.center[i] + dom.radius : dom.hi[i];
  }
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    Point p{};
    for (int i = 0; i < dom.dim; ++i) p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    if (dom.contains(p) && dom.distance_to_boundary(p) >= min_boundary_distance) out.push_back(p);
  }
  return out;
}

// Lower bound of sup_{x != y} |u(x) - u(y)| / |x - y|^lambda + sup |u| over the
// cell centers plus enough random interior points to form at least
// sample_pairs random pairs.
inline NormReport holder_norm(const CliffordField& u, const VolumeMesh& vmesh, double holder_exponent,
                              std::size_t sample_pairs = 10000, std::uint64_t seed = 42) {
  if (!(holder_exponent > 0.0 && holder_exponent <= 1.0))
    throw InvalidArgument("holder_norm: exponent must be in (0, 1]");
  std::size_t m = 0;
  while (m * (m - (m > 0 ? 1 : 0)) / 2 < sample_pairs) ++m;
  std::vector<Point> pool = vmesh.centers();
  const auto extra = random_interior_points(vmesh.domain, m, seed);
  pool.insert(pool.end(), extra.begin(), extra.end());

  std::vector<Multivector> vals(pool.size());
  parallel_for(pool.size(), [&](std::size_t i) { vals[i] = u(pool[i]); });

  std::vector<double> row_sup(pool.size(), 0.0);
  parallel_for(pool.size(), [&](std::size_t i) {
    double best = 0.0;
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const double d = distance(pool[i], pool[j]);
      if (d == 0.0) continue;
      best = std::max(best, mv_norm(vals[i] - vals[j]) / std::pow(d, holder_exponent));
    }
    row_sup[i] = best;
  });
  NormReport rep;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    rep.seminorm = std::max(rep.seminorm, row_sup[i]);
    rep.sup_norm = std::max(rep.sup_norm, mv_norm(vals[i]));
  }
  rep.value = rep.seminorm + rep.sup_norm;
  rep.spec = NormSpec{NormKind::holder, 0, 0.0, 2.0, holder_exponent};
  rep.resolution = vmesh.resolution;
  rep.nodes = pool.size();
  rep.lower_bound = true;
  return rep;
}

}  // namespace cliffkit
