#pragma once

// Clifford-valued fields and the differential/restriction operators acting
// on them: left/right Dirac derivative, multi-index partials, Laplacian and
// the boundary trace.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cliffkit/clifford.hpp"
#include "cliffkit/errors.hpp"
#include "cliffkit/geometry.hpp"
#include "cliffkit/mesh.hpp"

namespace cliffkit {

inline constexpr double kDefaultStep = 1e-3;

// A Multivector-valued function on (a neighbourhood of) a domain. It carries a
// closed-form evaluator, a table of samples at fixed nodes, or both. When both
// are present the samples are a cache of the evaluator on those nodes.
class CliffordField {
 public:
  using Evaluator = std::function<Multivector(const Point&)>;

  CliffordField() = default;

  static CliffordField closed_form(int dim, Evaluator f, Evaluator dirac = {}, Evaluator right_dirac = {}) {
    if (!f) throw InvalidArgument("CliffordField: empty evaluator");
    CliffordField out;
    out.dim_ = dim;
    out.eval_ = std::move(f);
    out.dirac_ = std::move(dirac);
    out.right_dirac_ = std::move(right_dirac);
    return out;
  }

  static CliffordField sampled(int dim, std::vector<Point> nodes, std::vector<Multivector> values) {
    CliffordField out;
    out.dim_ = dim;
    out.set_samples(std::move(nodes), std::move(values));
    return out;
  }

  static CliffordField constant(const Multivector& c, int space_dim) {
    return closed_form(space_dim, [c](const Point&) { return c; },
                       [c](const Point&) { return Multivector(c.dim()); },
                       [c](const Point&) { return Multivector(c.dim()); });
  }

  // Same evaluator, plus a cache of its values at the given nodes.
  CliffordField with_samples(std::vector<Point> nodes, std::vector<Multivector> values) const {
    CliffordField out = *this;
    out.set_samples(std::move(nodes), std::move(values));
    return out;
  }

  int dim() const { return dim_; }
  bool has_evaluator() const { return static_cast<bool>(eval_); }
  bool has_samples() const { return samples_ != nullptr; }
  bool has_dirac() const { return static_cast<bool>(dirac_); }
  bool has_right_dirac() const { return static_cast<bool>(right_dirac_); }

  Multivector operator()(const Point& x) const {
    if (eval_) return eval_(x);
    if (samples_) {
      for (std::size_t i = 0; i < samples_->nodes.size(); ++i)
        if (samples_->nodes[i] == x) return samples_->values[i];
    }
    throw InvalidArgument("CliffordField: no evaluator and point is not a sample node");
  }

  Multivector analytic_dirac(const Point& x) const { return dirac_(x); }
  Multivector analytic_right_dirac(const Point& x) const { return right_dirac_(x); }

  const std::vector<Point>& nodes() const { return samples_->nodes; }
  const std::vector<Multivector>& samples() const { return samples_->values; }

  // Values at the given points; reuses the sample cache when the nodes match.
  std::vector<Multivector> sample_at(std::span<const Point> pts) const {
    if (samples_ && samples_->nodes.size() == pts.size() &&
        std::equal(pts.begin(), pts.end(), samples_->nodes.begin()))
      return samples_->values;
    if (!eval_) throw InvalidArgument("CliffordField: sampled field queried at foreign nodes");
    std::vector<Multivector> out;
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back(eval_(p));
    return out;
  }

  CliffordField scaled(double c) const {
    CliffordField out;
    out.dim_ = dim_;
    if (eval_) out.eval_ = [f = eval_, c](const Point& x) { return f(x) * c; };
    if (dirac_) out.dirac_ = [f = dirac_, c](const Point& x) { return f(x) * c; };
    if (right_dirac_) out.right_dirac_ = [f = right_dirac_, c](const Point& x) { return f(x) * c; };
    if (samples_) {
      auto vals = samples_->values;
      for (auto& v : vals) v *= c;
      out.set_samples(samples_->nodes, std::move(vals));
    }
    return out;
  }

  friend CliffordField operator+(const CliffordField& a, const CliffordField& b) {
    if (a.dim_ != b.dim_) throw InvalidArgument("CliffordField: dimension mismatch");
    CliffordField out;
    out.dim_ = a.dim_;
    if (a.eval_ && b.eval_) out.eval_ = [f = a.eval_, g = b.eval_](const Point& x) { return f(x) + g(x); };
    if (a.dirac_ && b.dirac_) out.dirac_ = [f = a.dirac_, g = b.dirac_](const Point& x) { return f(x) + g(x); };
    if (a.right_dirac_ && b.right_dirac_)
      out.right_dirac_ = [f = a.right_dirac_, g = b.right_dirac_](const Point& x) { return f(x) + g(x); };
    if (a.samples_ && b.samples_ && a.samples_->nodes == b.samples_->nodes) {
      auto vals = a.samples_->values;
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += b.samples_->values[i];
      out.set_samples(a.samples_->nodes, std::move(vals));
    }
    if (!out.eval_ && !out.samples_) throw InvalidArgument("CliffordField: incompatible operands for +");
    return out;
  }

  friend CliffordField operator-(const CliffordField& a, const CliffordField& b) { return a + b.scaled(-1.0); }

 private:
  struct Samples {
    std::vector<Point> nodes;
    std::vector<Multivector> values;
  };

  void set_samples(std::vector<Point> nodes, std::vector<Multivector> values) {
    if (nodes.size() != values.size()) throw InvalidArgument("CliffordField: node/value count mismatch");
    for (const auto& v : values)
      if (!values.empty() && v.dim() != values.front().dim())
        throw InvalidArgument("CliffordField: samples must share the algebra dimension");
    samples_ = std::make_shared<const Samples>(Samples{std::move(nodes), std::move(values)});
  }

  int dim_ = 0;
  Evaluator eval_;
  Evaluator dirac_;
  Evaluator right_dirac_;
  std::shared_ptr<const Samples> samples_;
};

inline CliffordField materialize(const CliffordField& f, std::vector<Point> nodes) {
  auto values = f.sample_at(nodes);
  return f.with_samples(std::move(nodes), std::move(values));
}

struct MultiIndex {
  std::array<int, kMaxMeshDim> orders{};
  int dim = 2;

  int total() const {
    int s = 0;
    for (int i = 0; i < dim; ++i) s += orders[i];
    return s;
  }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

// All multi-indices in `dim` variables with total order <= max_total, in
// graded order.
inline std::vector<MultiIndex> multi_indices_up_to(int dim, int max_total) {
  std::vector<MultiIndex> out;
  for (int t = 0; t <= max_total; ++t) {
    for (int a = t; a >= 0; --a) {
      if (dim == 2) {
        out.push_back(MultiIndex{{a, t - a, 0}, 2});
        continue;
      }
      for (int b = t - a; b >= 0; --b) out.push_back(MultiIndex{{a, b, t - a - b}, 3});
    }
  }
  return out;
}

inline std::vector<MultiIndex> multi_indices_of_order(int dim, int total) {
  std::vector<MultiIndex> out;
  for (const auto& a : multi_indices_up_to(dim, total))
    if (a.total() == total) out.push_back(a);
  return out;
}

enum class StencilPolicy {
  central,   // throw StencilOutOfDomain if the central stencil leaves the domain
  adaptive,  // fall back to one-sided stencils per axis
};

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Offset (in steps) of the first stencil point for an axis with derivative
// order a: central a/2, forward a, backward 0. Points are x + (c - i) h.
inline double stencil_origin(int order, int mode) {
  if (mode == 0) return 0.5 * order;
  return mode == 1 ? static_cast<double>(order) : 0.0;
}

}  // namespace detail

// Iterated finite-difference partial derivative d^alpha f(x).
inline Multivector multi_index_derivative(const CliffordField& f, const Domain& domain, const MultiIndex& alpha,
                                          const Point& x, double h = kDefaultStep,
                                          StencilPolicy policy = StencilPolicy::central) {
  if (!(h > 0)) throw InvalidArgument("multi_index_derivative: step must be positive");
  if (alpha.total() == 0) return f(x);

  std::array<int, kMaxMeshDim> axes{};
  int k = 0;
  for (int j = 0; j < alpha.dim; ++j)
    if (alpha.orders[j] > 0) axes[k++] = j;

  // Pick per-axis modes (0 central, 1 forward, 2 backward), preferring central.
  // Convex domains: the stencil is inside iff every corner of its bounding box is.
  std::array<int, kMaxMeshDim> mode{};
  auto corners_inside = [&](const std::array<int, kMaxMeshDim>& m) {
    for (int corner = 0; corner < (1 << k); ++corner) {
      Point p = x;
      for (int a = 0; a < k; ++a) {
        const int j = axes[a];
        const double c = detail::stencil_origin(alpha.orders[j], m[a]);
        const double off = (corner >> a) & 1 ? c - alpha.orders[j] : c;
        p[j] += off * h;
      }
      if (!domain.contains(p)) return false;
    }
    return true;
  };

  bool found = corners_inside(mode);
  if (!found && policy == StencilPolicy::adaptive) {
    int combos = 1;
    for (int a = 0; a < k; ++a) combos *= 3;
    for (int c = 1; c < combos && !found; ++c) {
      int v = c;
      for (int a = 0; a < k; ++a) {
        mode[a] = v % 3;
        v /= 3;
      }
      found = corners_inside(mode);
    }
  }
  if (!found) throw StencilOutOfDomain("finite-difference stencil leaves the domain");

  Multivector acc;
  std::array<int, kMaxMeshDim> idx{};
  double scale = 1.0;
  for (int a = 0; a < k; ++a) scale /= std::pow(h, alpha.orders[axes[a]]);
  while (true) {
    Point p = x;
    double w = scale;
    for (int a = 0; a < k; ++a) {
      const int j = axes[a];
      const int order = alpha.orders[j];
      p[j] += (detail::stencil_origin(order, mode[a]) - idx[a]) * h;
      w *= ((idx[a] & 1) ? -1.0 : 1.0) * detail::binomial(order, idx[a]);
    }
    Multivector v = f(p);
    if (acc.empty()) acc = Multivector(v.dim());
    acc.add_scaled(v, w);
    int a = 0;
    for (; a < k; ++a) {
      if (++idx[a] <= alpha.orders[axes[a]]) break;
      idx[a] = 0;
    }
    if (a == k) break;
  }
  return acc;
}

inline Multivector partial_derivative(const CliffordField& f, const Domain& domain, int axis, const Point& x,
                                      double h = kDefaultStep, StencilPolicy policy = StencilPolicy::central) {
  MultiIndex a;
  a.dim = domain.dim;
  a.orders[axis] = 1;
  return multi_index_derivative(f, domain, a, x, h, policy);
}

// Df(x) = sum_j e_j d_j f(x). Uses the field's analytic Dirac derivative if it
// has one, central differences otherwise.
inline Multivector dirac_apply(const CliffordField& f, const Domain& domain, const Point& x, double h = kDefaultStep,
                               StencilPolicy policy = StencilPolicy::central) {
  if (f.has_dirac()) return f.analytic_dirac(x);
  Multivector acc;
  for (int j = 0; j < domain.dim; ++j) {
    Multivector dj = partial_derivative(f, domain, j, x, h, policy);
    if (acc.empty()) acc = Multivector(dj.dim());
    Point ej{};
    ej[j] = 1.0;
    accumulate_vector_left(coords(ej, domain.dim), dj, 1.0, acc);
  }
  return acc;
}

// f(x)D = sum_j d_j f(x) e_j.
inline Multivector dirac_right_apply(const CliffordField& f, const Domain& domain, const Point& x,
                                     double h = kDefaultStep, StencilPolicy policy = StencilPolicy::central) {
  if (f.has_right_dirac()) return f.analytic_right_dirac(x);
  Multivector acc;
  for (int j = 0; j < domain.dim; ++j) {
    Multivector dj = partial_derivative(f, domain, j, x, h, policy);
    if (acc.empty()) acc = Multivector(dj.dim());
    Point ej{};
    ej[j] = 1.0;
    accumulate_vector_right(dj, coords(ej, domain.dim), 1.0, acc);
  }
  return acc;
}

// The field x -> Df(x), evaluated lazily.
inline CliffordField dirac_field(const CliffordField& f, const Domain& domain, double h = kDefaultStep,
                                 StencilPolicy policy = StencilPolicy::central) {
  return CliffordField::closed_form(f.dim(), [f, domain, h, policy](const Point& x) {
    return dirac_apply(f, domain, x, h, policy);
  });
}

// Componentwise sum_j d_j^2 f(x), three-point stencil per axis.
inline Multivector laplacian_apply(const CliffordField& f, const Domain& domain, const Point& x,
                                   double h = kDefaultStep, StencilPolicy policy = StencilPolicy::central) {
  Multivector acc;
  for (int j = 0; j < domain.dim; ++j) {
    MultiIndex a;
    a.dim = domain.dim;
    a.orders[j] = 2;
    Multivector d = multi_index_derivative(f, domain, a, x, h, policy);
    if (acc.empty()) acc = Multivector(d.dim());
    acc += d;
  }
  return acc;
}

// -D(Df)(x) with nested central differences (reach 2h). Cross-check for
// laplacian_apply through Delta = -D^2.
inline Multivector laplacian_via_dirac(const CliffordField& f, const Domain& domain, const Point& x,
                                       double h = kDefaultStep) {
  CliffordField df = CliffordField::closed_form(f.dim(), [&f, &domain, h](const Point& y) {
    Multivector acc;
    for (int j = 0; j < domain.dim; ++j) {
      Multivector dj = partial_derivative(f, domain, j, y, h);
      if (acc.empty()) acc = Multivector(dj.dim());
      Point ej{};
      ej[j] = 1.0;
      accumulate_vector_left(coords(ej, domain.dim), dj, 1.0, acc);
    }
    return acc;
  });
  Multivector out = Multivector();
  for (int j = 0; j < domain.dim; ++j) {
    Multivector dj = partial_derivative(df, domain, j, x, h);
    if (out.empty()) out = Multivector(dj.dim());
    Point ej{};
    ej[j] = 1.0;
    accumulate_vector_left(coords(ej, domain.dim), dj, -1.0, out);
  }
  return out;
}

// Values of f at the panel centers (f must be evaluable on the closure).
inline CliffordField restrict_to_boundary(const CliffordField& f, const BoundaryMesh& bmesh) {
  auto nodes = bmesh.centers();
  auto values = f.sample_at(nodes);
  return CliffordField::sampled(f.dim(), std::move(nodes), std::move(values));
}

// Trace from the inside: 2 f(x - eps nu) - f(x - 2 eps nu) at every panel center
// (Richardson extrapolation of the inward offset, O(eps^2) for C^2 fields).
inline CliffordField trace_extract(const CliffordField& f, const BoundaryMesh& bmesh, double eps) {
  if (!(eps > 0)) throw InvalidArgument("trace_extract: offset must be positive");
  std::vector<Point> nodes;
  std::vector<Multivector> values;
  nodes.reserve(bmesh.size());
  values.reserve(bmesh.size());
  for (const Panel& p : bmesh.panels) {
    const Point a = p.center - eps * p.normal;
    const Point b = p.center - (2.0 * eps) * p.normal;
    if (!bmesh.domain.contains(a) || !bmesh.domain.contains(b))
      throw InvalidOffset("trace_extract: offset point leaves the domain");
    Multivector v = f(a) * 2.0;
    v -= f(b);
    nodes.push_back(p.center);
    values.push_back(std::move(v));
  }
  return CliffordField::sampled(f.dim(), std::move(nodes), std::move(values));
}

}  // namespace cliffkit
