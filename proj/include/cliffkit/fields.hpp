#pragma once

// Closed-form fields: Clifford-coefficient polynomials with exact
// derivatives, the named fields used by the experiments, and the
// manufactured-solution cases.

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cliffkit/clifford.hpp"
#include "cliffkit/errors.hpp"
#include "cliffkit/field.hpp"
#include "cliffkit/geometry.hpp"
#include "cliffkit/transforms.hpp"

namespace cliffkit {

// sum_m c_m x^m with Multivector coefficients c_m in Cl_n, n = space dimension.
class PolyField {
 public:
  using Exponents = std::array<int, kMaxMeshDim>;

  struct Term {
    Exponents exps{};
    Multivector coeff;
  };

  explicit PolyField(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) throw InvalidArgument("PolyField: space dimension must be 2 or 3");
  }

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  PolyField& add(Exponents e, const Multivector& c) {
    if (c.dim() != dim_) throw InvalidArgument("PolyField: coefficient algebra must be Cl_n");
    for (Term& t : terms_)
      if (t.exps == e) {
        t.coeff += c;
        return *this;
      }
    terms_.push_back({e, c});
    return *this;
  }

  PolyField& add(Exponents e, BladeIndex b, double c) { return add(e, Multivector::blade(dim_, b, c)); }

  Multivector operator()(const Point& x) const {
    Multivector out(dim_);
    for (const Term& t : terms_) {
      double mono = 1.0;
      for (int j = 0; j < dim_; ++j)
        for (int r = 0; r < t.exps[j]; ++r) mono *= x[j];
      out.add_scaled(t.coeff, mono);
    }
    return out;
  }

  PolyField partial(int axis) const {
    PolyField out(dim_);
    for (const Term& t : terms_) {
      if (t.exps[axis] == 0) continue;
      Exponents e = t.exps;
      const double k = e[axis]--;
      out.add(e, t.coeff * k);
    }
    return out;
  }

  PolyField derivative(const MultiIndex& a) const {
    PolyField out = *this;
    for (int j = 0; j < dim_; ++j)
      for (int r = 0; r < a.orders[j]; ++r) out = out.partial(j);
    return out;
  }

  // D p = sum_j e_j d_j p
  PolyField dirac() const {
    PolyField out(dim_);
    for (int j = 0; j < dim_; ++j) {
      const Multivector ej = Multivector::blade(dim_, generator(j + 1));
      for (const Term& t : partial(j).terms_) out.add(t.exps, mv_mul(ej, t.coeff));
    }
    return out;
  }

  PolyField right_dirac() const {
    PolyField out(dim_);
    for (int j = 0; j < dim_; ++j) {
      const Multivector ej = Multivector::blade(dim_, generator(j + 1));
      for (const Term& t : partial(j).terms_) out.add(t.exps, mv_mul(t.coeff, ej));
    }
    return out;
  }

  PolyField laplacian() const {
    PolyField out(dim_);
    for (int j = 0; j < dim_; ++j)
      for (const Term& t : partial(j).partial(j).terms_) out.add(t.exps, t.coeff);
    return out;
  }

  PolyField scaled(double s) const {
    PolyField out = *this;
    for (Term& t : out.terms_) t.coeff *= s;
    return out;
  }

  CliffordField field() const {
    const PolyField self = *this;
    const PolyField d = dirac();
    const PolyField rd = right_dirac();
    return CliffordField::closed_form(
        dim_, [self](const Point& x) { return self(x); }, [d](const Point& x) { return d(x); },
        [rd](const Point& x) { return rd(x); });
  }

 private:
  int dim_;
  std::vector<Term> terms_;
};

// Random polynomial with every monomial x^m, m_j <= max_degree, and
// coefficients uniform in [-1, 1] on every blade.
inline PolyField random_polynomial(int dim, int max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  PolyField p(dim);
  const int nz = dim == 3 ? max_degree : 0;
  for (int c = 0; c <= nz; ++c)
    for (int b = 0; b <= max_degree; ++b)
      for (int a = 0; a <= max_degree; ++a) {
        Multivector m(dim);
        for (double& v : m.coeffs()) v = coef(rng);
        p.add({a, b, c}, m);
      }
  return p;
}

namespace named {

inline PolyField zero(int n) { return PolyField(n); }

inline PolyField constant(int n) { return PolyField(n).add({0, 0, 0}, BladeIndex{0}, 1.0); }

// x1 e1 - x2 e2: left and right monogenic.
inline PolyField monogenic(int n) {
  return PolyField(n).add({1, 0, 0}, generator(1), 1.0).add({0, 1, 0}, generator(2), -1.0);
}

inline PolyField quadratic(int n) {
  PolyField p(n);
  for (int j = 0; j < n; ++j) {
    PolyField::Exponents e{};
    e[j] = 2;
    p.add(e, BladeIndex{0}, 1.0);
  }
  return p;
}

// |x|^2 e0 + x1 e2
inline PolyField mixed(int n) { return quadratic(n).add({1, 0, 0}, generator(2), 1.0); }

// (1 - |x|^2) e0: vanishes on the unit sphere.
inline PolyField traceless(int n) { return quadratic(n).scaled(-1.0).add({0, 0, 0}, BladeIndex{0}, 1.0); }

// (x1^2 - x2^2) e0
inline PolyField harmonic(int n) {
  return PolyField(n).add({2, 0, 0}, BladeIndex{0}, 1.0).add({0, 2, 0}, BladeIndex{0}, -1.0);
}

inline PolyField linear(int n) { return PolyField(n).add({1, 0, 0}, BladeIndex{0}, 1.0); }

// sin(x1) cos(x2) e0 + exp(x2) e1 + x1 x2 e12, Dirac derivative by differences.
inline CliffordField smooth(int n) {
  return CliffordField::closed_form(n, [n](const Point& x) {
    Multivector m(n);
    m.coeff(0) = std::sin(x[0]) * std::cos(x[1]);
    m.coeff(1) = std::exp(x[1]);
    m.coeff(3) = x[0] * x[1];
    return m;
  });
}

}  // namespace named

inline std::vector<std::string> field_names() {
  return {"zero", "constant", "monogenic", "quadratic", "mixed", "traceless", "harmonic", "linear", "smooth", "psi"};
}

inline CliffordField make_named_field(const std::string& name, int n) {
  if (name == "zero") return named::zero(n).field();
  if (name == "constant") return named::constant(n).field();
  if (name == "monogenic") return named::monogenic(n).field();
  if (name == "quadratic") return named::quadratic(n).field();
  if (name == "mixed") return named::mixed(n).field();
  if (name == "traceless") return named::traceless(n).field();
  if (name == "harmonic") return named::harmonic(n).field();
  if (name == "linear") return named::linear(n).field();
  if (name == "smooth") return named::smooth(n);
  if (name == "psi") return fundamental_solution_field(n);
  std::string valid;
  for (const auto& f : field_names()) valid += (valid.empty() ? "" : ", ") + f;
  throw InvalidArgument("unknown field '" + name + "'; valid names: " + valid);
}

// A manufactured solution u* together with the BVP data derived from it.
struct ManufacturedCase {
  std::string name;
  PolyField solution;
};

inline std::vector<std::string> first_order_case_names() { return {"zero", "monogenic", "quadratic", "mixed"}; }
inline std::vector<std::string> second_order_case_names() { return {"zero", "harmonic", "quadratic", "mixed"}; }

inline ManufacturedCase make_case(const std::string& name, int n) {
  if (name == "zero") return {name, named::zero(n)};
  if (name == "monogenic") return {name, named::monogenic(n)};
  if (name == "quadratic") return {name, named::quadratic(n)};
  if (name == "mixed") return {name, named::mixed(n)};
  if (name == "harmonic") return {name, named::harmonic(n)};
  throw InvalidArgument("unknown case '" + name + "'; valid names: zero, monogenic, quadratic, mixed, harmonic");
}

// max over the points of |f| and of every |d_j^2 u|: the size of the terms a
// -Delta residual check has to cancel. Nonzero for harmonic u, where f = 0.
inline double second_derivative_scale(const PolyField& u, std::span<const Point> pts) {
  const PolyField f = u.laplacian();
  std::vector<PolyField> second;
  for (int j = 0; j < u.dim(); ++j) second.push_back(u.partial(j).partial(j));
  double s = 0.0;
  for (const Point& x : pts) {
    s = std::max(s, mv_norm(f(x)));
    for (const PolyField& d : second) s = std::max(s, mv_norm(d(x)));
  }
  return s;
}

// phi(|x - c| / rho) a with phi(t) = (1 - t^2)^2 on t < 1, zero outside;
// with_x1 multiplies by x1. Analytic Dirac derivative.
inline CliffordField bump_field(int n, Point c, double rho, Multivector a, bool with_x1) {
  auto value = [c, rho, a, with_x1](const Point& x) {
    const double t2 = dot(x - c, x - c) / (rho * rho);
    if (t2 >= 1.0) return Multivector(a.dim());
    const double phi = (1 - t2) * (1 - t2);
    return a * (with_x1 ? x[0] * phi : phi);
  };
  auto dirac = [c, rho, a, with_x1, n](const Point& x) {
    const double t2 = dot(x - c, x - c) / (rho * rho);
    if (t2 >= 1.0) return Multivector(a.dim());
    const double phi = (1 - t2) * (1 - t2);
    Point grad{};
    for (int j = 0; j < n; ++j) {
      const double dphi = -4.0 * (1 - t2) * (x[j] - c[j]) / (rho * rho);
      grad[j] = with_x1 ? x[0] * dphi + (j == 0 ? phi : 0.0) : dphi;
    }
    Multivector out(a.dim());
    accumulate_vector_left(coords(grad, n), a, 1.0, out);
    return out;
  };
  return CliffordField::closed_form(n, value, dirac);
}

// Bumps centred at the centroid and at 4 (2D) / 6 (3D) surrounding points,
// each times every basis blade, with and without an x1 factor. Supports stay
// at least `band` away from the boundary.
inline std::vector<CliffordField> default_test_family(const Domain& dom, double band) {
  const int n = dom.dim;
  const Point c0 = dom.centroid();
  double inradius = dom.tag == DomainTag::disk ? dom.radius : std::numeric_limits<double>::infinity();
  if (dom.tag == DomainTag::box)
    for (int i = 0; i < n; ++i) inradius = std::min(inradius, 0.5 * (dom.hi[i] - dom.lo[i]));
  const double shift = 0.3 * inradius;
  const double rho = std::min(0.4 * inradius, inradius - band - shift);
  if (!(rho > 0.0)) throw InvalidArgument("default_test_family: domain too small for the boundary band");
  std::vector<Point> centers{c0};
  for (int j = 0; j < n; ++j)
    for (double s : {-1.0, 1.0}) {
      Point c = c0;
      c[j] += s * shift;
      centers.push_back(c);
    }
  std::vector<CliffordField> out;
  for (const Point& c : centers)
    for (std::uint32_t b = 0; b < (1u << n); ++b)
      for (bool x1 : {false, true}) out.push_back(bump_field(n, c, rho, Multivector::blade(n, BladeIndex{b}), x1));
  return out;
}

}  // namespace cliffkit
