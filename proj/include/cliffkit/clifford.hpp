#pragma once

// Dense real Clifford algebra Cl_n with generators e_1..e_n, e_j^2 = -1.
//
// A basis blade e_A is encoded by an n-bit mask: bit (j-1) set means e_j is a
// factor. The canonical blade is the increasing product e_{j1} e_{j2} ... with
// j1 < j2 < ...; the empty mask is the identity e_0.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cliffkit/errors.hpp"

namespace cliffkit {

inline constexpr int kMaxAlgebraDim = 12;

struct BladeIndex {
  std::uint32_t mask = 0;

  constexpr int grade() const { return std::popcount(mask); }
  constexpr bool valid_for(int n) const {
    return n >= 0 && n <= kMaxAlgebraDim && (mask >> n) == 0u;
  }

  friend constexpr bool operator==(BladeIndex, BladeIndex) = default;

  // "e0", "e1", "e12", "e1_10" for generators above 9.
  std::string name() const {
    if (mask == 0) return "e0";
    std::string out = "e";
    bool wide = (mask >> 9) != 0;
    bool first = true;
    for (int j = 0; j < kMaxAlgebraDim; ++j) {
      if (mask & (1u << j)) {
        if (wide && !first) out += '_';
        out += std::to_string(j + 1);
        first = false;
      }
    }
    return out;
  }
};

// Generator e_j, 1-based.
constexpr BladeIndex generator(int j) { return BladeIndex{1u << (j - 1)}; }

struct BladeProduct {
  int sign;
  BladeIndex blade;
};

namespace detail {

// Parity of the number of transpositions needed to sort the concatenated
// symbol string A B into increasing order: counts pairs (i in A, j in B, i > j).
constexpr int reorder_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

constexpr double conj_sign(int grade) {
  // (-1)^r from e_j -> -e_j, times (-1)^(r(r-1)/2) from reversal.
  int r = grade;
  int flips = r + r * (r - 1) / 2;
  return (flips & 1) ? -1.0 : 1.0;
}

}  // namespace detail

// e_A e_B = sign * e_{A xor B}.
constexpr BladeProduct blade_product_unchecked(BladeIndex a, BladeIndex b) {
  int sign = detail::reorder_sign(a.mask, b.mask);
  // Each shared generator contracts with e_j^2 = -1.
  if (std::popcount(a.mask & b.mask) & 1) sign = -sign;
  return {sign, BladeIndex{a.mask ^ b.mask}};
}

inline BladeProduct blade_product(BladeIndex a, BladeIndex b, int n) {
  if (n < 1 || n > kMaxAlgebraDim)
    throw InvalidArgument("blade_product: dimension out of range");
  if (!a.valid_for(n) || !b.valid_for(n))
    throw InvalidArgument("blade_product: blade not in Cl_" + std::to_string(n));
  return blade_product_unchecked(a, b);
}

class Multivector {
 public:
  Multivector() = default;

  explicit Multivector(int dim) : dim_(check_dim(dim)), coeffs_(std::size_t{1} << dim, 0.0) {}

  Multivector(int dim, std::vector<double> coeffs) : dim_(check_dim(dim)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != (std::size_t{1} << dim_))
      throw InvalidArgument("Multivector: coefficient count must be 2^n");
  }

  static Multivector scalar(int dim, double s) {
    Multivector m(dim);
    m.coeffs_[0] = s;
    return m;
  }

  static Multivector blade(int dim, BladeIndex b, double c = 1.0) {
    Multivector m(dim);
    if (!b.valid_for(dim)) throw InvalidArgument("Multivector::blade: blade not in algebra");
    m.coeffs_[b.mask] = c;
    return m;
  }

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  double operator[](BladeIndex b) const { return coeffs_[b.mask]; }
  double& operator[](BladeIndex b) { return coeffs_[b.mask]; }
  double coeff(std::size_t mask) const { return coeffs_[mask]; }
  double& coeff(std::size_t mask) { return coeffs_[mask]; }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  double scalar_part() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  bool is_zero() const {
    for (double c : coeffs_)
      if (c != 0.0) return false;
    return true;
  }

  bool is_vector() const {
    for (std::size_t m = 0; m < coeffs_.size(); ++m)
      if (coeffs_[m] != 0.0 && std::popcount(m) != 1) return false;
    return true;
  }

  Multivector& operator+=(const Multivector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Multivector& operator/=(double s) {
    for (double& c : coeffs_) c /= s;
    return *this;
  }

  // this += w * other
  void add_scaled(const Multivector& o, double w) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += w * o.coeffs_[i];
  }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a /= s; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

  friend bool operator==(const Multivector&, const Multivector&) = default;

  void require_same_dim(const Multivector& o) const {
    if (o.dim_ != dim_) throw InvalidArgument("Multivector: dimension mismatch");
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxAlgebraDim)
      throw InvalidArgument("Multivector: dimension must be in [1, 12]");
    return dim;
  }

  int dim_ = 0;
  std::vector<double> coeffs_;
};

inline Multivector mv_mul(const Multivector& a, const Multivector& b) {
  a.require_same_dim(b);
  Multivector out(a.dim());
  const std::size_t slots = a.size();
  for (std::size_t i = 0; i < slots; ++i) {
    const double ai = a.coeff(i);
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < slots; ++j) {
      const double bj = b.coeff(j);
      if (bj == 0.0) continue;
      auto [sign, blade] = blade_product_unchecked(BladeIndex{static_cast<std::uint32_t>(i)},
                                                   BladeIndex{static_cast<std::uint32_t>(j)});
      out.coeff(blade.mask) += sign * ai * bj;
    }
  }
  return out;
}

inline Multivector operator*(const Multivector& a, const Multivector& b) { return mv_mul(a, b); }

inline Multivector mv_conj(const Multivector& a) {
  Multivector out = a;
  for (std::size_t m = 0; m < out.size(); ++m) out.coeff(m) *= detail::conj_sign(std::popcount(m));
  return out;
}

inline double mv_norm_squared(const Multivector& a) {
  double s = 0.0;
  for (double c : a.coeffs()) s += c * c;
  return s;
}

inline double mv_norm(const Multivector& a) { return std::sqrt(mv_norm_squared(a)); }

// Scalar part of conj(a) b, i.e. the Euclidean inner product of coefficients.
inline double scalar_pairing(const Multivector& a, const Multivector& b) {
  a.require_same_dim(b);
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += a.coeff(m) * b.coeff(m);
  return s;
}

inline Multivector embed_vector(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  Multivector out(n);
  for (int j = 0; j < n; ++j) out.coeff(std::size_t{1} << j) = x[j];
  return out;
}

// x^{-1} = conj(x) / |x|^2 for a nonzero grade-1 x.
inline Multivector vector_inverse(const Multivector& x) {
  if (!x.is_vector()) throw InvalidArgument("vector_inverse: input is not grade-1");
  const double n2 = mv_norm_squared(x);
  if (n2 == 0.0) throw DivisionByZero("vector_inverse: zero vector");
  return mv_conj(x) / n2;
}

// acc += w * (sum_j v_j e_j) * f. Allocation-free kernel for the transforms.
inline void accumulate_vector_left(std::span<const double> v, const Multivector& f, double w, Multivector& acc) {
  const std::size_t slots = f.size();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double vj = v[j] * w;
    if (vj == 0.0) continue;
    const BladeIndex ej{1u << j};
    for (std::size_t b = 0; b < slots; ++b) {
      const double fb = f.coeff(b);
      if (fb == 0.0) continue;
      auto [sign, blade] = blade_product_unchecked(ej, BladeIndex{static_cast<std::uint32_t>(b)});
      acc.coeff(blade.mask) += sign * vj * fb;
    }
  }
}

// acc += w * f * (sum_j v_j e_j).
inline void accumulate_vector_right(const Multivector& f, std::span<const double> v, double w, Multivector& acc) {
  const std::size_t slots = f.size();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double vj = v[j] * w;
    if (vj == 0.0) continue;
    const BladeIndex ej{1u << j};
    for (std::size_t b = 0; b < slots; ++b) {
      const double fb = f.coeff(b);
      if (fb == 0.0) continue;
      auto [sign, blade] = blade_product_unchecked(BladeIndex{static_cast<std::uint32_t>(b)}, ej);
      acc.coeff(blade.mask) += sign * vj * fb;
    }
  }
}

}  // namespace cliffkit
