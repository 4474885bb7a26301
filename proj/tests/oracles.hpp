#pragma once

// Independent reference computations for the tests. None of these call the
// library routine they are used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// e_A e_B by writing out the symbol string of A then B, bubble-sorting it
// (each swap of distinct generators flips the sign) and cancelling adjacent
// equal pairs with e_j e_j = -1.
inline std::pair<int, std::uint32_t> symbol_sort_product(std::uint32_t a, std::uint32_t b, int n) {
  std::vector<int> s;
  for (int j = 0; j < n; ++j)
    if (a & (1u << j)) s.push_back(j);
  for (int j = 0; j < n; ++j)
    if (b & (1u << j)) s.push_back(j);
  int sign = 1;
  for (std::size_t pass = 0; pass < s.size(); ++pass)
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i] > s[i + 1]) {
        std::swap(s[i], s[i + 1]);
        sign = -sign;
      }
  std::vector<int> out;
  for (std::size_t i = 0; i < s.size();) {
    if (i + 1 < s.size() && s[i] == s[i + 1]) {
      sign = -sign;
      i += 2;
    } else {
      out.push_back(s[i]);
      ++i;
    }
  }
  std::uint32_t mask = 0;
  for (int j : out) mask |= 1u << j;
  return {sign, mask};
}

// Quaternion product on (1, i, j, k) coordinates.
inline std::vector<double> quaternion_mul(const std::vector<double>& p, const std::vector<double>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

// Area of the unit sphere in R^n by the recursion w_1 = 2, w_2 = 2 pi,
// w_n = 2 pi w_{n-2} / (n - 2).
inline double sphere_area(int n) {
  if (n == 1) return 2.0;
  if (n == 2) return 2.0 * std::numbers::pi;
  return 2.0 * std::numbers::pi * sphere_area(n - 2) / (n - 2);
}

// Gagliardo seminorm of cos(theta) on the unit circle, lambda = 1/2, p = 2:
// int int |cos a - cos b|^2 / |x - y|^2 = pi^2 * 2, so the seminorm is pi sqrt 2.
inline double circle_cos_seminorm() { return std::numbers::pi * std::sqrt(2.0); }

}  // namespace oracle
