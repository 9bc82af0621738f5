#pragma once

#include <array>
#include <cmath>

namespace lagvac {

/// Row-major 3x3 matrix, m[r*3 + c].
using Mat3 = std::array<double, 9>;

namespace mat3 {

constexpr Mat3 identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

inline double det(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

/// Cofactor-transpose (adjugate) inverse; caller guarantees det != 0.
inline Mat3 inverse(const Mat3& m, double d) {
  const double inv = 1.0 / d;
  return {(m[4] * m[8] - m[5] * m[7]) * inv, (m[2] * m[7] - m[1] * m[8]) * inv, (m[1] * m[5] - m[2] * m[4]) * inv,
          (m[5] * m[6] - m[3] * m[8]) * inv, (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
          (m[3] * m[7] - m[4] * m[6]) * inv, (m[1] * m[6] - m[0] * m[7]) * inv, (m[0] * m[4] - m[1] * m[3]) * inv};
}

inline Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i * 3 + k] * b[k * 3 + j];
      c[i * 3 + j] = s;
    }
  return c;
}

inline Mat3 transpose(const Mat3& a) { return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]}; }

inline double frobenius_sq(const Mat3& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 9; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

/// Eigenvalues of a symmetric matrix, ascending.
std::array<double, 3> symmetric_eigenvalues(const Mat3& a);

}  // namespace mat3
}  // namespace lagvac
