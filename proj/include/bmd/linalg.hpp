#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

namespace bmd::linalg {

template <std::size_t N>
using Vector = std::array<double, N>;

template <std::size_t N>
using Matrix = std::array<std::array<double, N>, N>;

/// Determinant by Gaussian elimination with partial pivoting.
template <std::size_t N>
double determinant(Matrix<N> m) {
  double det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (m[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t row = col + 1; row < N; ++row) {
      const double factor = m[row][col] / m[col][col];
      for (std::size_t k = col; k < N; ++k) m[row][k] -= factor * m[col][k];
    }
  }
  return det;
}

/// Solves m x = rhs. Returns nullopt when a pivot vanishes.
template <std::size_t N>
std::optional<Vector<N>> solve(Matrix<N> m, Vector<N> rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (m[pivot][col] == 0.0 || !std::isfinite(m[pivot][col])) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = col + 1; row < N; ++row) {
      const double factor = m[row][col] / m[col][col];
      for (std::size_t k = col; k < N; ++k) m[row][k] -= factor * m[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  Vector<N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t k = i + 1; k < N; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

}  // namespace bmd::linalg
