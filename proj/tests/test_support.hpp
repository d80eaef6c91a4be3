#pragma once

#include <cstdint>
#include <random>

#include "lowrank/matrix.hpp"

namespace lowrank::testing {

inline Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_matrix(rows, cols, rng);
}

/// Haar-ish orthogonal matrix from the QR factor of a Gaussian matrix.
inline Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Random rank-r matrix with prescribed singular values (descending) for controlled spectra.
inline Matrix with_spectrum(Index rows, Index cols, const Vector& sigma, std::mt19937_64& rng) {
  const Matrix u = random_orthogonal(rows, rng);
  const Matrix v = random_orthogonal(cols, rng);
  const Index k = sigma.size();
  return u.leftCols(k) * sigma.asDiagonal() * v.leftCols(k).transpose();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace lowrank::testing
