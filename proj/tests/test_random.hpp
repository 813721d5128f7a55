#pragma once

#include <random>

#include <sgnlap/linalg.hpp>

namespace fixtures {

using sgnlap::Complex;
using sgnlap::Matrix;

inline Matrix random_gaussian(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

/// Haar-ish unitary: QR of a complex Gaussian with phase-fixed diagonal.
inline Matrix random_unitary(int dim, std::mt19937& rng) {
  const Matrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline Matrix random_invertible(int dim, std::mt19937& rng) {
  for (;;) {
    Matrix m = random_gaussian(dim, dim, rng);
    if (sgnlap::reciprocal_condition(m) > 1e-6) return m;
  }
}

}  // namespace fixtures
