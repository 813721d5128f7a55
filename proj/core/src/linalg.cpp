#include "sgnlap/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgnlap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rank_threshold(const Eigen::JacobiSVD<Matrix>& svd, const Matrix& a) {
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return smax * static_cast<double>(std::max(a.rows(), a.cols())) * kEps * 64.0;
}

}  // namespace

int numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const double tol = rank_threshold(svd, a);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

Matrix null_space(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const double tol = rank_threshold(svd, a);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

double reciprocal_condition(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) <= 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Matrix projector_onto_columns(const Matrix& a) {
  if (a.cols() == 0) return Matrix::Zero(a.rows(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const double tol = rank_threshold(svd, a);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  const Matrix u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

Matrix pseudo_inverse(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tol = rank_threshold(svd, a);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(svd.singularValues().size());
  for (int i = 0; i < inv.size(); ++i)
    if (svd.singularValues()(i) > tol) inv(i) = 1.0 / svd.singularValues()(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

ScaledDeterminant scaled_determinant(const Matrix& a) {
  const int dim = static_cast<int>(a.rows());
  if (dim == 0) return {Complex(1.0), Complex(1.0), 0.0};

  Matrix b = a;
  double log_scale = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double cmax = b.col(j).cwiseAbs().maxCoeff();
    if (cmax > 0.0 && std::isfinite(cmax)) {
      b.col(j) /= cmax;
      log_scale += std::log(cmax);
    }
  }

  Eigen::PartialPivLU<Matrix> lu(b);
  Complex det_b = lu.determinant();

  // Hadamard bound of the rescaled matrix; rows of b are O(1) so this is
  // a mild extra normalization that keeps |scaled| <= 1.
  double log_hadamard = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double rn = b.row(i).norm();
    log_hadamard += std::log(rn > 0.0 ? rn : 1.0);
  }

  ScaledDeterminant out;
  out.scaled = det_b * std::exp(-log_hadamard);
  const double abs_b = std::abs(det_b);
  out.log_abs = abs_b > 0.0 ? std::log(abs_b) + log_scale
                            : -std::numeric_limits<double>::infinity();
  out.value = abs_b > 0.0 ? det_b / abs_b * std::exp(out.log_abs) : Complex(0.0);
  return out;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (reciprocal_condition(a) < 1e3 * kEps)
    throw std::domain_error("matrix numerically singular in solve");
  return a.partialPivLu().solve(b);
}

}  // namespace sgnlap
