#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sgnlap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

/// Numerical rank from singular values with the documented safe threshold
/// sigma_max * max(rows, cols) * eps * 64.
int numerical_rank(const Matrix& a);

/// Orthonormal basis of the null space (columns); empty for full rank.
Matrix null_space(const Matrix& a);

/// sigma_min / sigma_max; zero for an exactly singular or empty matrix.
double reciprocal_condition(const Matrix& a);

/// Orthogonal projector onto the column span of (an orthonormalized) basis
/// of Ran(a), i.e. onto the subspace spanned by the columns of a.
Matrix projector_onto_columns(const Matrix& a);

/// Moore-Penrose pseudoinverse via SVD with the rank threshold above.
Matrix pseudo_inverse(const Matrix& a);

/// Determinant bookkeeping that survives entries like e^{kappa a} for
/// large kappa a. Columns are rescaled by their largest modulus before a
/// pivoted LU; the removed factor is tracked in log space. `scaled` is
/// additionally divided by the Hadamard bound of the rescaled matrix, so
/// |scaled| <= 1 always and root finding is scale free.
struct ScaledDeterminant {
  Complex value;        // plain determinant; may overflow to inf
  Complex scaled;       // normalized determinant, |scaled| <= 1
  double log_abs;       // log |det|, finite unless det == 0
};

ScaledDeterminant scaled_determinant(const Matrix& a);

/// Solves a x = b; throws std::domain_error when a is numerically singular
/// (reciprocal condition estimate below 1e3 * machine epsilon).
Matrix solve(const Matrix& a, const Matrix& b);

}  // namespace sgnlap
