#pragma once

#include "sgnlap/bc.hpp"
#include "sgnlap/graph.hpp"
#include "sgnlap/linalg.hpp"

namespace sgnlap {

/// Pair of spectral parameters (z+, z-). The solution Ansatz on an edge of
/// sign s is built from e^{+- i z_s x}, so z+ = k, z- = i kappa recovers
/// the oscillating/decaying split of the two energy half-lines:
///   positive branch          (k, ik)      lambda = k^2 > 0
///   positive conjugate       (-k, ik)
///   negative branch          (i kappa, kappa)   lambda = -kappa^2 < 0
///   negative conjugate       (i kappa, -kappa)
///   resolvent, quadrant Q    (k, ik)      Re k > 0, Im k > 0
///   resolvent, quadrant P    (k, -ik)     Re k < 0, Im k > 0
struct SpectralParams {
  Complex z_plus;
  Complex z_minus;

  SpectralParams(Complex zp, Complex zm);

  static SpectralParams positive_energy(double k);
  static SpectralParams positive_energy_conjugate(double k);
  static SpectralParams negative_energy(double kappa);
  static SpectralParams negative_energy_conjugate(double kappa);
  static SpectralParams resolvent_q(Complex k);
  static SpectralParams resolvent_p(Complex k);

  /// z for a slot of the given sign.
  Complex z(Sign s) const { return s == Sign::positive ? z_plus : z_minus; }
};

/// Boundary-value matrix X and derivative matrix Y of the exponential
/// Ansatz, in canonical slot/coefficient order. Per edge:
///   external             psi = s e^{izx}          rows (1), (iz)
///   internal, columns (alpha, beta), psi = alpha e^{izx} + beta e^{-izx}
///     origin rows        psi(0) = alpha + beta,   psi'(0) = iz (alpha - beta)
///     terminus rows      psi(a) = alpha e^{iza} + beta e^{-iza},
///                        -psi'(a) = iz (-alpha e^{iza} + beta e^{-iza})
std::pair<Matrix, Matrix> build_xy(const MetricGraph& g,
                                   const BoundaryIndex& index,
                                   const SpectralParams& params);

/// Diagonal of I(z+,z-) = diag(i z+ 1_n, i z- 1_m).
Vector i_diagonal(const BoundaryIndex& index, const SpectralParams& params);

/// Diagonal of the resolvent weight W = diag(i/(2 z+) 1_n, i/(2 z-) 1_m).
Vector w_diagonal(const BoundaryIndex& index, const SpectralParams& params);

struct DeterminantInfo {
  Complex det;         // det Z, representative dependent
  Complex det_scaled;  // column-scaled and Hadamard-normalized, |.| <= 1
  double log_abs_det;  // finite even when det overflows
};

/// Secular matrix Z = A X + B Y and its determinant.
std::pair<Matrix, DeterminantInfo> secular_matrix(const BoundaryConditions& bc,
                                                  const MetricGraph& g,
                                                  const BoundaryIndex& index,
                                                  const SpectralParams& params);

/// Local coefficient matrix Cm = -(A + B I)^{-1} (A - B I) together with a
/// condition estimate of the inverted factor.
struct CoefficientMatrix {
  Matrix Cm;
  double rcond;  // reciprocal condition of A + B I

  Matrix pp(int n, int m) const { return Cm.topLeftCorner(n, n); }
  Matrix pm(int n, int m) const { return Cm.topRightCorner(n, m); }
  Matrix mp(int n, int m) const { return Cm.bottomLeftCorner(m, n); }
  Matrix mm(int n, int m) const { return Cm.bottomRightCorner(m, m); }
};

/// Throws std::domain_error at a pole (A + B I numerically singular; there
/// are at most n+m of them per branch).
CoefficientMatrix coefficient_matrix(const BoundaryConditions& bc,
                                     const BoundaryIndex& index,
                                     const SpectralParams& params);

/// R+ = (X + I^{-1} Y)/2, R- = (X - I^{-1} Y)/2 and T = R- R+^{-1},
/// evaluated from the per-edge closed forms:
///   R+ : external 1,           internal diag(1, e^{-iza})
///   R- : external 0,           internal antidiag(1, e^{iza})
///   T  : external 0,           internal antidiag(e^{iza}, e^{iza})
struct TransferMatrices {
  Matrix R_plus;
  Matrix R_minus;
  Matrix T;
};

TransferMatrices build_rt(const MetricGraph& g, const BoundaryIndex& index,
                          const SpectralParams& params);

/// Signals a spectral parameter where Z is numerically singular.
class ResonanceError : public std::domain_error {
 public:
  ResonanceError(const SpectralParams& params, double rcond);
  const SpectralParams params;
  const double rcond;
};

/// Coefficients of the generalized eigenfunctions: chi = Xfrak E with
/// Xfrak = -Z^{-1} (A - B I) and E the (n+m) x |E| injection placing 1 in
/// each external slot, columns ordered E+ then E-. Column l holds the
/// outgoing/decaying coefficients of the wave incoming on external edge l.
/// Throws ResonanceError when Z is numerically singular.
Matrix chi_coefficients(const BoundaryConditions& bc, const MetricGraph& g,
                        const BoundaryIndex& index,
                        const SpectralParams& params);

/// Everything at once; failure states are recorded in flags instead of
/// exceptions. Useful for scans.
struct SecularAssembly {
  SpectralParams params;
  Matrix X, Y, Z;
  Matrix R_plus, R_minus, T;
  Vector I_diag, W_diag;
  DeterminantInfo det;
  double z_rcond = 0.0;
  bool z_singular = false;
  Matrix Cm;  // empty at a pole of Cm
  double cm_rcond = 0.0;
  bool cm_pole = false;
  Matrix chi;  // empty when z_singular
};

SecularAssembly assemble(const BoundaryConditions& bc, const MetricGraph& g,
                         const BoundaryIndex& index,
                         const SpectralParams& params);

/// External-slot injection E used by chi = Xfrak E.
Matrix external_injection(const BoundaryIndex& index);

}  // namespace sgnlap
