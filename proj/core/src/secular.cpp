#include "sgnlap/secular.hpp"

#include <cmath>
#include <limits>

namespace sgnlap {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSingularRcond = 1e3 * kEps;
}  // namespace

SpectralParams::SpectralParams(Complex zp, Complex zm)
    : z_plus(zp), z_minus(zm) {
  if (zp == Complex(0.0) || zm == Complex(0.0))
    throw std::invalid_argument("spectral parameters must be nonzero");
}

SpectralParams SpectralParams::positive_energy(double k) {
  return {Complex(k, 0.0), Complex(0.0, k)};
}
SpectralParams SpectralParams::positive_energy_conjugate(double k) {
  return {Complex(-k, 0.0), Complex(0.0, k)};
}
SpectralParams SpectralParams::negative_energy(double kappa) {
  return {Complex(0.0, kappa), Complex(kappa, 0.0)};
}
SpectralParams SpectralParams::negative_energy_conjugate(double kappa) {
  return {Complex(0.0, kappa), Complex(-kappa, 0.0)};
}
SpectralParams SpectralParams::resolvent_q(Complex k) {
  return {k, kImag * k};
}
SpectralParams SpectralParams::resolvent_p(Complex k) {
  return {k, -kImag * k};
}

std::pair<Matrix, Matrix> build_xy(const MetricGraph& g,
                                   const BoundaryIndex& index,
                                   const SpectralParams& params) {
  const int d = index.dim();
  Matrix x = Matrix::Zero(d, d);
  Matrix y = Matrix::Zero(d, d);

  for (int s = 0; s < d; ++s) {
    const SlotInfo& info = index.slots()[s];
    const Complex z = params.z(info.sign);
    switch (info.kind) {
      case SlotInfo::Kind::external:
        x(s, s) = 1.0;
        y(s, s) = kImag * z;
        break;
      case SlotInfo::Kind::internal_origin: {
        const int beta =
            index.slot(info.edge_id, Endpoint::terminus);
        x(s, s) = 1.0;
        x(s, beta) = 1.0;
        y(s, s) = kImag * z;
        y(s, beta) = -kImag * z;
        break;
      }
      case SlotInfo::Kind::internal_terminus: {
        const int alpha = index.slot(info.edge_id, Endpoint::origin);
        const double a = g.internal_edges()[info.edge_index].length;
        const Complex ep = std::exp(kImag * z * a);
        const Complex em = std::exp(-kImag * z * a);
        x(s, alpha) = ep;
        x(s, s) = em;
        y(s, alpha) = -kImag * z * ep;
        y(s, s) = kImag * z * em;
        break;
      }
    }
  }
  return {std::move(x), std::move(y)};
}

Vector i_diagonal(const BoundaryIndex& index, const SpectralParams& params) {
  Vector diag(index.dim());
  for (int s = 0; s < index.dim(); ++s)
    diag(s) = kImag * params.z(index.slots()[s].sign);
  return diag;
}

Vector w_diagonal(const BoundaryIndex& index, const SpectralParams& params) {
  Vector diag(index.dim());
  for (int s = 0; s < index.dim(); ++s)
    diag(s) = kImag / (2.0 * params.z(index.slots()[s].sign));
  return diag;
}

namespace {

/// X and Y with coefficient columns pre-scaled by e^{-m_c}, where m_c is
/// the positive part of -+ Im(z a) on the alpha/beta column of an internal
/// edge. Entries like e^{kappa a} then never materialize; the removed
/// factor sum is returned for determinant bookkeeping.
struct ScaledXY {
  Matrix X, Y;
  double log_removed = 0.0;
};

ScaledXY build_xy_scaled(const MetricGraph& g, const BoundaryIndex& index,
                         const SpectralParams& params) {
  const int d = index.dim();
  ScaledXY out;
  out.X = Matrix::Zero(d, d);
  out.Y = Matrix::Zero(d, d);

  for (int s = 0; s < d; ++s) {
    const SlotInfo& info = index.slots()[s];
    const Complex z = params.z(info.sign);
    switch (info.kind) {
      case SlotInfo::Kind::external:
        out.X(s, s) = 1.0;
        out.Y(s, s) = kImag * z;
        out.log_removed += 0.0;
        break;
      case SlotInfo::Kind::internal_origin: {
        const int beta = index.slot(info.edge_id, Endpoint::terminus);
        const double a = g.internal_edges()[info.edge_index].length;
        const double m_alpha = std::max(0.0, -std::imag(z * a));
        const double m_beta = std::max(0.0, std::imag(z * a));
        out.log_removed += m_alpha + m_beta;
        out.X(s, s) = std::exp(-m_alpha);
        out.X(s, beta) = std::exp(-m_beta);
        out.Y(s, s) = kImag * z * std::exp(-m_alpha);
        out.Y(s, beta) = -kImag * z * std::exp(-m_beta);
        break;
      }
      case SlotInfo::Kind::internal_terminus: {
        const int alpha = index.slot(info.edge_id, Endpoint::origin);
        const double a = g.internal_edges()[info.edge_index].length;
        const double m_alpha = std::max(0.0, -std::imag(z * a));
        const double m_beta = std::max(0.0, std::imag(z * a));
        const Complex ep = std::exp(kImag * z * a - m_alpha);
        const Complex em = std::exp(-kImag * z * a - m_beta);
        out.X(s, alpha) = ep;
        out.X(s, s) = em;
        out.Y(s, alpha) = -kImag * z * ep;
        out.Y(s, s) = kImag * z * em;
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::pair<Matrix, DeterminantInfo> secular_matrix(const BoundaryConditions& bc,
                                                  const MetricGraph& g,
                                                  const BoundaryIndex& index,
                                                  const SpectralParams& params) {
  const ScaledXY sxy = build_xy_scaled(g, index, params);
  const Matrix z_scaled = bc.A * sxy.X + bc.B * sxy.Y;
  const ScaledDeterminant sd = scaled_determinant(z_scaled);

  DeterminantInfo det;
  det.det_scaled = sd.scaled;
  det.log_abs_det = sd.log_abs + sxy.log_removed;
  const double abs_sd = std::abs(sd.value);
  det.det = abs_sd > 0.0 ? sd.value / abs_sd * std::exp(det.log_abs_det)
                         : Complex(0.0);

  auto [x, y] = build_xy(g, index, params);
  Matrix z = bc.A * x + bc.B * y;
  return {std::move(z), det};
}

CoefficientMatrix coefficient_matrix(const BoundaryConditions& bc,
                                     const BoundaryIndex& index,
                                     const SpectralParams& params) {
  const Matrix bi = bc.B * i_diagonal(index, params).asDiagonal();
  const Matrix plus = bc.A + bi;
  const double rcond = reciprocal_condition(plus);
  if (rcond < kSingularRcond)
    throw std::domain_error("pole of the coefficient matrix");
  CoefficientMatrix out;
  out.rcond = rcond;
  out.Cm = -plus.partialPivLu().solve(bc.A - bi);
  return out;
}

TransferMatrices build_rt(const MetricGraph& g, const BoundaryIndex& index,
                          const SpectralParams& params) {
  const int d = index.dim();
  TransferMatrices out;
  out.R_plus = Matrix::Zero(d, d);
  out.R_minus = Matrix::Zero(d, d);
  out.T = Matrix::Zero(d, d);

  for (int s = 0; s < d; ++s) {
    const SlotInfo& info = index.slots()[s];
    const Complex z = params.z(info.sign);
    switch (info.kind) {
      case SlotInfo::Kind::external:
        out.R_plus(s, s) = 1.0;
        break;
      case SlotInfo::Kind::internal_origin: {
        const int beta = index.slot(info.edge_id, Endpoint::terminus);
        const double a = g.internal_edges()[info.edge_index].length;
        out.R_plus(s, s) = 1.0;
        out.R_minus(s, beta) = 1.0;
        out.T(s, beta) = std::exp(kImag * z * a);
        break;
      }
      case SlotInfo::Kind::internal_terminus: {
        const int alpha = index.slot(info.edge_id, Endpoint::origin);
        const double a = g.internal_edges()[info.edge_index].length;
        out.R_plus(s, s) = std::exp(-kImag * z * a);
        out.R_minus(s, alpha) = std::exp(kImag * z * a);
        out.T(s, alpha) = std::exp(kImag * z * a);
        break;
      }
    }
  }
  return out;
}

ResonanceError::ResonanceError(const SpectralParams& p, double rc)
    : std::domain_error("secular matrix singular: spectral parameter is a "
                        "resonance or eigenvalue"),
      params(p),
      rcond(rc) {}

Matrix external_injection(const BoundaryIndex& index) {
  Matrix e = Matrix::Zero(index.dim(), index.external_slots().size());
  for (std::size_t c = 0; c < index.external_slots().size(); ++c)
    e(index.external_slots()[c], static_cast<Eigen::Index>(c)) = 1.0;
  return e;
}

Matrix chi_coefficients(const BoundaryConditions& bc, const MetricGraph& g,
                        const BoundaryIndex& index,
                        const SpectralParams& params) {
  auto [z, det] = secular_matrix(bc, g, index, params);
  const double rcond = reciprocal_condition(z);
  if (rcond < kSingularRcond) throw ResonanceError(params, rcond);
  const Matrix bi = bc.B * i_diagonal(index, params).asDiagonal();
  const Matrix rhs = (bc.A - bi) * external_injection(index);
  return -z.partialPivLu().solve(rhs);
}

SecularAssembly assemble(const BoundaryConditions& bc, const MetricGraph& g,
                         const BoundaryIndex& index,
                         const SpectralParams& params) {
  SecularAssembly out{params};
  std::tie(out.X, out.Y) = build_xy(g, index, params);
  out.I_diag = i_diagonal(index, params);
  out.W_diag = w_diagonal(index, params);
  TransferMatrices rt = build_rt(g, index, params);
  out.R_plus = std::move(rt.R_plus);
  out.R_minus = std::move(rt.R_minus);
  out.T = std::move(rt.T);
  out.Z = bc.A * out.X + bc.B * out.Y;
  {
    auto [z, det] = secular_matrix(bc, g, index, params);
    (void)z;
    out.det = det;
  }
  out.z_rcond = reciprocal_condition(out.Z);
  out.z_singular = out.z_rcond < kSingularRcond;

  const Matrix bi = bc.B * out.I_diag.asDiagonal();
  const Matrix plus = bc.A + bi;
  out.cm_rcond = reciprocal_condition(plus);
  out.cm_pole = out.cm_rcond < kSingularRcond;
  if (!out.cm_pole) out.Cm = -plus.partialPivLu().solve(bc.A - bi);

  if (!out.z_singular) {
    const Matrix rhs = (bc.A - bi) * external_injection(index);
    out.chi = -out.Z.partialPivLu().solve(rhs);
  }
  return out;
}

}  // namespace sgnlap
