#pragma once

#include <string>
#include <vector>

#include "sgnlap/resolvent.hpp"
#include "sgnlap/secular.hpp"

namespace sgnlap {

/// Absolutely continuous spectrum of T(A,B); it depends on the external
/// edges only. Empty pieces carry multiplicity zero.
struct AcSpectrumInfo {
  int multiplicity_positive = 0;  // on (0, inf), equals |E+|
  int multiplicity_negative = 0;  // on (-inf, 0), equals |E-|

  bool empty() const {
    return multiplicity_positive == 0 && multiplicity_negative == 0;
  }
};

AcSpectrumInfo ac_spectrum(const MetricGraph& g);

/// Parameter branches of the generalized eigenfunctions.
enum class WaveBranch {
  positive,             // (k, ik)
  positive_conjugate,   // (-k, ik)
  negative,             // (i kappa, kappa)
  negative_conjugate,   // (i kappa, -kappa)
};

SpectralParams wave_params(WaveBranch branch, double k);

/// Values of the generalized eigenfunction with incoming wave on the
/// external edge l: e^{-izx} on edge l plus the outgoing/decaying terms
/// with coefficients from the chi column of l. Throws ResonanceError at a
/// resonance and std::invalid_argument when l is not external.
std::vector<Complex> generalized_eigenfunction(
    const BoundaryConditions& bc, const MetricGraph& g,
    const std::string& incoming_edge, WaveBranch branch, double k,
    const std::vector<EdgePoint>& points);

struct ScatteringMatrixResult {
  Matrix S;
  double unitarity_residual;          // ||S* S - 1||_F
  std::vector<std::string> edge_ids;  // rows/cols of S
};

/// Scattering matrix of (T(A,B), T(0,1)) at energy lambda != 0: the
/// chi_{++}(k, ik) block for lambda = k^2 > 0 and the chi_{--}(i kappa,
/// -kappa) block for lambda = -kappa^2 < 0, both unitary off resonances.
ScatteringMatrixResult scattering_matrix(const BoundaryConditions& bc,
                                         const MetricGraph& g, double lambda);

/// External restriction of chi at (k, ik) with its sign block structure,
/// the input of the star-product composition.
struct ScatteringData {
  double k = 0.0;
  Matrix chi_EE;  // |E| x |E|, rows/cols ordered E+ then E-
  int e_plus = 0;
  int e_minus = 0;
  std::vector<std::string> edges;  // E+ then E-

  Matrix pp() const { return chi_EE.topLeftCorner(e_plus, e_plus); }
  Matrix pm() const { return chi_EE.topRightCorner(e_plus, e_minus); }
  Matrix mp() const { return chi_EE.bottomLeftCorner(e_minus, e_plus); }
  Matrix mm() const { return chi_EE.bottomRightCorner(e_minus, e_minus); }
};

ScatteringData scattering_data(const BoundaryConditions& bc,
                               const MetricGraph& g, double k);

/// Generalized star product: the scattering matrix of the graph obtained
/// by gluing all negative external edges of d1 pairwise (in order) to
/// those of d2 through new internal edges of the given lengths. Result is
/// indexed by E+ of d1 followed by E+ of d2. Throws std::domain_error
/// when k lies in a critical set (the bracketed matrices lose
/// invertibility, reciprocal condition below rcond_min).
Matrix star_product_glue(const ScatteringData& d1, const ScatteringData& d2,
                         const std::vector<double>& lengths,
                         double rcond_min = 1e-10);

/// Gluing of two positive external channels p and q of one scattering
/// matrix through an internal edge of the given length, realized by the
/// auxiliary two-edge graph with continuity conditions and the channel
/// factor diag(e^{ika}, 1). `coupling_det` is det(1 - S_gg M); its zeros
/// in k locate the poles of the composition.
struct PositiveGlueResult {
  Matrix S;  // remaining channels, original order with p and q removed
  Complex coupling_det;
  double coupling_rcond;
};

PositiveGlueResult positive_edge_glue(const Matrix& s, int p, int q,
                                      double length, double k,
                                      double rcond_min = 1e-10);

/// Glued graph together with the block boundary conditions
/// diag(A1, A2), diag(B1, B2) transported to the canonical slot order of
/// the glued graph. This is the direct-computation counterpart of
/// star_product_glue.
struct GluedSystem {
  MetricGraph graph;
  BoundaryConditions bc;
};

GluedSystem glue_systems(
    const MetricGraph& g1, const BoundaryConditions& bc1, const MetricGraph& g2,
    const BoundaryConditions& bc2,
    const std::vector<std::pair<std::string, std::string>>& identified,
    const std::vector<double>& lengths);

}  // namespace sgnlap
