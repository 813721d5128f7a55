#pragma once

#include <vector>

#include "sgnlap/secular.hpp"

namespace sgnlap {

/// Which energy half-line is searched. The positive branch solves
/// det Z(k, ik) = 0 for k > 0 (lambda = k^2), the negative branch solves
/// det Z(i kappa, kappa) = 0 for kappa > 0 (lambda = -kappa^2).
enum class Branch { positive, negative };

SpectralParams branch_params(Branch branch, double root);

struct EigenvalueEntry {
  double lambda;
  double root;  // k or kappa
  int multiplicity;
  double residual;  // |det_scaled| at the root
  bool at_range_boundary = false;
};

struct ResonanceEntry {
  Branch branch;
  double root;
  double residual;
  bool is_eigenvalue;  // L2 side condition also satisfiable
  Vector external_kernel;  // external components of one kernel vector
};

struct ScanOptions {
  double bracket_threshold = 1e-2;  // |det_scaled| dip that opens a bracket
  double accept_residual = 1e-9;
  double multiplicity_sigma = 1e-7;  // sigma_i <= this * sigma_max counts
  int max_step_halvings = 3;
};

/// Scans |det_scaled| over a uniform grid on [k_min, k_max], brackets the
/// dips and refines each by complex secant with a golden-section fallback.
/// Roots keep only the kernel directions that vanish on the external slots
/// of the branch sign (square integrability); roots whose restricted
/// kernel is empty are resonances and are not reported here.
std::vector<EigenvalueEntry> find_eigenvalues(const BoundaryConditions& bc,
                                              const MetricGraph& g,
                                              Branch branch, double k_min,
                                              double k_max, double grid_step,
                                              const ScanOptions& opts = {});

/// Same scan without the side condition; every root of the resonance
/// equation is reported and annotated whether it is also an eigenvalue.
std::vector<ResonanceEntry> find_resonances(const BoundaryConditions& bc,
                                            const MetricGraph& g, Branch branch,
                                            double k_min, double k_max,
                                            double grid_step,
                                            const ScanOptions& opts = {});

/// Boundary-value matrices of the affine zero-energy Ansatz
/// psi = alpha + beta x on internal edges, zero on external edges.
std::pair<Matrix, Matrix> zero_mode_matrices(const MetricGraph& g,
                                             const BoundaryIndex& index);

/// dim Ker T(A,B) at energy zero: the nullity of A X0 + B Y0, intersected
/// with the external-zero subspace when the graph has external edges.
int zero_mode_dimension(const BoundaryConditions& bc, const MetricGraph& g);

struct CountingSample {
  double lambda;
  int count;          // N(lambda), eigenvalues strictly below lambda
  double weyl_ratio;  // N(lambda) * pi / sqrt(lambda)
};

/// Samples of the eigenvalue counting function of one branch up to
/// lambda_max, one sample per eigenvalue plus a final one at lambda_max.
/// The Weyl law predicts weyl_ratio -> sum of same-sign internal lengths.
/// Requires a compact graph, or a graph without external edges of the
/// branch sign.
std::vector<CountingSample> counting_function(const BoundaryConditions& bc,
                                              const MetricGraph& g,
                                              Branch branch, double lambda_max,
                                              double grid_step,
                                              const ScanOptions& opts = {});

struct SpectrumReport {
  std::vector<EigenvalueEntry> positive_eigenvalues;
  std::vector<EigenvalueEntry> negative_eigenvalues;
  int zero_dimension = 0;
  std::vector<ResonanceEntry> resonances;
  double k_min = 0.0, k_max = 0.0, grid_step = 0.0;
};

/// Convenience wrapper running both branches, the zero mode count and the
/// resonance scans with shared options.
SpectrumReport full_spectrum(const BoundaryConditions& bc, const MetricGraph& g,
                             double k_min, double k_max, double grid_step,
                             const ScanOptions& opts = {});

}  // namespace sgnlap
