#pragma once

#include <string>
#include <utility>

#include "sgnlap/graph.hpp"
#include "sgnlap/linalg.hpp"

namespace sgnlap {

/// Boundary conditions A psi + B psi' = 0 on the boundary space K.
/// A and B are (n+m)x(n+m); rows are conditions, columns follow the
/// canonical slot order of BoundaryIndex. Immutable value type.
struct BoundaryConditions {
  Matrix A;
  Matrix B;
  int n = 0;
  int m = 0;

  int dim() const { return n + m; }
};

/// Shape-checked constructor.
BoundaryConditions make_bc(Matrix a, Matrix b, const BoundaryIndex& index);

/// The signature matrices of the boundary space: J = diag(1_n, -1_m) on K
/// and H = diag(1_n, 1_m, 1_n, -1_m) on K^2.
struct SignatureMatrices {
  Matrix J;
  Matrix H;

  static SignatureMatrices for_dims(int n, int m);
};

/// diag(1_n, -1_m) as a vector, the workhorse form of J.
Eigen::VectorXd j_diagonal(int n, int m);

struct SelfAdjointReport {
  bool rank_ok = false;
  bool symmetry_ok = false;
  double rank_residual = 0.0;      // sigma_min/sigma_max of (A | B)
  double symmetry_residual = 0.0;  // ||B S A* - A S B*||_F / (||A||+||B||)^2

  bool ok() const { return rank_ok && symmetry_ok; }
};

/// Self-adjointness test for the sign-indefinite operator: maximal rank of
/// (A|B) and B J A* = A J B*. Returns a report, never throws.
SelfAdjointReport check_self_adjoint(const BoundaryConditions& bc,
                                     double tol = 1e-10);

/// Same test with J replaced by the identity; this characterizes the
/// self-adjoint Laplacian -Delta(A,B) and hence the Krein-space
/// self-adjoint realizations.
SelfAdjointReport check_laplacian_self_adjoint(const BoundaryConditions& bc,
                                               double tol = 1e-10);

/// Unique normal form of self-adjoint boundary conditions: P is the
/// orthogonal projector onto Ker(B J), L is Hermitian with P L = L P = 0,
/// and (L + P, P_perp J) describes the same conditions.
struct ProjectorForm {
  Matrix P;
  Matrix L;
};

/// Throws std::invalid_argument when bc fails check_self_adjoint.
ProjectorForm to_projector_form(const BoundaryConditions& bc);

/// Equivalent boundary conditions from the projector form.
BoundaryConditions bc_from_projector_form(const ProjectorForm& pf, int n, int m);

/// A = -(U - 1)/2, B = (U + 1) J / (2i). Throws when U is not unitary.
BoundaryConditions from_unitary(const Matrix& u, const BoundaryIndex& index);

/// Unitary parametrizing the conditions, recovered through the Laplacian
/// pair (A, B J): U = -(A + i B J)^{-1} (A - i B J). Requires self-adjoint
/// bc. from_unitary(to_unitary(bc)) is subspace-equal to bc.
Matrix to_unitary(const BoundaryConditions& bc);

/// True iff Ker(A1|B1) = Ker(A2|B2) as subspaces of K^2, decided by the
/// numerical rank of the stacked block matrix.
bool subspace_equal(const BoundaryConditions& a, const BoundaryConditions& b);

/// Local vertex matrices of the signed continuity/derivative-balance
/// coupling: d-1 continuity rows (1, -1 chain) in A_v and one derivative
/// row in B_v with +1 on positive slots and -1 on negative slots. The
/// local slot order is the deg_plus positive slots first.
std::pair<Matrix, Matrix> standard_signed_vertex(int deg_plus, int deg_minus);

/// Assembles the standard signed conditions at every vertex of g into a
/// global (A, B) in canonical slot order.
BoundaryConditions standard_signed_conditions(const MetricGraph& g,
                                              const BoundaryIndex& index);

/// sum of positive internal lengths minus sum of negative internal
/// lengths; the form-method invertibility criterion reads margin != 0.
/// Throws when the graph has external edges.
double form_invertibility_margin(const MetricGraph& g);

/// Parses the boundary-condition document. Kinds:
///   {"kind":"matrix","A":[[[re,im],...],...],"B":[[...]]}
///   {"kind":"unitary","U":[[[re,im],...],...]}
///   {"kind":"standard_signed_vertices"}
BoundaryConditions parse_bc(const std::string& json_text, const MetricGraph& g,
                            const BoundaryIndex& index);

std::string write_bc(const BoundaryConditions& bc);

}  // namespace sgnlap
