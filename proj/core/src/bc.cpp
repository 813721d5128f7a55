#include "sgnlap/bc.hpp"

#include <map>

#include <json.hpp>

namespace sgnlap {

BoundaryConditions make_bc(Matrix a, Matrix b, const BoundaryIndex& index) {
  const int d = index.dim();
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
    throw std::invalid_argument("boundary condition matrices must be " +
                                std::to_string(d) + "x" + std::to_string(d));
  return {std::move(a), std::move(b), index.n(), index.m()};
}

Eigen::VectorXd j_diagonal(int n, int m) {
  Eigen::VectorXd j(n + m);
  j.head(n).setOnes();
  j.tail(m).setConstant(-1.0);
  return j;
}

SignatureMatrices SignatureMatrices::for_dims(int n, int m) {
  SignatureMatrices s;
  s.J = j_diagonal(n, m).cast<Complex>().asDiagonal();
  Eigen::VectorXd h(2 * (n + m));
  h.setOnes();
  h.tail(m).setConstant(-1.0);
  s.H = h.cast<Complex>().asDiagonal();
  return s;
}

namespace {

SelfAdjointReport check_with_signature(const BoundaryConditions& bc,
                                       const Eigen::VectorXd& sig, double tol) {
  SelfAdjointReport rep;
  const int d = bc.dim();

  Matrix ab(d, 2 * d);
  ab << bc.A, bc.B;
  Eigen::JacobiSVD<Matrix> svd(ab);
  const auto& s = svd.singularValues();
  rep.rank_residual = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
  rep.rank_ok = numerical_rank(ab) == d;

  const Matrix lhs = bc.B * sig.cast<Complex>().asDiagonal() * bc.A.adjoint();
  const Matrix rhs = bc.A * sig.cast<Complex>().asDiagonal() * bc.B.adjoint();
  const double scale = bc.A.norm() + bc.B.norm();
  rep.symmetry_residual =
      scale > 0.0 ? (lhs - rhs).norm() / (scale * scale) : 0.0;
  rep.symmetry_ok = rep.symmetry_residual <= tol;
  return rep;
}

}  // namespace

SelfAdjointReport check_self_adjoint(const BoundaryConditions& bc, double tol) {
  return check_with_signature(bc, j_diagonal(bc.n, bc.m), tol);
}

SelfAdjointReport check_laplacian_self_adjoint(const BoundaryConditions& bc,
                                               double tol) {
  return check_with_signature(bc, Eigen::VectorXd::Ones(bc.dim()), tol);
}

ProjectorForm to_projector_form(const BoundaryConditions& bc) {
  if (!check_self_adjoint(bc).ok())
    throw std::invalid_argument(
        "projector form requires self-adjoint boundary conditions");

  const Matrix j = j_diagonal(bc.n, bc.m).cast<Complex>().asDiagonal();
  const Matrix bj = bc.B * j;

  ProjectorForm pf;
  const Matrix kernel = null_space(bj);
  pf.P = kernel.cols() > 0 ? Matrix(kernel * kernel.adjoint())
                           : Matrix::Zero(bc.dim(), bc.dim());
  const Matrix p_perp = Matrix::Identity(bc.dim(), bc.dim()) - pf.P;

  // The corollary gives existence and uniqueness but no construction;
  // the pseudoinverse of B J recovers L on Ran P_perp.
  const Matrix l_raw = p_perp * pseudo_inverse(bj) * bc.A * p_perp;
  pf.L = 0.5 * (l_raw + l_raw.adjoint());

  const BoundaryConditions normal = bc_from_projector_form(pf, bc.n, bc.m);
  if (!subspace_equal(bc, normal))
    throw std::runtime_error("projector form verification failed");
  return pf;
}

BoundaryConditions bc_from_projector_form(const ProjectorForm& pf, int n,
                                          int m) {
  const Matrix j = j_diagonal(n, m).cast<Complex>().asDiagonal();
  const Matrix p_perp = Matrix::Identity(n + m, n + m) - pf.P;
  return {pf.L + pf.P, p_perp * j, n, m};
}

BoundaryConditions from_unitary(const Matrix& u, const BoundaryIndex& index) {
  const int d = index.dim();
  if (u.rows() != d || u.cols() != d)
    throw std::invalid_argument("unitary has wrong dimension");
  const double defect = (u.adjoint() * u - Matrix::Identity(d, d)).norm();
  if (defect > 1e-10 * std::max(1.0, u.norm() * u.norm()))
    throw std::invalid_argument("matrix is not unitary");

  const Matrix j = j_diagonal(index.n(), index.m()).cast<Complex>().asDiagonal();
  Matrix a = -0.5 * (u - Matrix::Identity(d, d));
  Matrix b = (u + Matrix::Identity(d, d)) * j / (2.0 * kImag);
  return {std::move(a), std::move(b), index.n(), index.m()};
}

Matrix to_unitary(const BoundaryConditions& bc) {
  if (!check_self_adjoint(bc).ok())
    throw std::invalid_argument(
        "unitary parametrization requires self-adjoint boundary conditions");
  const Matrix j = j_diagonal(bc.n, bc.m).cast<Complex>().asDiagonal();
  const Matrix b0 = bc.B * j;  // Laplacian pair (A, B J)
  return -solve(bc.A + kImag * b0, bc.A - kImag * b0);
}

bool subspace_equal(const BoundaryConditions& a, const BoundaryConditions& b) {
  if (a.dim() != b.dim()) return false;
  const int d = a.dim();
  Matrix top(d, 2 * d), bottom(d, 2 * d), stacked(2 * d, 2 * d);
  top << a.A, a.B;
  bottom << b.A, b.B;
  stacked << top, bottom;
  const int ra = numerical_rank(top);
  const int rb = numerical_rank(bottom);
  return ra == rb && numerical_rank(stacked) == ra;
}

std::pair<Matrix, Matrix> standard_signed_vertex(int deg_plus, int deg_minus) {
  const int d = deg_plus + deg_minus;
  if (d < 1) throw std::invalid_argument("vertex degree must be positive");
  Matrix a = Matrix::Zero(d, d);
  Matrix b = Matrix::Zero(d, d);
  for (int r = 0; r + 1 < d; ++r) {
    a(r, r) = 1.0;
    a(r, r + 1) = -1.0;
  }
  for (int c = 0; c < d; ++c) b(d - 1, c) = c < deg_plus ? 1.0 : -1.0;
  return {std::move(a), std::move(b)};
}

BoundaryConditions standard_signed_conditions(const MetricGraph& g,
                                              const BoundaryIndex& index) {
  const int d = index.dim();
  Matrix a = Matrix::Zero(d, d);
  Matrix b = Matrix::Zero(d, d);

  // Boundary slots incident to each vertex, positive slots first (the
  // canonical order already groups by sign).
  std::map<std::string, std::vector<int>> star;
  for (int s = 0; s < d; ++s) {
    const SlotInfo& info = index.slots()[s];
    const std::string* v = nullptr;
    switch (info.kind) {
      case SlotInfo::Kind::external:
        v = &g.external_edges()[info.edge_index].at;
        break;
      case SlotInfo::Kind::internal_origin:
        v = &g.internal_edges()[info.edge_index].from;
        break;
      case SlotInfo::Kind::internal_terminus:
        v = &g.internal_edges()[info.edge_index].to;
        break;
    }
    star[*v].push_back(s);
  }

  int row = 0;
  for (const auto& v : g.vertices()) {
    auto it = star.find(v);
    if (it == star.end()) continue;
    // Slots arrive in canonical order, so positives already precede
    // negatives inside each star.
    const auto& slots = it->second;
    const int deg = static_cast<int>(slots.size());
    for (int r = 0; r + 1 < deg; ++r) {
      a(row, slots[r]) = 1.0;
      a(row, slots[r + 1]) = -1.0;
      ++row;
    }
    for (int c = 0; c < deg; ++c)
      b(row, slots[c]) =
          index.slots()[slots[c]].sign == Sign::positive ? 1.0 : -1.0;
    ++row;
  }
  if (row != d)
    throw std::logic_error("vertex stars do not exhaust the boundary space");
  return {std::move(a), std::move(b), index.n(), index.m()};
}

double form_invertibility_margin(const MetricGraph& g) {
  if (!g.compact())
    throw std::invalid_argument(
        "invertibility margin is defined for compact graphs only");
  return g.total_length(Sign::positive) - g.total_length(Sign::negative);
}

namespace {

Matrix parse_complex_matrix(const nlohmann::json& rows, const char* name) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(name) +
                                " must be a non-empty array of rows");
  const std::size_t nrows = rows.size();
  const std::size_t ncols = rows[0].size();
  Matrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    if (rows[i].size() != ncols)
      throw std::invalid_argument(std::string(name) + " rows differ in length");
    for (std::size_t j = 0; j < ncols; ++j) {
      const auto& cell = rows[i][j];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument(std::string(name) +
                                    " entries must be [re, im] pairs");
      out(i, j) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return out;
}

nlohmann::ordered_json dump_complex_matrix(const Matrix& mat) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < mat.cols(); ++j)
      row.push_back({mat(i, j).real(), mat(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BoundaryConditions parse_bc(const std::string& json_text, const MetricGraph& g,
                            const BoundaryIndex& index) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("boundary document: ") + err.what());
  }
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "matrix")
    return make_bc(parse_complex_matrix(doc.at("A"), "A"),
                   parse_complex_matrix(doc.at("B"), "B"), index);
  if (kind == "unitary")
    return from_unitary(parse_complex_matrix(doc.at("U"), "U"), index);
  if (kind == "standard_signed_vertices")
    return standard_signed_conditions(g, index);
  throw std::invalid_argument("unknown boundary condition kind: " + kind);
}

std::string write_bc(const BoundaryConditions& bc) {
  nlohmann::ordered_json doc;
  doc["kind"] = "matrix";
  doc["A"] = dump_complex_matrix(bc.A);
  doc["B"] = dump_complex_matrix(bc.B);
  return doc.dump(2);
}

}  // namespace sgnlap
