#include "sgnlap/scattering.hpp"

#include <cmath>

namespace sgnlap {

AcSpectrumInfo ac_spectrum(const MetricGraph& g) {
  AcSpectrumInfo info;
  info.multiplicity_positive = static_cast<int>(g.count_external(Sign::positive));
  info.multiplicity_negative = static_cast<int>(g.count_external(Sign::negative));
  return info;
}

SpectralParams wave_params(WaveBranch branch, double k) {
  switch (branch) {
    case WaveBranch::positive:
      return SpectralParams::positive_energy(k);
    case WaveBranch::positive_conjugate:
      return SpectralParams::positive_energy_conjugate(k);
    case WaveBranch::negative:
      return SpectralParams::negative_energy(k);
    case WaveBranch::negative_conjugate:
      return SpectralParams::negative_energy_conjugate(k);
  }
  throw std::logic_error("unhandled wave branch");
}

std::vector<Complex> generalized_eigenfunction(
    const BoundaryConditions& bc, const MetricGraph& g,
    const std::string& incoming_edge, WaveBranch branch, double k,
    const std::vector<EdgePoint>& points) {
  const BoundaryIndex index(g);
  if (!g.find_external(incoming_edge))
    throw std::invalid_argument("incoming edge must be external");
  const SpectralParams params = wave_params(branch, k);
  const Matrix chi = chi_coefficients(bc, g, index, params);

  int column = -1;
  for (std::size_t c = 0; c < index.external_slots().size(); ++c)
    if (index.slots()[index.external_slots()[c]].edge_id == incoming_edge)
      column = static_cast<int>(c);

  std::vector<Complex> values;
  values.reserve(points.size());
  for (const auto& p : points) {
    Complex v(0.0);
    if (const ExternalEdge* e = g.find_external(p.edge)) {
      const Complex z = params.z(e->sign);
      v = chi(index.slot(p.edge, Endpoint::origin), column) *
          std::exp(kImag * z * p.x);
      if (p.edge == incoming_edge) v += std::exp(-kImag * z * p.x);
    } else if (const InternalEdge* e = g.find_internal(p.edge)) {
      const Complex z = params.z(e->sign);
      v = chi(index.slot(p.edge, Endpoint::origin), column) *
              std::exp(kImag * z * p.x) +
          chi(index.slot(p.edge, Endpoint::terminus), column) *
              std::exp(-kImag * z * p.x);
    } else {
      throw std::invalid_argument("unknown edge " + p.edge);
    }
    values.push_back(v);
  }
  return values;
}

namespace {

/// chi restricted to the external slots, rows and columns E+ then E-.
Matrix external_block(const Matrix& chi, const BoundaryIndex& index) {
  const auto& ext = index.external_slots();
  Matrix out(ext.size(), ext.size());
  for (std::size_t r = 0; r < ext.size(); ++r)
    for (std::size_t c = 0; c < ext.size(); ++c)
      out(r, c) = chi(ext[r], static_cast<Eigen::Index>(c));
  return out;
}

double unitarity_defect(const Matrix& s) {
  return (s.adjoint() * s - Matrix::Identity(s.rows(), s.cols())).norm();
}

}  // namespace

ScatteringMatrixResult scattering_matrix(const BoundaryConditions& bc,
                                         const MetricGraph& g, double lambda) {
  if (lambda == 0.0) throw std::invalid_argument("lambda must be nonzero");
  const BoundaryIndex index(g);
  const Sign sign = lambda > 0.0 ? Sign::positive : Sign::negative;
  const int count = static_cast<int>(g.count_external(sign));
  if (count == 0)
    throw std::invalid_argument(
        "no external edges carry the requested energy sign");

  // Positive energies pair with (k, ik). Negative energies use the
  // conjugate branch (i kappa, -kappa); this reproduces the closed-form
  // S-matrices of the worked examples and equals the adjoint of the
  // (i kappa, kappa) block by unitarity.
  const double root = std::sqrt(std::abs(lambda));
  const SpectralParams params = lambda > 0.0
                                    ? SpectralParams::positive_energy(root)
                                    : SpectralParams::negative_energy_conjugate(root);
  const Matrix chi = chi_coefficients(bc, g, index, params);
  const Matrix ee = external_block(chi, index);

  ScatteringMatrixResult res;
  const int e_plus = static_cast<int>(g.count_external(Sign::positive));
  res.S = lambda > 0.0 ? ee.topLeftCorner(e_plus, e_plus)
                       : ee.bottomRightCorner(count, count);
  res.unitarity_residual = unitarity_defect(res.S);
  for (const auto& e : g.external_edges())
    if (e.sign == sign) res.edge_ids.push_back(e.id);
  return res;
}

ScatteringData scattering_data(const BoundaryConditions& bc,
                               const MetricGraph& g, double k) {
  const BoundaryIndex index(g);
  ScatteringData data;
  data.k = k;
  data.e_plus = static_cast<int>(g.count_external(Sign::positive));
  data.e_minus = static_cast<int>(g.count_external(Sign::negative));
  data.chi_EE = external_block(
      chi_coefficients(bc, g, index, SpectralParams::positive_energy(k)), index);
  for (Sign s : {Sign::positive, Sign::negative})
    for (const auto& e : g.external_edges())
      if (e.sign == s) data.edges.push_back(e.id);
  return data;
}

Matrix star_product_glue(const ScatteringData& d1, const ScatteringData& d2,
                         const std::vector<double>& lengths,
                         double rcond_min) {
  if (d1.e_minus != d2.e_minus)
    throw std::invalid_argument(
        "star product requires equally many negative channels");
  const int p = d1.e_minus;
  if (static_cast<int>(lengths.size()) != p)
    throw std::invalid_argument("one length per glued channel required");
  if (d1.k != d2.k)
    throw std::invalid_argument("scattering data taken at different k");

  const double k = d1.k;
  Vector damp(p);
  for (int i = 0; i < p; ++i) damp(i) = std::exp(-k * lengths[i]);
  const Matrix d = damp.asDiagonal();

  const Matrix bracket1 =
      Matrix::Identity(p, p) - d1.mm() * d * d2.mm() * d;
  const Matrix bracket2 =
      Matrix::Identity(p, p) - d * d2.mm() * d * d1.mm();
  if (reciprocal_condition(bracket1) < rcond_min ||
      reciprocal_condition(bracket2) < rcond_min)
    throw std::domain_error("k lies in a critical set of the star product");

  const Matrix inv1 = bracket1.partialPivLu().solve(
      Matrix::Identity(p, p));
  const Matrix inv2 = bracket2.partialPivLu().solve(
      Matrix::Identity(p, p));

  const Matrix s11 = d1.pp() + d1.pm() * d * d2.mm() * d * inv1 * d1.mp();
  const Matrix s21 = d2.pm() * d * inv1 * d1.mp();
  const Matrix s12 = d1.pm() * inv2 * d * d2.mp();
  const Matrix s22 = d2.pp() + d2.pm() * d * d1.mm() * inv2 * d * d2.mp();

  Matrix s(d1.e_plus + d2.e_plus, d1.e_plus + d2.e_plus);
  s.topLeftCorner(d1.e_plus, d1.e_plus) = s11;
  s.topRightCorner(d1.e_plus, d2.e_plus) = s12;
  s.bottomLeftCorner(d2.e_plus, d1.e_plus) = s21;
  s.bottomRightCorner(d2.e_plus, d2.e_plus) = s22;
  return s;
}

PositiveGlueResult positive_edge_glue(const Matrix& s, int p, int q,
                                      double length, double k,
                                      double rcond_min) {
  const int dim = static_cast<int>(s.rows());
  if (p < 0 || q < 0 || p >= dim || q >= dim || p == q)
    throw std::invalid_argument("invalid channel pair");

  std::vector<int> rest;
  for (int i = 0; i < dim; ++i)
    if (i != p && i != q) rest.push_back(i);
  const int r = static_cast<int>(rest.size());

  Matrix s_rr(r, r), s_rg(r, 2), s_gr(2, r), s_gg(2, 2);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) s_rr(i, j) = s(rest[i], rest[j]);
  const int glued[2] = {p, q};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < 2; ++j) {
      s_rg(i, j) = s(rest[i], glued[j]);
      s_gr(j, i) = s(glued[j], rest[i]);
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s_gg(i, j) = s(glued[i], glued[j]);

  // Auxiliary vertex with continuity conditions: S_aux = antidiag(1, 1),
  // channel phases diag(e^{ika}, 1) on both sides.
  Matrix coupling(2, 2);
  coupling << 0.0, std::exp(kImag * k * length), std::exp(kImag * k * length),
      0.0;

  const Matrix bracket = Matrix::Identity(2, 2) - s_gg * coupling;
  PositiveGlueResult out;
  out.coupling_det = bracket.determinant();
  out.coupling_rcond = reciprocal_condition(bracket);
  if (out.coupling_rcond < rcond_min)
    throw std::domain_error("k lies in a critical set of the positive gluing");

  out.S = s_rr + s_rg * coupling * bracket.partialPivLu().solve(s_gr);
  return out;
}

GluedSystem glue_systems(
    const MetricGraph& g1, const BoundaryConditions& bc1, const MetricGraph& g2,
    const BoundaryConditions& bc2,
    const std::vector<std::pair<std::string, std::string>>& identified,
    const std::vector<double>& lengths) {
  GluedSystem out{glue_graphs(g1, g2, identified, lengths),
                  BoundaryConditions{}};
  const std::string prefix = glue_rename_prefix(g1, g2);

  const BoundaryIndex idx1(g1), idx2(g2), idx(out.graph);
  const int d = idx.dim();
  Matrix a = Matrix::Zero(d, d);
  Matrix b = Matrix::Zero(d, d);

  // Identified externals become the origin (graph 1 side) and terminus
  // (graph 2 side) of the new internal edges; everything else keeps its
  // slot under the possibly renamed id.
  auto new_slot = [&](const BoundaryIndex& old_index, int old_slot,
                      bool second) {
    const SlotInfo& info = old_index.slots()[old_slot];
    std::string id = second ? prefix + info.edge_id : info.edge_id;
    Endpoint end = info.kind == SlotInfo::Kind::internal_terminus
                       ? Endpoint::terminus
                       : Endpoint::origin;
    if (info.kind == SlotInfo::Kind::external) {
      for (const auto& [id1, id2] : identified) {
        if (!second && info.edge_id == id1) {
          id = id1;
          end = Endpoint::origin;
        } else if (second && info.edge_id == id2) {
          id = id1;  // glue edge inherits the graph 1 id
          end = Endpoint::terminus;
        }
      }
    }
    return idx.slot(id, end);
  };

  for (int r = 0; r < idx1.dim(); ++r)
    for (int c = 0; c < idx1.dim(); ++c) {
      a(r, new_slot(idx1, c, false)) += bc1.A(r, c);
      b(r, new_slot(idx1, c, false)) += bc1.B(r, c);
    }
  for (int r = 0; r < idx2.dim(); ++r)
    for (int c = 0; c < idx2.dim(); ++c) {
      a(idx1.dim() + r, new_slot(idx2, c, true)) += bc2.A(r, c);
      b(idx1.dim() + r, new_slot(idx2, c, true)) += bc2.B(r, c);
    }

  out.bc = BoundaryConditions{std::move(a), std::move(b), idx.n(), idx.m()};
  return out;
}

}  // namespace sgnlap
