#include <doctest.h>

#include <cmath>
#include <random>

#include <sgnlap/secular.hpp>

#include "test_graphs.hpp"
#include "test_random.hpp"

using namespace sgnlap;

namespace {

const Complex kI(0.0, 1.0);

Matrix expected_cm_line(double k, double kappa) {
  Matrix cm(2, 2);
  const double den = kappa * kappa + k * k;
  cm << Complex(k * k - kappa * kappa, 2.0 * kappa * k),
      Complex(2.0 * kappa * kappa, -2.0 * kappa * k),
      Complex(2.0 * k * k, 2.0 * kappa * k),
      Complex(k * k - kappa * kappa, -2.0 * kappa * k);
  return cm / den;
}

}  // namespace

TEST_CASE("single external edge templates") {
  const MetricGraph g({"v"}, {{"e", Sign::positive, "v"}}, {});
  const BoundaryIndex idx(g);
  const auto [x, y] = build_xy(g, idx, SpectralParams::positive_energy(1.7));
  CHECK(x(0, 0) == Complex(1.0));
  CHECK(std::abs(y(0, 0) - kI * 1.7) < 1e-15);
}

TEST_CASE("two vertex templates at (k, ik) match the worked example") {
  const double k = 0.8, a = 1.3;
  const auto g = fixtures::two_vertex_graph(a);
  const BoundaryIndex idx(g);
  const auto [x, y] = build_xy(g, idx, SpectralParams::positive_energy(k));

  // slots: e1, e2, i3 origin, i3 terminus; coefficients s1, s2, alpha, beta
  Matrix xe = Matrix::Zero(4, 4), ye = Matrix::Zero(4, 4);
  xe(0, 0) = 1.0;
  xe(1, 1) = 1.0;
  xe(2, 2) = 1.0;
  xe(2, 3) = 1.0;
  xe(3, 2) = std::exp(-k * a);
  xe(3, 3) = std::exp(k * a);
  ye(0, 0) = kI * k;
  ye(1, 1) = kI * k;
  ye(2, 2) = -k;
  ye(2, 3) = k;
  ye(3, 2) = k * std::exp(-k * a);
  ye(3, 3) = -k * std::exp(k * a);

  CHECK((x - xe).norm() < 1e-13 * xe.norm());
  CHECK((y - ye).norm() < 1e-13 * ye.norm());
}

TEST_CASE("Dirichlet interval spectrum shows in the secular determinant") {
  const double a = 0.9;
  const auto g = fixtures::single_edge(Sign::positive, a);
  const BoundaryIndex idx(g);
  const auto bc = fixtures::dirichlet(idx);
  for (double k : {0.5, 1.0, 2.7}) {
    const auto [z, det] =
        secular_matrix(bc, g, idx, SpectralParams::positive_energy(k));
    (void)z;
    CHECK(std::abs(det.det - Complex(0.0, -2.0 * std::sin(k * a))) < 1e-12);
  }
  const double root = 2.0 * M_PI / a;
  const auto [z, det] =
      secular_matrix(bc, g, idx, SpectralParams::positive_energy(root));
  (void)z;
  CHECK(std::abs(det.det) < 1e-12);
}

TEST_CASE("line model determinant is kappa + ik") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = fixtures::real_line_bc(idx);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  for (int t = 0; t < 20; ++t) {
    const double k = dist(rng), kappa = dist(rng);
    const auto [z, det] = secular_matrix(
        bc, g, idx, SpectralParams(Complex(k), Complex(0, kappa)));
    (void)z;
    CHECK(std::abs(det.det - Complex(kappa, k)) < 1e-12);
  }
}

TEST_CASE("three star determinant is kappa + 2ik") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);
  const double k = 1.4, kappa = 0.6;
  const auto [z, det] =
      secular_matrix(bc, g, idx, SpectralParams(Complex(k), Complex(0, kappa)));
  (void)z;
  CHECK(std::abs(det.det - Complex(kappa, 2.0 * k)) < 1e-12);
}

TEST_CASE("two vertex negative-branch determinant is proportional to kappa^2 cos(a kappa)") {
  const double a = 1.1;
  const auto g = fixtures::two_vertex_graph(a);
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);

  auto det_at = [&](double kappa) {
    const auto [z, det] =
        secular_matrix(bc, g, idx, SpectralParams::negative_energy(kappa));
    (void)z;
    return det.det;
  };
  const Complex c0 = det_at(0.5) / (0.25 * std::cos(a * 0.5));
  CHECK(std::abs(c0) > 1e-6);
  for (double kappa : {0.3, 0.9, 1.7, 2.2}) {
    const Complex expected = c0 * kappa * kappa * std::cos(a * kappa);
    CHECK(std::abs(det_at(kappa) - expected) < 1e-10 * std::abs(c0));
  }
}

TEST_CASE("coefficient matrix of the line model") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = fixtures::real_line_bc(idx);

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> dist(0.05, 8.0);
  for (int t = 0; t < 100; ++t) {
    const double k = dist(rng), kappa = dist(rng);
    const auto cm =
        coefficient_matrix(bc, idx, SpectralParams(Complex(k), Complex(0, kappa)));
    CHECK((cm.Cm - expected_cm_line(k, kappa)).norm() < 1e-12);
  }

  Matrix cm_pos(2, 2);
  cm_pos << kI, Complex(1.0, -1.0), Complex(1.0, 1.0), -kI;
  for (double k : {0.3, 1.0, 4.2}) {
    const auto cm = coefficient_matrix(bc, idx, SpectralParams::positive_energy(k));
    CHECK((cm.Cm - cm_pos).norm() < 1e-12);
  }
}

TEST_CASE("decoupled coefficient matrices") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const auto params = SpectralParams::positive_energy(1.0);

  const auto dir = coefficient_matrix(fixtures::dirichlet(idx), idx, params);
  CHECK((dir.Cm + Matrix::Identity(3, 3)).norm() < 1e-14);

  const auto neu = coefficient_matrix(fixtures::neumann(idx), idx, params);
  CHECK((neu.Cm - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("transfer matrices and the secular factorization") {
  const double a = 0.7;
  const auto g = fixtures::two_vertex_graph(a);
  const BoundaryIndex idx(g);
  const auto params = SpectralParams::positive_energy(1.2);
  const auto rt = build_rt(g, idx, params);

  const Complex phase = std::exp(kI * params.z_minus * a);
  CHECK(rt.T(idx.slot("i3", Endpoint::origin), idx.slot("i3", Endpoint::terminus)) ==
        phase);
  CHECK(rt.T(idx.slot("i3", Endpoint::terminus), idx.slot("i3", Endpoint::origin)) ==
        phase);
  CHECK(rt.T.cwiseAbs().sum() == doctest::Approx(2.0 * std::abs(phase)));

  // R+- reproduce (X +- I^{-1} Y)/2
  const auto [x, y] = build_xy(g, idx, params);
  const Matrix i_inv_y =
      i_diagonal(idx, params).cwiseInverse().asDiagonal() * y;
  CHECK((rt.R_plus - 0.5 * (x + i_inv_y)).norm() < 1e-13);
  CHECK((rt.R_minus - 0.5 * (x - i_inv_y)).norm() < 1e-13);
}

TEST_CASE("factorization identity on random systems") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> kdist(0.2, 3.0);

  const auto g = MetricGraph(
      {"v1", "v2"},
      {{"e1", Sign::positive, "v1"}, {"e2", Sign::negative, "v2"}},
      {{"i1", Sign::positive, "v1", "v2", 0.8},
       {"i2", Sign::negative, "v1", "v2", 1.4}});
  const BoundaryIndex idx(g);

  int checked = 0;
  while (checked < 40) {
    const auto bc = from_unitary(fixtures::random_unitary(idx.dim(), rng), idx);
    const SpectralParams params(Complex(kdist(rng), 0.3 * kdist(rng)),
                                Complex(-0.2 * kdist(rng), kdist(rng)));
    SecularAssembly asm_ = assemble(bc, g, idx, params);
    if (asm_.cm_pole) continue;
    const Matrix bi = bc.B * asm_.I_diag.asDiagonal();
    const Matrix lhs = asm_.Z;
    const Matrix rhs =
        (bc.A + bi) *
        (Matrix::Identity(idx.dim(), idx.dim()) - asm_.Cm * asm_.T) *
        asm_.R_plus;
    CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    ++checked;
  }
}

TEST_CASE("star graphs degenerate to Z = A + B I") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);
  const auto params = SpectralParams::positive_energy(0.9);
  const auto rt = build_rt(g, idx, params);
  CHECK(rt.T.norm() == 0.0);
  const auto [z, det] = secular_matrix(bc, g, idx, params);
  (void)det;
  const Matrix direct = bc.A + bc.B * Matrix(i_diagonal(idx, params).asDiagonal());
  CHECK((z - direct).norm() < 1e-14);
}

TEST_CASE("chi of the line model") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = fixtures::real_line_bc(idx);
  const Matrix chi =
      chi_coefficients(bc, g, idx, SpectralParams::positive_energy(2.3));
  REQUIRE(chi.rows() == 2);
  REQUIRE(chi.cols() == 2);
  CHECK(std::abs(chi(0, 0) - kI) < 1e-13);
  CHECK(std::abs(chi(1, 0) - Complex(1.0, 1.0)) < 1e-13);
}

TEST_CASE("chi equals Cm on star graphs") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  std::mt19937 rng(13);
  const auto bc = from_unitary(fixtures::random_unitary(3, rng), idx);
  const auto params = SpectralParams::positive_energy(1.1);
  const Matrix chi = chi_coefficients(bc, g, idx, params);
  const auto cm = coefficient_matrix(bc, idx, params);
  CHECK((chi - cm.Cm).norm() < 1e-12);
}

TEST_CASE("Dirichlet star reflects everything with a sign flip") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const Matrix chi = chi_coefficients(fixtures::dirichlet(idx), g, idx,
                                      SpectralParams::positive_energy(1.0));
  CHECK((chi + Matrix::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("two vertex external chi block carries tanh and sech") {
  const double a = 1.0, k = 0.7;
  const auto g = fixtures::two_vertex_graph(a);
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);
  const Matrix chi =
      chi_coefficients(bc, g, idx, SpectralParams::positive_energy(k));
  CHECK(std::abs(chi(0, 0) - kI * std::tanh(a * k)) < 1e-12);
  CHECK(std::abs(chi(1, 0) - 1.0 / std::cosh(a * k)) < 1e-12);
  CHECK(std::abs(chi(0, 1) - 1.0 / std::cosh(a * k)) < 1e-12);
  CHECK(std::abs(chi(1, 1) - kI * std::tanh(a * k)) < 1e-12);
}

TEST_CASE("resonance is signalled through the dedicated exception") {
  const double a = 0.9;
  const auto g = fixtures::single_edge(Sign::positive, a);
  const BoundaryIndex idx(g);
  CHECK_THROWS_AS(chi_coefficients(fixtures::dirichlet(idx), g, idx,
                                   SpectralParams::positive_energy(M_PI / a)),
                  ResonanceError);
}

TEST_CASE("coefficient matrix inverse identity") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(0.2, 4.0);
  int checked = 0;
  while (checked < 40) {
    const auto bc = from_unitary(fixtures::random_unitary(3, rng), idx);
    const SpectralParams params(Complex(dist(rng), dist(rng) - 2.0),
                                Complex(dist(rng) - 2.0, dist(rng)));
    try {
      const Matrix cm = coefficient_matrix(bc, idx, params).Cm;
      const Matrix cm_neg =
          coefficient_matrix(bc, idx,
                             SpectralParams(-params.z_plus, -params.z_minus))
              .Cm;
      CHECK((cm * cm_neg - Matrix::Identity(3, 3)).norm() < 1e-10);
      ++checked;
    } catch (const std::domain_error&) {
      // pole; draw again
    }
  }
}

TEST_CASE("coefficient matrix conjugation identity") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  Vector d_diag(3);
  d_diag << 1.0, 1.0, kI;
  const Matrix d = d_diag.asDiagonal();

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(0.2, 3.0);
  int checked = 0;
  while (checked < 40) {
    const auto bc = from_unitary(fixtures::random_unitary(3, rng), idx);
    const Complex k(dist(rng), dist(rng) - 1.5);
    try {
      const Matrix lhs =
          coefficient_matrix(bc, idx, SpectralParams::resolvent_q(k)).Cm * d;
      const Complex kc = -std::conj(k);
      const Matrix rhs =
          d * coefficient_matrix(bc, idx, SpectralParams::resolvent_q(kc))
                  .Cm.adjoint();
      CHECK((lhs - rhs).norm() < 1e-10);
      ++checked;
    } catch (const std::domain_error&) {
    }
  }
}

TEST_CASE("projector-type conditions have k-independent coefficient matrices") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);
  // the signed vertex coupling is of projector type (L = 0)
  const auto pf = to_projector_form(bc);
  CHECK(pf.L.norm() < 1e-12);
  const auto hat = bc_from_projector_form(pf, idx.n(), idx.m());

  for (auto make : {&SpectralParams::positive_energy,
                    &SpectralParams::positive_energy_conjugate}) {
    const Matrix ref = coefficient_matrix(hat, idx, make(1.0)).Cm;
    double dev = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double k = 0.08 * i;
      dev = std::max(dev,
                     (coefficient_matrix(hat, idx, make(k)).Cm - ref).norm());
    }
    CHECK(dev <= 1e-10);
  }
}

TEST_CASE("no secular zeros inside the open quadrant for the worked examples") {
  const auto g = fixtures::two_vertex_graph(1.0);
  const BoundaryIndex idx(g);
  const auto bc = standard_signed_conditions(g, idx);
  double floor = 1e9;
  for (int re = 1; re <= 12; ++re)
    for (int im = 1; im <= 12; ++im) {
      const Complex k(0.4 * re, 0.4 * im);
      const auto [z, det] =
          secular_matrix(bc, g, idx, SpectralParams::resolvent_q(k));
      (void)z;
      floor = std::min(floor, std::abs(det.det_scaled));
    }
  CHECK(floor > 1e-6);
}

TEST_CASE("scaled determinant stays finite where the plain one overflows") {
  const auto g = fixtures::single_edge(Sign::positive, 4.0);
  const BoundaryIndex idx(g);
  const auto bc = fixtures::dirichlet(idx);
  // z = i kappa with kappa a = 1000: e^{kappa a} overflows a double
  const auto [z, det] =
      secular_matrix(bc, g, idx, SpectralParams::negative_energy(250.0));
  (void)z;
  CHECK(std::isfinite(det.log_abs_det));
  CHECK(std::isfinite(std::abs(det.det_scaled)));
  CHECK(det.log_abs_det > 600.0);
}
