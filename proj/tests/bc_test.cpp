#include <doctest.h>

#include <random>

#include <sgnlap/bc.hpp>

#include "test_graphs.hpp"
#include "test_random.hpp"

using namespace sgnlap;

namespace {

BoundaryConditions krein_pair(const BoundaryIndex& index) {
  Matrix a(2, 2), b(2, 2);
  a << -1.0, 1.0, 0.0, 0.0;
  b << 0.0, 0.0, 1.0, 1.0;
  return make_bc(a, b, index);
}

}  // namespace

TEST_CASE("signed coupling of the line model is self-adjoint") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = fixtures::real_line_bc(idx);

  const auto rep = check_self_adjoint(bc);
  CHECK(rep.rank_ok);
  CHECK(rep.symmetry_ok);
  CHECK(rep.symmetry_residual < 1e-12);

  // ... but it is not a self-adjoint Laplacian coupling.
  CHECK_FALSE(check_laplacian_self_adjoint(bc).symmetry_ok);
}

TEST_CASE("the Krein pair fails the indefinite test and passes the Laplacian one") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = krein_pair(idx);

  CHECK_FALSE(check_self_adjoint(bc).symmetry_ok);
  const auto rep = check_laplacian_self_adjoint(bc);
  CHECK(rep.rank_ok);
  CHECK(rep.symmetry_ok);
  CHECK(rep.symmetry_residual < 1e-12);
}

TEST_CASE("decoupled conditions are self-adjoint") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  CHECK(check_self_adjoint(fixtures::dirichlet(idx)).ok());
  CHECK(check_self_adjoint(fixtures::neumann(idx)).ok());
}

TEST_CASE("rank defect is detected") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  Matrix a(2, 2), b(2, 2);
  a << 1.0, 0.0, 0.0, 0.0;
  b << 0.0, 0.0, 0.0, 0.0;
  const auto rep = check_self_adjoint(make_bc(a, b, idx));
  CHECK_FALSE(rep.rank_ok);
}

TEST_CASE("projector form of the decoupled cases") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);

  const auto dirichlet_pf = to_projector_form(fixtures::dirichlet(idx));
  CHECK((dirichlet_pf.P - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(dirichlet_pf.L.norm() < 1e-12);

  // A = 0, B = J is Neumann up to row scaling: Ker(B J) = 0.
  const auto sig = SignatureMatrices::for_dims(1, 1);
  const auto neumann_pf = to_projector_form(make_bc(Matrix::Zero(2, 2), sig.J, idx));
  CHECK(neumann_pf.P.norm() < 1e-12);
  CHECK(neumann_pf.L.norm() < 1e-12);
}

TEST_CASE("projector form of the line model coupling") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto pf = to_projector_form(fixtures::real_line_bc(idx));

  // Independent null space: B J = [[0,0],[-1,-1]] has kernel (1,-1)/sqrt 2.
  Vector v(2);
  v << 1.0, -1.0;
  v.normalize();
  CHECK((pf.P - v * v.adjoint()).norm() < 1e-12);
  CHECK(pf.L.norm() < 1e-12);

  CHECK(subspace_equal(fixtures::real_line_bc(idx),
                       bc_from_projector_form(pf, idx.n(), idx.m())));
}

TEST_CASE("projector form requires self-adjointness") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  CHECK_THROWS_AS(to_projector_form(krein_pair(idx)), std::invalid_argument);
}

TEST_CASE("unitary parametrization endpoints") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);

  const auto dirichlet = from_unitary(-Matrix::Identity(2, 2), idx);
  CHECK((dirichlet.A - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(dirichlet.B.norm() < 1e-14);

  const auto neumann = from_unitary(Matrix::Identity(2, 2), idx);
  CHECK(neumann.A.norm() < 1e-14);
  const auto sig = SignatureMatrices::for_dims(1, 1);
  CHECK((neumann.B - (-kImag) * sig.J).norm() < 1e-14);
  CHECK(subspace_equal(neumann, fixtures::neumann(idx)));
}

TEST_CASE("every unitary gives self-adjoint conditions") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto bc = from_unitary(fixtures::random_unitary(3, rng), idx);
    const auto rep = check_self_adjoint(bc);
    CHECK(rep.rank_ok);
    CHECK(rep.symmetry_ok);
  }
}

TEST_CASE("non-unitary input is rejected") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  Matrix u(2, 2);
  u << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(from_unitary(u, idx), std::invalid_argument);
}

TEST_CASE("unitary round trip recovers the subspace") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto bc = from_unitary(fixtures::random_unitary(3, rng), idx);
    const auto again = from_unitary(to_unitary(bc), idx);
    CHECK(subspace_equal(bc, again));
  }
}

TEST_CASE("subspace comparison") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);
  const auto bc = fixtures::real_line_bc(idx);

  CHECK(subspace_equal(bc, bc));
  CHECK_FALSE(subspace_equal(fixtures::dirichlet(idx), fixtures::neumann(idx)));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix gmat = fixtures::random_invertible(2, rng);
    const auto scaled = BoundaryConditions{gmat * bc.A, gmat * bc.B, 1, 1};
    CHECK(subspace_equal(bc, scaled));
    // left multiplication also leaves the self-adjointness test invariant
    CHECK(check_self_adjoint(scaled).ok());
  }
}

TEST_CASE("Krein reduction: J test on (A,B) equals plain test on (A, BJ)") {
  const auto g = fixtures::three_star();
  const BoundaryIndex idx(g);
  const auto sig = SignatureMatrices::for_dims(idx.n(), idx.m());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = fixtures::random_gaussian(3, 3, rng);
    const Matrix b = fixtures::random_gaussian(3, 3, rng);
    const auto bc = BoundaryConditions{a, b, idx.n(), idx.m()};
    const auto mapped = BoundaryConditions{a, b * sig.J, idx.n(), idx.m()};
    CHECK(check_self_adjoint(bc).symmetry_ok ==
          check_laplacian_self_adjoint(mapped).symmetry_ok);
  }
}

TEST_CASE("signed vertex blocks") {
  const auto [a11, b11] = standard_signed_vertex(1, 1);
  Matrix a_expect(2, 2), b_expect(2, 2);
  a_expect << 1.0, -1.0, 0.0, 0.0;
  b_expect << 0.0, 0.0, 1.0, -1.0;
  CHECK((a11 - a_expect).norm() == 0.0);
  CHECK((b11 - b_expect).norm() == 0.0);

  // equal to the line-model coupling as a subspace
  const BoundaryIndex idx(fixtures::real_line_model());
  CHECK(subspace_equal(make_bc(a11, b11, idx), fixtures::real_line_bc(idx)));

  const auto [a21, b21] = standard_signed_vertex(2, 1);
  Matrix a3(3, 3), b3(3, 3);
  a3 << 1, -1, 0, 0, 1, -1, 0, 0, 0;
  b3 << 0, 0, 0, 0, 0, 0, 1, 1, -1;
  CHECK((a21 - a3).norm() == 0.0);
  CHECK((b21 - b3).norm() == 0.0);

  const auto [a10, b10] = standard_signed_vertex(1, 0);
  CHECK(a10.norm() == 0.0);
  CHECK(b10(0, 0) == Complex(1.0));

  CHECK_THROWS_AS(standard_signed_vertex(0, 0), std::invalid_argument);
}

TEST_CASE("assembled signed conditions are self-adjoint") {
  for (const auto& g :
       {fixtures::two_vertex_graph(1.0), fixtures::two_edge_compact(1.0, 0.7)}) {
    const BoundaryIndex idx(g);
    const auto bc = standard_signed_conditions(g, idx);
    const auto rep = check_self_adjoint(bc);
    CHECK(rep.rank_ok);
    CHECK(rep.symmetry_ok);
  }
}

TEST_CASE("form invertibility margin") {
  CHECK(form_invertibility_margin(fixtures::two_edge_compact(1.0, 1.0)) ==
        doctest::Approx(0.0));
  CHECK(form_invertibility_margin(fixtures::two_edge_compact(2.0, 1.0)) ==
        doctest::Approx(1.0));

  const MetricGraph star(
      {"c", "t1", "t2", "t3"}, {},
      {{"i1", Sign::positive, "c", "t1", 0.3},
       {"i2", Sign::positive, "c", "t2", 0.2},
       {"i3", Sign::negative, "c", "t3", 0.1}});
  CHECK(form_invertibility_margin(star) == doctest::Approx(0.4));

  CHECK_THROWS_AS(form_invertibility_margin(fixtures::real_line_model()),
                  std::invalid_argument);
}

TEST_CASE("boundary condition documents") {
  const auto g = fixtures::real_line_model();
  const BoundaryIndex idx(g);

  const auto bc = parse_bc(R"({"kind":"matrix",
    "A":[[[-1,0],[1,0]],[[0,0],[0,0]]],
    "B":[[[0,0],[0,0]],[[-1,0],[1,0]]]})", g, idx);
  CHECK(subspace_equal(bc, fixtures::real_line_bc(idx)));

  const auto round = parse_bc(write_bc(bc), g, idx);
  CHECK((round.A - bc.A).norm() == 0.0);
  CHECK((round.B - bc.B).norm() == 0.0);

  const auto standard = parse_bc(R"({"kind":"standard_signed_vertices"})", g, idx);
  CHECK(subspace_equal(standard, bc));

  const auto neumann = parse_bc(R"({"kind":"unitary",
    "U":[[[1,0],[0,0]],[[0,0],[1,0]]]})", g, idx);
  CHECK(subspace_equal(neumann, fixtures::neumann(idx)));

  CHECK_THROWS_AS(parse_bc(R"({"kind":"bogus"})", g, idx),
                  std::invalid_argument);
}
