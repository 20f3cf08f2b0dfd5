#include <cmath>
#include <random>

#include "doctest.h"
#include "wgfem/basis.hpp"

using namespace wgfem;

TEST_CASE("cell basis constant and scaled monomial values") {
  PolyMesh2 m = make_mesh({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}, {{0, 1, 2, 3}});
  CellBasis basis = make_cell_basis(m, 0, 1);
  REQUIRE(basis.dim() == 3);

  Eigen::VectorXd vals;
  Eigen::MatrixXd grads;
  basis.eval(Vec2(0.37, -2.1), vals, grads);
  CHECK(vals[0] == doctest::Approx(1.0));
  CHECK(grads(0, 0) == 0.0);
  CHECK(grads(0, 1) == 0.0);

  basis.eval(Vec2(1.0, 0.5), vals);
  CHECK(vals[1] == doctest::Approx((1.0 - 0.5) / std::sqrt(2.0)));  // 0.35355...
  CHECK(vals[2] == doctest::Approx(0.0));
}

TEST_CASE("cell basis gradients match central finite differences") {
  PolyMesh2 m = gen_triangular(3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int cell : {0, 5, 11}) {
    for (int order : {1, 2, 3}) {
      CellBasis basis = make_cell_basis(m, cell, order);
      for (int t = 0; t < 4; ++t) {
        const Vec2 p(u(rng), u(rng));
        Eigen::VectorXd vals, vx1, vx0, vy1, vy0;
        Eigen::MatrixXd grads;
        basis.eval(p, vals, grads);
        const double h = 1e-6;
        basis.eval(p + Vec2(h, 0), vx1);
        basis.eval(p - Vec2(h, 0), vx0);
        basis.eval(p + Vec2(0, h), vy1);
        basis.eval(p - Vec2(0, h), vy0);
        for (int i = 0; i < basis.dim(); ++i) {
          CHECK(grads(i, 0) == doctest::Approx((vx1[i] - vx0[i]) / (2 * h)).epsilon(1e-8));
          CHECK(grads(i, 1) == doctest::Approx((vy1[i] - vy0[i]) / (2 * h)).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("edge basis Legendre values") {
  PolyMesh2 m = gen_triangular(1);
  EdgeBasis basis = make_edge_basis(m, 0, 3);
  Eigen::VectorXd vals;
  basis.eval(0.5, vals);
  CHECK(vals[0] == doctest::Approx(1.0));
  CHECK(vals[1] == doctest::Approx(0.5));
  basis.eval(1.0, vals);
  CHECK(vals[2] == doctest::Approx(1.0));  // P_2(1) = 1
  basis.eval(-0.3, vals);
  CHECK(vals[2] == doctest::Approx(0.5 * (3 * 0.09 - 1.0)));
}

TEST_CASE("edge parameterization runs from v_lo to v_hi") {
  PolyMesh2 m = gen_triangular(2);
  for (int e = 0; e < m.n_edges(); ++e) {
    EdgeBasis basis = make_edge_basis(m, e, 2);
    CHECK(basis.param(m.vertices[m.edges[e].v_lo]) == doctest::Approx(-1.0));
    CHECK(basis.param(m.vertices[m.edges[e].v_hi]) == doctest::Approx(1.0));
  }
}

TEST_CASE("edge mass matrix is diagonal with entries |e|/(2j+1)") {
  PolyMesh2 m = gen_honeycomb(4);
  for (int e : {0, 3, 9}) {
    const int k = 3;
    EdgeBasis basis = make_edge_basis(m, e, k);
    SegmentRule rule = segment_rule(basis.a, basis.b, 2 * k);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd vals;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis.eval(rule.params[q], vals);
      mass += rule.weights[q] * vals * vals.transpose();
    }
    const double len = basis.length();
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double expected = i == j ? len / (2 * i + 1) : 0.0;
        CHECK(std::abs(mass(i, j) - expected) < 1e-13);
      }
    }
  }
}

TEST_CASE("cell mass matrices are SPD with bounded conditioning") {
  for (const PolyMesh2& m : {gen_triangular(4), gen_quadrilateral(2), gen_honeycomb(6)}) {
    for (int k : {1, 2}) {
      for (int c = 0; c < m.n_cells(); ++c) {
        CellBasis basis = make_cell_basis(m, c, k);
        std::vector<Vec2> loop;
        QuadRule rule = polygon_rule(m.vertex_loop(c, loop), m.cell_centroid[c], 2 * k + 2);
        Eigen::MatrixXd mass = cell_mass_matrix(basis, rule);
        CHECK((mass - mass.transpose()).norm() < 1e-14 * mass.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mass);
        REQUIRE(eig.info() == Eigen::Success);
        const double lmin = eig.eigenvalues().minCoeff();
        const double lmax = eig.eigenvalues().maxCoeff();
        CHECK(lmin > 0.0);
        CHECK(lmax / lmin < 1e6);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(mass).info() == Eigen::Success);
      }
    }
  }
}

TEST_CASE("vector basis mass matrix is block diagonal with identical SPD blocks") {
  PolyMesh2 m = gen_quadrilateral(1);
  const int k = 2;
  VecBasis vb = make_vec_basis(m, 2, k);
  CHECK(vb.dim() == k * (k + 1));
  std::vector<Vec2> loop;
  QuadRule rule = polygon_rule(m.vertex_loop(2, loop), m.cell_centroid[2], 2 * k);
  Eigen::MatrixXd block = cell_mass_matrix(vb.scalar, rule);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(block).info() == Eigen::Success);
}
