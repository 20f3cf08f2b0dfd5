#include <cmath>
#include <cstring>

#include "doctest.h"
#include "wgfem/solver.hpp"

using namespace wgfem;

namespace {

const TensorField kIdentity = [](const Vec2&) { return Mat2::Identity(); };
const ScalarField kZero = [](const Vec2&) { return 0.0; };

// Coefficient vector of the constant weak function {1, 1}.
Eigen::VectorXd constant_one(const DofMap& map) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(map.n_total());
  for (int c = 0; c < map.n_cells; ++c) v[map.cell_dof(c, 0)] = 1.0;
  for (int e = 0; e < map.n_edges; ++e) v[map.edge_dof(e, 0)] = 1.0;
  return v;
}

double matrix_inf_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A) {
  double norm = 0.0;
  for (int i = 0; i < A.outerSize(); ++i) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A, i); it; ++it)
      row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  return norm;
}

// Element-based L2 error of u0 against an exact field.
double l2_cell_error(const PolyMesh2& mesh, const WeakFunction& u, const ScalarField& exact) {
  double sum = 0.0;
  const int k = u.dofs.k;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellBasis cb = make_cell_basis(mesh, c, k);
    std::vector<Vec2> loop;
    const QuadRule rule = polygon_rule(mesh.vertex_loop(c, loop), mesh.cell_centroid[c], 10);
    const Eigen::VectorXd diff = u.v0(c) - project_Q0(mesh, c, exact, k, 10);
    Eigen::VectorXd vals;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      cb.eval(rule.points[q], vals);
      const double e = vals.dot(diff);
      sum += rule.weights[q] * e * e;
    }
  }
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("dof counts on the two-triangle mesh") {
  PolyMesh2 m = make_mesh({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)},
                          {{0, 1, 3}, {1, 2, 3}});
  SparseSystem sys = assemble(m, kIdentity, kZero, 1, 1.0, QuadDegrees::for_order(1));
  CHECK(sys.dofs.n_total() == 11);  // 2*3 interior + 5 edges
  CHECK(sys.size() == 11);
}

TEST_CASE("assembled matrix is symmetric with the constant in its kernel") {
  PolyMesh2 m = gen_honeycomb(4);
  for (int k : {1, 2}) {
    SparseSystem sys = assemble(m, kIdentity, kZero, k, 1.0, QuadDegrees::for_order(k));
    Eigen::SparseMatrix<double, Eigen::RowMajor> diff = sys.A;
    diff -= Eigen::SparseMatrix<double, Eigen::RowMajor>(
        sys.A.transpose());
    CHECK(matrix_inf_norm(diff) < 1e-12 * matrix_inf_norm(sys.A));

    const Eigen::VectorXd ones = constant_one(sys.dofs);
    CHECK((sys.A * ones).norm() < 1e-10 * matrix_inf_norm(sys.A));
  }
}

TEST_CASE("dirichlet elimination with g = 0 keeps the interior load") {
  PolyMesh2 m = gen_triangular(3);
  auto f = [](const Vec2& p) { return 1.0 + p.x(); };
  SparseSystem sys = assemble(m, kIdentity, f, 1, 1.0, QuadDegrees::for_order(1));
  SparseSystem red = apply_dirichlet(sys, m, kZero, 8);
  for (int i = 0; i < red.size(); ++i)
    CHECK(red.b[i] == doctest::Approx(sys.b[red.active[i]]).epsilon(1e-15));
  // Reduced system is SPD: dense Cholesky succeeds.
  Eigen::MatrixXd dense(red.A);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(dense).info() == Eigen::Success);
}

TEST_CASE("dirichlet values are the Q_b projections of g") {
  PolyMesh2 m = gen_triangular(4);
  auto g = [](const Vec2& p) { return std::sin(M_PI * p.x()); };
  SparseSystem sys = assemble(m, kIdentity, kZero, 1, 1.0, QuadDegrees::for_order(1));
  SparseSystem red = apply_dirichlet(sys, m, g, 11);
  // Bottom-left boundary edge [0, 1/4] x {0}: mean of sin(pi x).
  int edge = -1;
  for (int e = 0; e < m.n_edges(); ++e) {
    const Vec2 lo = m.vertices[m.edges[e].v_lo], hi = m.vertices[m.edges[e].v_hi];
    if (lo.isApprox(Vec2(0, 0)) && hi.isApprox(Vec2(0.25, 0))) edge = e;
  }
  REQUIRE(edge >= 0);
  const double expected = 4.0 * (1.0 - std::cos(M_PI / 4.0)) / M_PI;
  CHECK(red.fixed[red.dofs.edge_dof(edge, 0)] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("constant boundary data reproduces the constant solution") {
  PolyMesh2 m = gen_quadrilateral(1);
  TensorField a = [](const Vec2& p) {
    Mat2 t;
    t << 2.0 + p.x(), 0.3, 0.3, 1.5 + p.y();
    return t;
  };
  SolveOptions opts = SolveOptions::for_order(1);
  WeakFunction u = solve_dirichlet(m, a, kZero, [](const Vec2&) { return 1.0; }, opts);
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(u.v0(c)[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(u.v0(c).tail(u.dofs.cell_modes() - 1).norm() < 1e-10);
  }
  for (int e = 0; e < m.n_edges(); ++e)
    CHECK(u.vb(e)[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero data gives the zero solution") {
  PolyMesh2 m = gen_triangular(2);
  SolveOptions opts = SolveOptions::for_order(2);
  WeakFunction u = solve_dirichlet(m, kIdentity, kZero, kZero, opts);
  CHECK(u.coeffs.norm() == 0.0);
}

TEST_CASE("scheme is exact for P1 solutions with constant coefficients") {
  auto exact = [](const Vec2& p) { return 1.0 + 2.0 * p.x() - 3.0 * p.y(); };
  for (const PolyMesh2& m : {gen_triangular(4), gen_quadrilateral(2), gen_honeycomb(4)}) {
    SolveOptions opts = SolveOptions::for_order(1);
    opts.rel_tol = 1e-14;
    WeakFunction u = solve_dirichlet(m, kIdentity, kZero, exact, opts);
    for (int c = 0; c < m.n_cells(); ++c) {
      const Eigen::VectorXd q0 = project_Q0(m, c, exact, 1, 8);
      CHECK((u.v0(c) - q0).lpNorm<Eigen::Infinity>() < 1e-10);
    }
    for (int e = 0; e < m.n_edges(); ++e) {
      const Eigen::VectorXd qb = project_Qb(m, e, exact, 1, 8);
      CHECK((u.vb(e) - qb).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("pcg satisfies its residual contract and flags non-SPD input") {
  PolyMesh2 m = gen_triangular(5);
  auto f = [](const Vec2& p) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * p.x()) * std::cos(M_PI * p.y());
  };
  SparseSystem sys = assemble(m, kIdentity, f, 1, 1.0, QuadDegrees::for_order(1));
  SparseSystem red = apply_dirichlet(sys, m, kZero, 8);
  PcgResult res = pcg_jacobi(red.A, red.b, 1e-12, 10000);
  CHECK((red.A * res.x - red.b).norm() <= 1e-12 * red.b.norm());
  CHECK(res.rel_residual <= 1e-12);

  // PCG against the dense Cholesky oracle.
  Eigen::MatrixXd dense(red.A);
  Eigen::VectorXd direct = Eigen::LLT<Eigen::MatrixXd>(dense).solve(red.b);
  CHECK((res.x - direct).norm() < 1e-9 * (1.0 + direct.norm()));

  // An indefinite matrix is reported, not silently mis-solved.
  Eigen::SparseMatrix<double, Eigen::RowMajor> bad(2, 2);
  bad.insert(0, 0) = 1.0;
  bad.insert(1, 1) = -1.0;
  Eigen::VectorXd rhs(2);
  rhs << 1.0, 1.0;
  CHECK_THROWS_AS(pcg_jacobi(bad, rhs, 1e-12, 10), SolveError);

  // Exhausted iterations are a convergence failure.
  CHECK_THROWS_AS(pcg_jacobi(red.A, red.b, 1e-14, 2), SolveError);
}

TEST_CASE("static condensation leaves one dof per interior edge and matches") {
  PolyMesh2 m = gen_triangular(4);
  auto f = [](const Vec2& p) { return std::sin(3.0 * p.x() + p.y()); };
  SparseSystem sys = assemble(m, kIdentity, f, 1, 1.0, QuadDegrees::for_order(1));
  SparseSystem red = apply_dirichlet(sys, m, kZero, 8);
  CondensedSystem cond = condense_interior(red);

  int interior_edges = 0;
  for (const Edge& e : m.edges) interior_edges += e.boundary() ? 0 : 1;
  CHECK(cond.sys.size() == interior_edges);

  Eigen::MatrixXd dense(cond.sys.A);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(dense).info() == Eigen::Success);

  SolveOptions opts = SolveOptions::for_order(1);
  opts.condense = true;
  WeakFunction uc = solve_dirichlet(m, kIdentity, f, kZero, opts);
  opts.condense = false;
  WeakFunction uf = solve_dirichlet(m, kIdentity, f, kZero, opts);
  CHECK((uc.coeffs - uf.coeffs).norm() < 1e-10 * (1.0 + uf.coeffs.norm()));
}

TEST_CASE("single all-boundary cell condenses to an empty system") {
  PolyMesh2 m = make_mesh({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}, {{0, 1, 2, 3}});
  auto f = [](const Vec2& p) { return p.x() + 2.0; };
  SparseSystem sys = assemble(m, kIdentity, f, 1, 1.0, QuadDegrees::for_order(1));
  SparseSystem red = apply_dirichlet(sys, m, kZero, 8);
  CondensedSystem cond = condense_interior(red);
  CHECK(cond.sys.size() == 0);
  REQUIRE(cond.recovery.size() == 1);
  CHECK(cond.recovery[0].rhs.size() == 3);

  SolveOptions opts = SolveOptions::for_order(1);
  WeakFunction uc = solve_dirichlet(m, kIdentity, f, kZero, opts);
  opts.condense = false;
  WeakFunction uf = solve_dirichlet(m, kIdentity, f, kZero, opts);
  CHECK((uc.coeffs - uf.coeffs).norm() < 1e-12 * (1.0 + uf.coeffs.norm()));
}

TEST_CASE("assembly is bitwise deterministic across thread counts") {
  PolyMesh2 m = gen_honeycomb(4);
  auto f = [](const Vec2& p) { return std::cos(p.x() * p.y()); };
  SparseSystem s1 = assemble(m, kIdentity, f, 2, 1.0, QuadDegrees::for_order(2), 1);
  SparseSystem s3 = assemble(m, kIdentity, f, 2, 1.0, QuadDegrees::for_order(2), 3);
  REQUIRE(s1.A.nonZeros() == s3.A.nonZeros());
  CHECK(std::memcmp(s1.A.valuePtr(), s3.A.valuePtr(),
                    sizeof(double) * static_cast<std::size_t>(s1.A.nonZeros())) == 0);
  CHECK(s1.b == s3.b);

  SparseSystem s1b = assemble(m, kIdentity, f, 2, 1.0, QuadDegrees::for_order(2), 1);
  CHECK(std::memcmp(s1.A.valuePtr(), s1b.A.valuePtr(),
                    sizeof(double) * static_cast<std::size_t>(s1.A.nonZeros())) == 0);
}

TEST_CASE("solution is stable across rho") {
  PolyMesh2 m = gen_triangular(16);
  auto exact = [](const Vec2& p) { return std::sin(M_PI * p.x()) * std::cos(M_PI * p.y()); };
  auto f = [](const Vec2& p) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * p.x()) * std::cos(M_PI * p.y());
  };
  double base = -1.0;
  for (double rho : {0.5, 1.0, 4.0}) {
    SolveOptions opts = SolveOptions::for_order(1);
    opts.rho = rho;
    WeakFunction u = solve_dirichlet(m, kIdentity, f, exact, opts);
    const double err = l2_cell_error(m, u, exact);
    if (base < 0.0)
      base = err;
    else
      CHECK(std::abs(err - base) < 0.5 * base);
  }
}

TEST_CASE("assemble validates its arguments") {
  PolyMesh2 m = gen_triangular(1);
  CHECK_THROWS_AS(assemble(m, kIdentity, kZero, 0, 1.0, QuadDegrees::for_order(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble(m, kIdentity, kZero, 1, -1.0, QuadDegrees::for_order(1)),
                  std::invalid_argument);
}
