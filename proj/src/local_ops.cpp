#include "wgfem/local_ops.hpp"

#include <cmath>

namespace wgfem {

namespace {

QuadRule cell_rule(const PolyMesh2& mesh, int cell, int degree) {
  std::vector<Vec2> loop;
  return polygon_rule(mesh.vertex_loop(cell, loop), mesh.cell_centroid[cell], degree);
}

Eigen::LLT<Eigen::MatrixXd> factor_mass(const Eigen::MatrixXd& mass, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw MeshError(std::string(what) + ": singular mass matrix (degenerate cell)");
  return llt;
}

}  // namespace

ElementDofs element_dofs(const PolyMesh2& mesh, int cell, int k) {
  ElementDofs dofs;
  dofs.cell = cell;
  dofs.k = k;
  dofs.edges = mesh.cell_edges[cell];
  return dofs;
}

Eigen::MatrixXd weak_gradient_matrix(const PolyMesh2& mesh, int cell, int k) {
  const ElementDofs dofs = element_dofs(mesh, cell, k);
  const CellBasis ck = make_cell_basis(mesh, cell, k);
  const CellBasis ck1 = make_cell_basis(mesh, cell, k - 1);
  const int d1 = ck1.dim();
  const int n_loc = dofs.size();

  // Scalar P_{k-1} mass matrix; integrands below are polynomials of degree
  // <= 2k, so an exact-degree rule suffices.
  const QuadRule vrule = cell_rule(mesh, cell, std::max(2 * k, 1));
  const Eigen::LLT<Eigen::MatrixXd> mass =
      factor_mass(cell_mass_matrix(ck1, vrule), "weak_gradient_matrix");

  Eigen::MatrixXd rhs_x = Eigen::MatrixXd::Zero(d1, n_loc);
  Eigen::MatrixXd rhs_y = Eigen::MatrixXd::Zero(d1, n_loc);

  // Volume term (grad v0, q)_T for the interior modes.
  Eigen::VectorXd vk, v1;
  Eigen::MatrixXd gk;
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    ck.eval(vrule.points[q], vk, gk);
    ck1.eval(vrule.points[q], v1);
    const double w = vrule.weights[q];
    rhs_x.leftCols(ck.dim()).noalias() += w * v1 * gk.col(0).transpose();
    rhs_y.leftCols(ck.dim()).noalias() += w * v1 * gk.col(1).transpose();
  }

  // Boundary term <v_b - v0, q.n>_dT.
  for (std::size_t le = 0; le < dofs.edges.size(); ++le) {
    const int e = dofs.edges[le];
    const EdgeBasis eb = make_edge_basis(mesh, e, k);
    const Vec2 n = mesh.outward_normal(e, cell);
    const SegmentRule erule = segment_rule(eb.a, eb.b, 2 * k);
    Eigen::VectorXd em;
    for (std::size_t q = 0; q < erule.size(); ++q) {
      ck.eval(erule.points[q], vk);
      ck1.eval(erule.points[q], v1);
      eb.eval(erule.params[q], em);
      const double w = erule.weights[q];
      rhs_x.leftCols(ck.dim()).noalias() -= (w * n.x()) * v1 * vk.transpose();
      rhs_y.leftCols(ck.dim()).noalias() -= (w * n.y()) * v1 * vk.transpose();
      rhs_x.middleCols(dofs.edge_offset(static_cast<int>(le)), k).noalias() +=
          (w * n.x()) * v1 * em.transpose();
      rhs_y.middleCols(dofs.edge_offset(static_cast<int>(le)), k).noalias() +=
          (w * n.y()) * v1 * em.transpose();
    }
  }

  Eigen::MatrixXd G(2 * d1, n_loc);
  G.topRows(d1) = mass.solve(rhs_x);
  G.bottomRows(d1) = mass.solve(rhs_y);
  return G;
}

Eigen::MatrixXd stabilizer_matrix(const PolyMesh2& mesh, int cell, int k, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("stabilizer_matrix: rho must be > 0");
  const ElementDofs dofs = element_dofs(mesh, cell, k);
  const CellBasis ck = make_cell_basis(mesh, cell, k);
  const int n_loc = dofs.size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_loc, n_loc);

  Eigen::VectorXd vk, em;
  for (std::size_t le = 0; le < dofs.edges.size(); ++le) {
    const int e = dofs.edges[le];
    const EdgeBasis eb = make_edge_basis(mesh, e, k);
    const double len = eb.length();
    const SegmentRule erule = segment_rule(eb.a, eb.b, 2 * k);

    // J maps local dofs to the Legendre coefficients of Q_b(v0) - v_b.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, n_loc);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      ck.eval(erule.points[q], vk);
      eb.eval(erule.params[q], em);
      J.leftCols(ck.dim()).noalias() += erule.weights[q] * em * vk.transpose();
    }
    Eigen::VectorXd edge_mass(k);
    for (int m = 0; m < k; ++m) {
      edge_mass[m] = len / (2 * m + 1);
      J.row(m) /= edge_mass[m];
    }
    J.block(0, dofs.edge_offset(static_cast<int>(le)), k, k) =
        -Eigen::MatrixXd::Identity(k, k);
    S.noalias() += J.transpose() * edge_mass.asDiagonal() * J;
  }
  return (rho / mesh.cell_diameter[cell]) * S;
}

Eigen::MatrixXd weighted_vec_mass(const PolyMesh2& mesh, int cell, int k,
                                  const TensorField& a, int volume_degree) {
  const CellBasis ck1 = make_cell_basis(mesh, cell, k - 1);
  const int d1 = ck1.dim();
  const QuadRule vrule = cell_rule(mesh, cell, volume_degree);
  Eigen::MatrixXd m00 = Eigen::MatrixXd::Zero(d1, d1);
  Eigen::MatrixXd m01 = Eigen::MatrixXd::Zero(d1, d1);
  Eigen::MatrixXd m11 = Eigen::MatrixXd::Zero(d1, d1);
  Eigen::VectorXd v1;
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    const Mat2 aq = a(vrule.points[q]);
    const double scale = std::abs(aq(0, 0)) + std::abs(aq(1, 1)) + 1.0;
    if (std::abs(aq(0, 1) - aq(1, 0)) > 1e-12 * scale)
      throw std::invalid_argument("weighted_vec_mass: coefficient tensor not symmetric");
    ck1.eval(vrule.points[q], v1);
    const Eigen::MatrixXd outer = vrule.weights[q] * v1 * v1.transpose();
    m00.noalias() += aq(0, 0) * outer;
    m01.noalias() += aq(0, 1) * outer;
    m11.noalias() += aq(1, 1) * outer;
  }
  Eigen::MatrixXd M(2 * d1, 2 * d1);
  M.topLeftCorner(d1, d1) = m00;
  M.topRightCorner(d1, d1) = m01;
  M.bottomLeftCorner(d1, d1) = m01.transpose();
  M.bottomRightCorner(d1, d1) = m11;
  return M;
}

LocalOperator local_stiffness(const PolyMesh2& mesh, int cell, const TensorField& a,
                              int k, double rho, const QuadDegrees& quad) {
  LocalOperator op;
  op.dofs = element_dofs(mesh, cell, k);
  op.G = weak_gradient_matrix(mesh, cell, k);
  op.S = stabilizer_matrix(mesh, cell, k, rho);
  const Eigen::MatrixXd Ma = weighted_vec_mass(mesh, cell, k, a, quad.volume);
  op.A = op.G.transpose() * Ma * op.G + op.S;
  op.b = Eigen::VectorXd::Zero(op.dofs.size());
  return op;
}

Eigen::VectorXd local_load(const PolyMesh2& mesh, int cell, const ScalarField& f, int k,
                           const QuadDegrees& quad) {
  const ElementDofs dofs = element_dofs(mesh, cell, k);
  const CellBasis ck = make_cell_basis(mesh, cell, k);
  const QuadRule vrule = cell_rule(mesh, cell, quad.volume);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.size());
  Eigen::VectorXd vk;
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    ck.eval(vrule.points[q], vk);
    b.head(ck.dim()).noalias() += vrule.weights[q] * f(vrule.points[q]) * vk;
  }
  return b;
}

Eigen::VectorXd project_Q0(const PolyMesh2& mesh, int cell, const ScalarField& phi,
                           int k, int volume_degree) {
  const CellBasis ck = make_cell_basis(mesh, cell, k);
  const QuadRule vrule = cell_rule(mesh, cell, std::max(volume_degree, 2 * k));
  const Eigen::LLT<Eigen::MatrixXd> mass =
      factor_mass(cell_mass_matrix(ck, vrule), "project_Q0");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ck.dim());
  Eigen::VectorXd vk;
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    ck.eval(vrule.points[q], vk);
    rhs.noalias() += vrule.weights[q] * phi(vrule.points[q]) * vk;
  }
  return mass.solve(rhs);
}

Eigen::VectorXd project_Qb(const PolyMesh2& mesh, int edge, const ScalarField& phi,
                           int k, int edge_degree) {
  const EdgeBasis eb = make_edge_basis(mesh, edge, k);
  const SegmentRule erule = segment_rule(eb.a, eb.b, std::max(edge_degree, 2 * k));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd em;
  for (std::size_t q = 0; q < erule.size(); ++q) {
    eb.eval(erule.params[q], em);
    rhs.noalias() += erule.weights[q] * phi(erule.points[q]) * em;
  }
  const double len = eb.length();
  for (int m = 0; m < k; ++m) rhs[m] *= (2 * m + 1) / len;
  return rhs;
}

Eigen::VectorXd project_Qh_vec(const PolyMesh2& mesh, int cell, const VectorField& w,
                               int k, int volume_degree) {
  const CellBasis ck1 = make_cell_basis(mesh, cell, k - 1);
  const int d1 = ck1.dim();
  const QuadRule vrule = cell_rule(mesh, cell, std::max(volume_degree, 2 * k));
  const Eigen::LLT<Eigen::MatrixXd> mass =
      factor_mass(cell_mass_matrix(ck1, vrule), "project_Qh_vec");
  Eigen::VectorXd rx = Eigen::VectorXd::Zero(d1), ry = Eigen::VectorXd::Zero(d1);
  Eigen::VectorXd v1;
  for (std::size_t q = 0; q < vrule.size(); ++q) {
    ck1.eval(vrule.points[q], v1);
    const Vec2 wq = w(vrule.points[q]);
    rx.noalias() += vrule.weights[q] * wq.x() * v1;
    ry.noalias() += vrule.weights[q] * wq.y() * v1;
  }
  Eigen::VectorXd coeffs(2 * d1);
  coeffs.head(d1) = mass.solve(rx);
  coeffs.tail(d1) = mass.solve(ry);
  return coeffs;
}

Eigen::VectorXd project_Qb_trace(const CellBasis& cb, const Eigen::VectorXd& coeffs,
                                 const EdgeBasis& eb, int edge_degree) {
  const SegmentRule erule =
      segment_rule(eb.a, eb.b, std::max(edge_degree, cb.order + eb.modes));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(eb.modes);
  Eigen::VectorXd vk, em;
  for (std::size_t q = 0; q < erule.size(); ++q) {
    cb.eval(erule.points[q], vk);
    eb.eval(erule.params[q], em);
    rhs.noalias() += erule.weights[q] * coeffs.dot(vk) * em;
  }
  const double len = eb.length();
  for (int m = 0; m < eb.modes; ++m) rhs[m] *= (2 * m + 1) / len;
  return rhs;
}

}  // namespace wgfem
