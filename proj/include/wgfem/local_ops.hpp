#pragma once

#include <vector>

#include "wgfem/basis.hpp"
#include "wgfem/core.hpp"
#include "wgfem/mesh.hpp"
#include "wgfem/quadrature.hpp"

namespace wgfem {

/// Quadrature degrees used in element integrals. The defaults over-integrate
/// data terms (trigonometric f, g, exact solutions) so their quadrature error
/// stays far below the discretization error.
struct QuadDegrees {
  int volume = 8;
  int edge = 8;

  static QuadDegrees for_order(int k) {
    return {std::max(2 * k + 2, 8), std::max(2 * k + 1, 8)};
  }
};

/// Local degree-of-freedom layout of one element: the (k+1)(k+2)/2 interior
/// modes first, then k modes per edge in cell loop order.
struct ElementDofs {
  int cell = 0;
  int k = 1;
  std::vector<int> edges;  // global edge ids in loop order

  int n_cell_modes() const { return (k + 1) * (k + 2) / 2; }
  int n_edge_modes() const { return k; }
  int size() const { return n_cell_modes() + k * static_cast<int>(edges.size()); }
  int edge_offset(int local_edge) const { return n_cell_modes() + k * local_edge; }
};

/// Per-element operators of the scheme: the weak gradient matrix G (each
/// column expresses grad_w of one local basis function in [P_{k-1}]^2
/// coefficients), the boundary stabilizer S, the stiffness A = G^T M_a G + S
/// and the load vector b.
struct LocalOperator {
  ElementDofs dofs;
  Eigen::MatrixXd G;
  Eigen::MatrixXd S;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

ElementDofs element_dofs(const PolyMesh2& mesh, int cell, int k);

/// Weak gradient matrix assembled through the integration-by-parts form
/// (grad v0, q)_T + <v_b - v0, q.n>_dT, solved against the [P_{k-1}]^2 mass
/// matrix. Size k(k+1) x n_loc.
Eigen::MatrixXd weak_gradient_matrix(const PolyMesh2& mesh, int cell, int k);

/// Stabilizer rho/h_T sum_e <Q_b v0 - v_b, Q_b w0 - w_b>_e over the cell's
/// edges.
Eigen::MatrixXd stabilizer_matrix(const PolyMesh2& mesh, int cell, int k, double rho);

/// a-weighted mass matrix of the [P_{k-1}]^2 basis; `a` is sampled at
/// quadrature points and must be symmetric there.
Eigen::MatrixXd weighted_vec_mass(const PolyMesh2& mesh, int cell, int k,
                                  const TensorField& a, int volume_degree);

LocalOperator local_stiffness(const PolyMesh2& mesh, int cell, const TensorField& a,
                              int k, double rho, const QuadDegrees& quad);

/// Load vector (f, phi_i)_T on the interior modes, zero on edge modes.
Eigen::VectorXd local_load(const PolyMesh2& mesh, int cell, const ScalarField& f, int k,
                           const QuadDegrees& quad);

/// L^2 projection onto P_k(T) (coefficients in the scaled monomial basis).
Eigen::VectorXd project_Q0(const PolyMesh2& mesh, int cell, const ScalarField& phi,
                           int k, int volume_degree);

/// L^2 projection onto P_{k-1}(e) (Legendre coefficients, diagonal solve).
Eigen::VectorXd project_Qb(const PolyMesh2& mesh, int edge, const ScalarField& phi,
                           int k, int edge_degree);

/// Componentwise L^2 projection onto [P_{k-1}(T)]^2.
Eigen::VectorXd project_Qh_vec(const PolyMesh2& mesh, int cell, const VectorField& w,
                               int k, int volume_degree);

/// Legendre coefficients of Q_b applied to the trace of a cell polynomial
/// (given by CellBasis coefficients) on one edge of the cell.
Eigen::VectorXd project_Qb_trace(const CellBasis& cb, const Eigen::VectorXd& coeffs,
                                 const EdgeBasis& eb, int edge_degree);

}  // namespace wgfem
