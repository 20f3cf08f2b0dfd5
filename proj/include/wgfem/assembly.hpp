#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "wgfem/local_ops.hpp"
#include "wgfem/mesh.hpp"

namespace wgfem {

/// Global degree-of-freedom layout: the (k+1)(k+2)/2 interior modes of every
/// cell first, then the k shared modes of every edge.
struct DofMap {
  int k = 1;
  int n_cells = 0;
  int n_edges = 0;

  int cell_modes() const { return (k + 1) * (k + 2) / 2; }
  int n_interior() const { return n_cells * cell_modes(); }
  int n_edge_dofs() const { return n_edges * k; }
  int n_total() const { return n_interior() + n_edge_dofs(); }
  int cell_dof(int cell, int mode) const { return cell * cell_modes() + mode; }
  int edge_dof(int edge, int mode) const { return n_interior() + edge * k + mode; }
};

/// Coefficient vector over a DofMap, representing v = {v0, vb}.
struct WeakFunction {
  DofMap dofs;
  Eigen::VectorXd coeffs;

  Eigen::VectorXd v0(int cell) const {
    return coeffs.segment(dofs.cell_dof(cell, 0), dofs.cell_modes());
  }
  Eigen::VectorXd vb(int edge) const {
    return coeffs.segment(dofs.edge_dof(edge, 0), dofs.k);
  }
};

/// Symmetric sparse system over the currently active dofs. `active` maps a
/// matrix index to its full dof id; eliminated dofs keep their prescribed
/// value in `fixed`.
struct SparseSystem {
  DofMap dofs;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  Eigen::VectorXd b;
  std::vector<int> active;          // matrix index -> full dof
  std::vector<int> full_to_active;  // -1 where eliminated
  Eigen::VectorXd fixed;            // full length; nonzero only on eliminated dofs

  int size() const { return static_cast<int>(active.size()); }
};

/// Per-cell data needed to reconstruct interior dofs after static
/// condensation: u_i = rhs - coupling * u_e over `edge_cols`.
struct InteriorRecovery {
  int cell = 0;
  std::vector<int> edge_cols;  // condensed matrix indices
  Eigen::MatrixXd coupling;    // A_ii^{-1} A_ie
  Eigen::VectorXd rhs;         // A_ii^{-1} b_i
};

struct CondensedSystem {
  SparseSystem sys;  // edge-only unknowns
  std::vector<InteriorRecovery> recovery;
};

/// Number of worker threads to use: `requested` if positive, else the
/// WGFEM_THREADS environment variable, else the hardware concurrency.
int resolve_threads(int requested);

/// Runs fn(cell) over [0, n) on `threads` workers in deterministic chunks.
void parallel_cells(int n, int threads, const std::function<void(int)>& fn);

/// Assembles the global stiffness matrix and load vector; no boundary
/// conditions are applied yet. Element operators are built concurrently, the
/// scatter is a deterministic sorted reduction.
SparseSystem assemble(const PolyMesh2& mesh, const TensorField& a, const ScalarField& f,
                      int k, double rho, const QuadDegrees& quad, int threads = 1);

/// Eliminates boundary-edge dofs at their Q_b g values, moving their columns
/// to the right-hand side. The reduced matrix is symmetric positive definite.
SparseSystem apply_dirichlet(const SparseSystem& sys, const PolyMesh2& mesh,
                             const ScalarField& g, int edge_degree);

/// Per-cell Schur complement elimination of the interior dofs, leaving an
/// edge-only SPD system plus exact recovery data.
CondensedSystem condense_interior(const SparseSystem& sys);

}  // namespace wgfem
