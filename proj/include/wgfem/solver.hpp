#pragma once

#include "wgfem/assembly.hpp"

namespace wgfem {

struct PcgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients on an SPD system. Terminates
/// when ||r||/||b|| <= rel_tol; throws SolveError on max_iter exhaustion or
/// when a non-positive p'Ap exposes an indefinite matrix.
PcgResult pcg_jacobi(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A,
                     const Eigen::VectorXd& b, double rel_tol, int max_iter);

struct SolveOptions {
  int k = 1;
  double rho = 1.0;
  double rel_tol = 1e-12;
  int max_iter = 200000;
  bool condense = true;
  QuadDegrees quad;
  int threads = 0;  // 0: WGFEM_THREADS or hardware concurrency

  static SolveOptions for_order(int k) {
    SolveOptions o;
    o.k = k;
    o.quad = QuadDegrees::for_order(k);
    return o;
  }
};

struct SolveStats {
  int n_unknowns = 0;
  int iterations = 0;
  double rel_residual = 0.0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Full pipeline for -div(a grad u) = f with u = g on the boundary:
/// assemble, eliminate boundary dofs at Q_b g, optionally condense the cell
/// interiors, solve with PCG, and reconstruct the complete weak function.
WeakFunction solve_dirichlet(const PolyMesh2& mesh, const TensorField& a,
                             const ScalarField& f, const ScalarField& g,
                             const SolveOptions& opts, SolveStats* stats = nullptr);

}  // namespace wgfem
