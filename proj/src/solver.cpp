#include "wgfem/solver.hpp"

#include <chrono>
#include <cmath>

namespace wgfem {

PcgResult pcg_jacobi(const Eigen::SparseMatrix<double, Eigen::RowMajor>& A,
                     const Eigen::VectorXd& b, double rel_tol, int max_iter) {
  const int n = static_cast<int>(A.rows());
  PcgResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) return res;
  const double nb = b.norm();
  if (nb == 0.0) return res;

  Eigen::VectorXd inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (!(d > 0.0)) throw SolveError("pcg_jacobi: non-positive diagonal entry");
    inv_diag[i] = 1.0 / d;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  Eigen::VectorXd Ap(n);
  for (int it = 1; it <= max_iter; ++it) {
    Ap.noalias() = A * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0))
      throw SolveError("pcg_jacobi: non-positive p'Ap, matrix is not SPD");
    const double alpha = rz / pAp;
    res.x += alpha * p;
    r -= alpha * Ap;
    res.iterations = it;
    res.rel_residual = r.norm() / nb;
    if (res.rel_residual <= rel_tol) return res;
    z = inv_diag.asDiagonal() * r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolveError("pcg_jacobi: no convergence in " + std::to_string(max_iter) +
                   " iterations (residual " + std::to_string(res.rel_residual) + ")");
}

WeakFunction solve_dirichlet(const PolyMesh2& mesh, const TensorField& a,
                             const ScalarField& f, const ScalarField& g,
                             const SolveOptions& opts, SolveStats* stats) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  SparseSystem full = assemble(mesh, a, f, opts.k, opts.rho, opts.quad, opts.threads);
  SparseSystem reduced = apply_dirichlet(full, mesh, g, opts.quad.edge);
  const auto t1 = clock::now();

  WeakFunction u;
  u.dofs = reduced.dofs;
  u.coeffs = reduced.fixed;  // prescribed boundary values, zero elsewhere

  PcgResult pcg;
  if (opts.condense) {
    CondensedSystem cond = condense_interior(reduced);
    pcg = pcg_jacobi(cond.sys.A, cond.sys.b, opts.rel_tol, opts.max_iter);
    for (int i = 0; i < cond.sys.size(); ++i) u.coeffs[cond.sys.active[i]] = pcg.x[i];
    for (const InteriorRecovery& rec : cond.recovery) {
      Eigen::VectorXd ue(rec.edge_cols.size());
      for (std::size_t j = 0; j < rec.edge_cols.size(); ++j)
        ue[static_cast<int>(j)] = pcg.x[rec.edge_cols[j]];
      const Eigen::VectorXd ui = rec.rhs - rec.coupling * ue;
      for (int m = 0; m < u.dofs.cell_modes(); ++m)
        u.coeffs[u.dofs.cell_dof(rec.cell, m)] = ui[m];
    }
    if (stats) stats->n_unknowns = cond.sys.size();
  } else {
    pcg = pcg_jacobi(reduced.A, reduced.b, opts.rel_tol, opts.max_iter);
    for (int i = 0; i < reduced.size(); ++i) u.coeffs[reduced.active[i]] = pcg.x[i];
    if (stats) stats->n_unknowns = reduced.size();
  }

  if (stats) {
    stats->iterations = pcg.iterations;
    stats->rel_residual = pcg.rel_residual;
    stats->assemble_seconds = std::chrono::duration<double>(t1 - t0).count();
    stats->solve_seconds = std::chrono::duration<double>(clock::now() - t1).count();
  }
  return u;
}

}  // namespace wgfem
