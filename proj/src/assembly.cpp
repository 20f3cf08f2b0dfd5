#include "wgfem/assembly.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace wgfem {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WGFEM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return std::min(n, 256);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_cells(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int c = 0; c < n; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int c = lo; c < hi; ++c) fn(c);
    });
  }
  for (std::thread& t : pool) t.join();
}

namespace {

struct Triplet {
  int row;
  int col;
  double value;
};

// Deterministic CRS construction: stable sort by (row, col), then sequential
// accumulation of duplicates. The sum order is the cell order regardless of
// how many threads produced the local operators.
Eigen::SparseMatrix<double, Eigen::RowMajor> compress(int n, std::vector<Triplet>& trips) {
  std::stable_sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Eigen::Triplet<double>> unique;
  unique.reserve(trips.size());
  for (const Triplet& t : trips) {
    if (!unique.empty() && unique.back().row() == t.row && unique.back().col() == t.col)
      unique.back() = {t.row, t.col, unique.back().value() + t.value};
    else
      unique.emplace_back(t.row, t.col, t.value);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
  A.setFromTriplets(unique.begin(), unique.end());
  return A;
}

std::vector<int> global_dofs(const DofMap& map, const ElementDofs& dofs) {
  std::vector<int> idx(dofs.size());
  for (int j = 0; j < dofs.n_cell_modes(); ++j) idx[j] = map.cell_dof(dofs.cell, j);
  for (std::size_t le = 0; le < dofs.edges.size(); ++le)
    for (int m = 0; m < map.k; ++m)
      idx[dofs.edge_offset(static_cast<int>(le)) + m] = map.edge_dof(dofs.edges[le], m);
  return idx;
}

}  // namespace

SparseSystem assemble(const PolyMesh2& mesh, const TensorField& a, const ScalarField& f,
                      int k, double rho, const QuadDegrees& quad, int threads) {
  if (k < 1 || k > 3) throw std::invalid_argument("assemble: k must be in {1,2,3}");
  if (!(rho > 0.0)) throw std::invalid_argument("assemble: rho must be > 0");

  SparseSystem sys;
  sys.dofs = DofMap{k, mesh.n_cells(), mesh.n_edges()};
  const int n = sys.dofs.n_total();
  sys.b = Eigen::VectorXd::Zero(n);
  sys.fixed = Eigen::VectorXd::Zero(n);
  sys.active.resize(n);
  sys.full_to_active.resize(n);
  for (int i = 0; i < n; ++i) sys.active[i] = sys.full_to_active[i] = i;

  std::vector<Triplet> trips;
  const int n_cells = mesh.n_cells();
  const int wave = std::max(1, 4096 / std::max(1, k * k));
  std::vector<LocalOperator> locals(static_cast<std::size_t>(std::min(wave, n_cells)));
  for (int start = 0; start < n_cells; start += wave) {
    const int count = std::min(wave, n_cells - start);
    std::exception_ptr error;
    std::mutex error_mutex;
    parallel_cells(count, resolve_threads(threads), [&](int i) {
      try {
        LocalOperator op = local_stiffness(mesh, start + i, a, k, rho, quad);
        op.b = local_load(mesh, start + i, f, k, quad);
        locals[i] = std::move(op);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
    if (error) std::rethrow_exception(error);
    for (int i = 0; i < count; ++i) {
      const LocalOperator& op = locals[i];
      const std::vector<int> idx = global_dofs(sys.dofs, op.dofs);
      for (std::size_t r = 0; r < idx.size(); ++r) {
        sys.b[idx[r]] += op.b[static_cast<int>(r)];
        for (std::size_t c = 0; c < idx.size(); ++c)
          trips.push_back({idx[r], idx[c], op.A(static_cast<int>(r), static_cast<int>(c))});
      }
    }
  }
  sys.A = compress(n, trips);
  return sys;
}

SparseSystem apply_dirichlet(const SparseSystem& sys, const PolyMesh2& mesh,
                             const ScalarField& g, int edge_degree) {
  const DofMap& map = sys.dofs;
  SparseSystem out;
  out.dofs = map;
  out.fixed = sys.fixed;
  const int n = map.n_total();
  std::vector<bool> eliminated(n, false);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (!mesh.edges[e].boundary()) continue;
    const Eigen::VectorXd val = project_Qb(mesh, e, g, map.k, edge_degree);
    for (int m = 0; m < map.k; ++m) {
      const int dof = map.edge_dof(e, m);
      eliminated[dof] = true;
      out.fixed[dof] = val[m];
    }
  }

  out.full_to_active.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (int full = sys.active[i]; !eliminated[full]) {
      out.full_to_active[full] = static_cast<int>(out.active.size());
      out.active.push_back(full);
    }
  }

  const int nr = out.size();
  out.b = Eigen::VectorXd::Zero(nr);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(sys.A.nonZeros()));
  for (int row = 0; row < sys.A.outerSize(); ++row) {
    const int full_row = sys.active[row];
    const int new_row = out.full_to_active[full_row];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, row); it;
         ++it) {
      const int full_col = sys.active[it.col()];
      if (new_row < 0) continue;
      const int new_col = out.full_to_active[full_col];
      if (new_col >= 0)
        trips.emplace_back(new_row, new_col, it.value());
      else
        out.b[new_row] -= it.value() * out.fixed[full_col];
    }
    if (new_row >= 0) out.b[new_row] += sys.b[row];
  }
  out.A.resize(nr, nr);
  out.A.setFromTriplets(trips.begin(), trips.end());
  return out;
}

CondensedSystem condense_interior(const SparseSystem& sys) {
  const DofMap& map = sys.dofs;
  CondensedSystem out;
  out.sys.dofs = map;
  out.sys.fixed = sys.fixed;

  const int n = map.n_total();
  out.sys.full_to_active.assign(n, -1);
  for (int i = 0; i < sys.size(); ++i) {
    const int full = sys.active[i];
    if (full < map.n_interior()) continue;  // interior dofs get eliminated
    out.sys.full_to_active[full] = static_cast<int>(out.sys.active.size());
    out.sys.active.push_back(full);
  }
  const int ne = out.sys.size();
  out.sys.b = Eigen::VectorXd::Zero(ne);

  // Edge-edge entries of the reduced matrix carry over unchanged.
  std::vector<Triplet> trips;
  for (int row = 0; row < sys.A.outerSize(); ++row) {
    const int full_row = sys.active[row];
    if (full_row < map.n_interior()) continue;
    const int new_row = out.sys.full_to_active[full_row];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, row); it;
         ++it) {
      const int full_col = sys.active[it.col()];
      if (full_col < map.n_interior()) continue;
      trips.push_back({new_row, out.sys.full_to_active[full_col], it.value()});
    }
    out.sys.b[new_row] = sys.b[row];
  }

  // Per-cell Schur complements. Interior rows of the reduced matrix belong to
  // exactly one cell, so the dense blocks can be read off the sparse rows.
  const int mloc = map.cell_modes();
  for (int cell = 0; cell < map.n_cells; ++cell) {
    std::vector<int> edge_cols;       // condensed matrix indices coupled to this cell
    std::vector<int> edge_col_index(ne, -1);
    Eigen::MatrixXd A_ii(mloc, mloc);
    A_ii.setZero();
    Eigen::VectorXd b_i(mloc);
    std::vector<std::vector<std::pair<int, double>>> couple(mloc);
    for (int j = 0; j < mloc; ++j) {
      const int row = sys.full_to_active[map.cell_dof(cell, j)];
      if (row < 0) throw SolveError("condense_interior: interior dof eliminated");
      b_i[j] = sys.b[row];
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, row); it;
           ++it) {
        const int full_col = sys.active[it.col()];
        if (full_col < map.n_interior()) {
          A_ii(j, full_col - map.cell_dof(cell, 0)) = it.value();
        } else {
          const int ecol = out.sys.full_to_active[full_col];
          if (edge_col_index[ecol] < 0) {
            edge_col_index[ecol] = static_cast<int>(edge_cols.size());
            edge_cols.push_back(ecol);
          }
          couple[j].emplace_back(edge_col_index[ecol], it.value());
        }
      }
    }
    Eigen::MatrixXd A_ie = Eigen::MatrixXd::Zero(mloc, static_cast<int>(edge_cols.size()));
    for (int j = 0; j < mloc; ++j)
      for (const auto& [c, v] : couple[j]) A_ie(j, c) = v;

    Eigen::LLT<Eigen::MatrixXd> llt(A_ii);
    if (llt.info() != Eigen::Success)
      throw SolveError("condense_interior: singular interior block on cell " +
                       std::to_string(cell));
    InteriorRecovery rec;
    rec.cell = cell;
    rec.edge_cols = edge_cols;
    rec.coupling = llt.solve(A_ie);
    rec.rhs = llt.solve(b_i);

    const Eigen::MatrixXd schur = A_ie.transpose() * rec.coupling;
    const Eigen::VectorXd schur_b = A_ie.transpose() * rec.rhs;
    for (std::size_t r = 0; r < edge_cols.size(); ++r) {
      out.sys.b[edge_cols[r]] -= schur_b[static_cast<int>(r)];
      for (std::size_t c = 0; c < edge_cols.size(); ++c)
        trips.push_back({edge_cols[r], edge_cols[c],
                         -schur(static_cast<int>(r), static_cast<int>(c))});
    }
    out.recovery.push_back(std::move(rec));
  }

  out.sys.A = compress(ne, trips);
  return out;
}

}  // namespace wgfem
