#pragma once

#include <vector>

#include "wgfem/core.hpp"
#include "wgfem/mesh.hpp"
#include "wgfem/quadrature.hpp"

namespace wgfem {

/// Scaled monomial basis of P_k on a cell: ((x-x_T)/h_T)^a ((y-y_T)/h_T)^b
/// for a+b <= k in graded lexicographic order. The first function is the
/// constant 1.
struct CellBasis {
  int order = 0;
  Vec2 center = Vec2::Zero();
  double scale = 1.0;

  int dim() const { return (order + 1) * (order + 2) / 2; }

  /// Values of all basis functions at a point (evaluation outside the cell is
  /// permitted; traces on the boundary use it).
  void eval(const Vec2& p, Eigen::VectorXd& values) const;
  /// Values and Cartesian gradients; `gradients` is dim x 2.
  void eval(const Vec2& p, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const;
};

/// Legendre modes P_0..P_{modes-1} in the chordwise parameter s of an edge,
/// oriented from the lower to the higher vertex index so shared coefficients
/// mean the same polynomial from both sides.
struct EdgeBasis {
  Vec2 a = Vec2::Zero();  // endpoint at s = -1 (lower vertex index)
  Vec2 b = Vec2::Zero();  // endpoint at s = +1
  int modes = 1;

  double length() const { return (b - a).norm(); }
  double param(const Vec2& p) const;
  void eval(double s, Eigen::VectorXd& values) const;
};

/// [P_{k-1}]^2 written as two copies of a scalar CellBasis: functions
/// 0..d-1 occupy the x slot, d..2d-1 the y slot, d = scalar.dim().
struct VecBasis {
  CellBasis scalar;

  int dim() const { return 2 * scalar.dim(); }
};

CellBasis make_cell_basis(const PolyMesh2& mesh, int cell, int order);
EdgeBasis make_edge_basis(const PolyMesh2& mesh, int edge, int modes);
VecBasis make_vec_basis(const PolyMesh2& mesh, int cell, int k);

/// Mass matrix of a CellBasis over its cell, integrated with `rule`.
Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadRule& rule);

}  // namespace wgfem
