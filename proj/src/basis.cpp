#include "wgfem/basis.hpp"

#include <cmath>

namespace wgfem {

// Graded-lex ordering: within each total degree d the x power descends,
// giving 1, x, y, x^2, xy, y^2, ... in the scaled variables.
void CellBasis::eval(const Vec2& p, Eigen::VectorXd& values) const {
  const double xi = (p.x() - center.x()) / scale;
  const double eta = (p.y() - center.y()) / scale;
  values.resize(dim());
  int idx = 0;
  for (int d = 0; d <= order; ++d)
    for (int b = 0; b <= d; ++b)
      values[idx++] = std::pow(xi, d - b) * std::pow(eta, b);
}

void CellBasis::eval(const Vec2& p, Eigen::VectorXd& values,
                     Eigen::MatrixXd& gradients) const {
  const double xi = (p.x() - center.x()) / scale;
  const double eta = (p.y() - center.y()) / scale;
  values.resize(dim());
  gradients.resize(dim(), 2);
  int idx = 0;
  for (int d = 0; d <= order; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      const double xa = std::pow(xi, a);
      const double yb = std::pow(eta, b);
      values[idx] = xa * yb;
      gradients(idx, 0) = a == 0 ? 0.0 : a * std::pow(xi, a - 1) * yb / scale;
      gradients(idx, 1) = b == 0 ? 0.0 : b * xa * std::pow(eta, b - 1) / scale;
      ++idx;
    }
  }
}

double EdgeBasis::param(const Vec2& p) const {
  const Vec2 mid = 0.5 * (a + b);
  const Vec2 t = (b - a) / length();
  return 2.0 * (p - mid).dot(t) / length();
}

void EdgeBasis::eval(double s, Eigen::VectorXd& values) const {
  values.resize(modes);
  double p0 = 1.0, p1 = s;
  for (int m = 0; m < modes; ++m) {
    if (m == 0) {
      values[m] = 1.0;
    } else if (m == 1) {
      values[m] = s;
    } else {
      const double p2 = ((2 * m - 1) * s * p1 - (m - 1) * p0) / m;
      p0 = p1;
      p1 = p2;
      values[m] = p2;
    }
  }
}

CellBasis make_cell_basis(const PolyMesh2& mesh, int cell, int order) {
  return CellBasis{order, mesh.cell_centroid[cell], mesh.cell_diameter[cell]};
}

EdgeBasis make_edge_basis(const PolyMesh2& mesh, int edge, int modes) {
  const Edge& e = mesh.edges[edge];
  return EdgeBasis{mesh.vertices[e.v_lo], mesh.vertices[e.v_hi], modes};
}

VecBasis make_vec_basis(const PolyMesh2& mesh, int cell, int k) {
  return VecBasis{make_cell_basis(mesh, cell, k - 1)};
}

Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadRule& rule) {
  const int n = basis.dim();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd vals;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.eval(rule.points[q], vals);
    mass.selfadjointView<Eigen::Lower>().rankUpdate(vals, rule.weights[q]);
  }
  return mass.selfadjointView<Eigen::Lower>();
}

}  // namespace wgfem
