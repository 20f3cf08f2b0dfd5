#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wgfem/core.hpp"

namespace wgfem {

/// Mesh edge. Vertices are stored lo < hi; `left` is the adjacent cell the
/// stored unit normal points out of (for interior edges, the cell that
/// traverses the edge lo->hi in its counter-clockwise loop). `right` is the
/// other cell, or -1 on the boundary.
struct Edge {
  int v_lo = -1;
  int v_hi = -1;
  int left = -1;
  int right = -1;
  Vec2 normal = Vec2::Zero();
  double length = 0.0;

  bool boundary() const { return right < 0; }
};

/// Planar polygonal mesh with derived edge topology. Immutable after
/// construction; all derived quantities are filled by make_mesh().
struct PolyMesh2 {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops
  std::vector<Edge> edges;              // sorted by (v_lo, v_hi)
  std::vector<std::vector<int>> cell_edges;  // per cell, edge ids in loop order

  std::vector<double> cell_area;
  std::vector<Vec2> cell_centroid;
  std::vector<double> cell_diameter;  // h_T = max pairwise vertex distance
  double mesh_size = 0.0;             // max_T h_T
  double reported_h = 0.0;            // family convention used in study tables

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  /// Outward unit normal of `edge` as seen from `cell`.
  Vec2 outward_normal(int edge, int cell) const;

  const std::vector<Vec2>& vertex_loop(int cell, std::vector<Vec2>& buf) const;
};

struct CellGeometry {
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
};

/// Shoelace area, area-weighted centroid, and diameter of a CCW simple loop.
/// Throws MeshError on non-positive area.
CellGeometry cell_geometry(const std::vector<Vec2>& loop);

/// Validates the cell loops, derives the edge topology and per-cell geometry.
/// Throws MeshError on orientation, manifoldness or degeneracy violations.
PolyMesh2 make_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

/// n x n grid of (0,1)^2, each square split by its negative-slope diagonal.
/// Reported mesh size is 1/n.
PolyMesh2 gen_triangular(int n);

/// Successive barycenter/edge-midpoint refinements of a fixed non-affine
/// 4-quad initial mesh of (0,1)^2. Reported mesh size halves per level.
PolyMesh2 gen_quadrilateral(int level);

/// Regular-hexagon tiling of (0,1)^2 with `n_rows` rows (vertical pitch
/// 1/n_rows), boundary cells clipped to the square. Reported mesh size is
/// 1/n_rows.
PolyMesh2 gen_honeycomb(int n_rows);

/// Merges any loop with area below `min_area` into the neighbor across its
/// longest edge. Drops degenerate loops with no interior. Used by the
/// honeycomb generator before topology construction.
void merge_sliver_cells(const std::vector<Vec2>& vertices,
                        std::vector<std::vector<int>>& loops, double min_area);

void write_mesh(const PolyMesh2& mesh, std::ostream& out);
void write_mesh(const PolyMesh2& mesh, const std::string& path);
PolyMesh2 read_mesh(std::istream& in);
PolyMesh2 read_mesh(const std::string& path);

}  // namespace wgfem
