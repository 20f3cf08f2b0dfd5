#include "wgfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wgfem {

Vec2 PolyMesh2::outward_normal(int edge, int cell) const {
  const Edge& e = edges[edge];
  if (cell == e.left) return e.normal;
  if (cell == e.right) return -e.normal;
  throw MeshError("outward_normal: cell is not adjacent to edge");
}

const std::vector<Vec2>& PolyMesh2::vertex_loop(int cell, std::vector<Vec2>& buf) const {
  buf.clear();
  for (int v : cells[cell]) buf.push_back(vertices[v]);
  return buf;
}

CellGeometry cell_geometry(const std::vector<Vec2>& loop) {
  if (loop.size() < 3) throw MeshError("cell_geometry: fewer than 3 vertices");
  double twice_area = 0.0;
  Vec2 moment = Vec2::Zero();
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec2& p = loop[i];
    const Vec2& q = loop[(i + 1) % loop.size()];
    const double cross = p.x() * q.y() - q.x() * p.y();
    twice_area += cross;
    moment += cross * (p + q);
  }
  if (!(twice_area > 0.0))
    throw MeshError("cell_geometry: non-positive area (loop must be simple CCW)");
  CellGeometry g;
  g.area = 0.5 * twice_area;
  g.centroid = moment / (3.0 * twice_area);
  for (std::size_t i = 0; i < loop.size(); ++i)
    for (std::size_t j = i + 1; j < loop.size(); ++j)
      g.diameter = std::max(g.diameter, (loop[i] - loop[j]).norm());
  return g;
}

PolyMesh2 make_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells) {
  PolyMesh2 mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  const int nv = mesh.n_vertices();
  if (mesh.cells.empty()) throw MeshError("make_mesh: empty cell list");

  mesh.cell_area.resize(mesh.n_cells());
  mesh.cell_centroid.resize(mesh.n_cells());
  mesh.cell_diameter.resize(mesh.n_cells());
  std::vector<Vec2> loop;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& cell = mesh.cells[c];
    if (cell.size() < 3)
      throw MeshError("make_mesh: cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= nv)
        throw MeshError("make_mesh: cell " + std::to_string(c) +
                        " references invalid vertex " + std::to_string(v));
    loop.clear();
    for (int v : cell) loop.push_back(mesh.vertices[v]);
    CellGeometry g;
    try {
      g = cell_geometry(loop);
    } catch (const MeshError& err) {
      throw MeshError("make_mesh: cell " + std::to_string(c) + ": " + err.what());
    }
    mesh.cell_area[c] = g.area;
    mesh.cell_centroid[c] = g.centroid;
    mesh.cell_diameter[c] = g.diameter;
  }
  mesh.mesh_size = *std::max_element(mesh.cell_diameter.begin(), mesh.cell_diameter.end());
  mesh.reported_h = mesh.mesh_size;

  // Collect edges keyed by (lo, hi); a std::map gives the required
  // deterministic (v_lo, v_hi) ordering directly.
  struct Incidence {
    int forward_cell = -1;  // traverses lo -> hi
    int backward_cell = -1;
    int count = 0;
  };
  std::map<std::pair<int, int>, Incidence> table;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& cell = mesh.cells[c];
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const int u = cell[i];
      const int w = cell[(i + 1) % cell.size()];
      if (u == w)
        throw MeshError("make_mesh: cell " + std::to_string(c) + " repeats vertex " +
                        std::to_string(u));
      Incidence& inc = table[{std::min(u, w), std::max(u, w)}];
      inc.count++;
      if (inc.count > 2)
        throw MeshError("make_mesh: non-manifold edge (" + std::to_string(u) + "," +
                        std::to_string(w) + ") with 3+ incident cells");
      int& slot = (u < w) ? inc.forward_cell : inc.backward_cell;
      if (slot >= 0)
        throw MeshError("make_mesh: edge (" + std::to_string(u) + "," + std::to_string(w) +
                        ") traversed twice in the same direction (orientation error)");
      slot = c;
    }
  }

  mesh.edges.reserve(table.size());
  for (const auto& [key, inc] : table) {
    Edge e;
    e.v_lo = key.first;
    e.v_hi = key.second;
    const Vec2 d = mesh.vertices[e.v_hi] - mesh.vertices[e.v_lo];
    e.length = d.norm();
    if (e.length < 1e-14)
      throw MeshError("make_mesh: zero-length edge (" + std::to_string(e.v_lo) + "," +
                      std::to_string(e.v_hi) + ")");
    Vec2 n_forward(d.y() / e.length, -d.x() / e.length);  // outward of the lo->hi cell
    if (inc.forward_cell >= 0) {
      e.left = inc.forward_cell;
      e.right = inc.backward_cell;
      e.normal = n_forward;
    } else {
      // Boundary edge owned by a cell traversing hi -> lo.
      e.left = inc.backward_cell;
      e.right = -1;
      e.normal = -n_forward;
    }
    mesh.edges.push_back(e);
  }

  std::map<std::pair<int, int>, int> edge_index;
  for (int i = 0; i < mesh.n_edges(); ++i)
    edge_index[{mesh.edges[i].v_lo, mesh.edges[i].v_hi}] = i;
  mesh.cell_edges.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const std::vector<int>& cell = mesh.cells[c];
    mesh.cell_edges[c].reserve(cell.size());
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const int u = cell[i];
      const int w = cell[(i + 1) % cell.size()];
      mesh.cell_edges[c].push_back(edge_index.at({std::min(u, w), std::max(u, w)}));
    }
  }
  return mesh;
}

}  // namespace wgfem
