#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wgfem/mesh.hpp"

namespace wgfem {

PolyMesh2 gen_triangular(int n) {
  if (n < 1) throw MeshError("gen_triangular: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // Negative-slope diagonal from (i, j+1) to (i+1, j).
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
      cells.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  PolyMesh2 mesh = make_mesh(std::move(vertices), std::move(cells));
  mesh.reported_h = 1.0 / n;
  return mesh;
}

namespace {

// Welds duplicate coordinates into shared vertex indices. Points within
// `tol` of each other are identified via a quantized hash grid.
class VertexWelder {
 public:
  explicit VertexWelder(double tol) : tol_(tol) {}

  int add(const Vec2& p) {
    const long long qx = std::llround(p.x() / tol_);
    const long long qy = std::llround(p.y() / tol_);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find(key(qx + dx, qy + dy));
        if (it == grid_.end()) continue;
        for (int idx : it->second)
          if ((points_[idx] - p).norm() <= tol_) return idx;
      }
    }
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    grid_[key(qx, qy)].push_back(idx);
    return idx;
  }

  std::vector<Vec2> take() { return std::move(points_); }

 private:
  static std::uint64_t key(long long x, long long y) {
    return static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL ^
           static_cast<std::uint64_t>(y);
  }
  double tol_;
  std::vector<Vec2> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

PolyMesh2 mesh_from_polygons(const std::vector<std::vector<Vec2>>& polys, double weld_tol,
                             bool merge_slivers) {
  VertexWelder welder(weld_tol);
  std::vector<std::vector<int>> loops;
  loops.reserve(polys.size());
  for (const std::vector<Vec2>& poly : polys) {
    std::vector<int> loop;
    loop.reserve(poly.size());
    for (const Vec2& p : poly) {
      const int idx = welder.add(p);
      if (loop.empty() || loop.back() != idx) loop.push_back(idx);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  std::vector<Vec2> vertices = welder.take();
  if (merge_slivers) merge_sliver_cells(vertices, loops, 1e-12);
  return make_mesh(std::move(vertices), std::move(loops));
}

double loop_area(const std::vector<Vec2>& vertices, const std::vector<int>& loop) {
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec2& p = vertices[loop[i]];
    const Vec2& q = vertices[loop[(i + 1) % loop.size()]];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

}  // namespace

void merge_sliver_cells(const std::vector<Vec2>& vertices,
                        std::vector<std::vector<int>>& loops, double min_area) {
  for (std::size_t s = 0; s < loops.size();) {
    if (loop_area(vertices, loops[s]) >= min_area) {
      ++s;
      continue;
    }
    const std::vector<int> sliver = loops[s];
    // Longest edge of the sliver, traversed as (a, b).
    std::size_t best = 0;
    double best_len = -1.0;
    for (std::size_t i = 0; i < sliver.size(); ++i) {
      const double len =
          (vertices[sliver[i]] - vertices[sliver[(i + 1) % sliver.size()]]).norm();
      if (len > best_len) {
        best_len = len;
        best = i;
      }
    }
    const int a = sliver[best];
    const int b = sliver[(best + 1) % sliver.size()];
    // Path b -> ... -> a around the rest of the sliver.
    std::vector<int> path;
    for (std::size_t i = 2; i < sliver.size(); ++i)
      path.push_back(sliver[(best + i) % sliver.size()]);

    bool merged = false;
    for (std::size_t c = 0; c < loops.size() && !merged; ++c) {
      if (c == s) continue;
      std::vector<int>& host = loops[c];
      for (std::size_t i = 0; i < host.size(); ++i) {
        // The neighbor traverses the shared edge in the opposite direction.
        if (host[i] == b && host[(i + 1) % host.size()] == a) {
          host.insert(host.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.begin(),
                      path.end());
          merged = true;
          break;
        }
      }
    }
    loops.erase(loops.begin() + static_cast<std::ptrdiff_t>(s));
    if (!merged && best_len > 0.0 && loop_area(vertices, sliver) > 0.0) {
      // No neighbor shares the edge (isolated degenerate scrap): dropping it
      // loses at most min_area of coverage.
    }
  }
}

PolyMesh2 gen_quadrilateral(int level) {
  if (level < 0) throw MeshError("gen_quadrilateral: level must be >= 0");
  // Initial mesh: 2x2 grid with the interior vertex displaced so all four
  // cells are genuinely non-affine quadrilaterals.
  const Vec2 P(0.5625, 0.4375);
  std::vector<std::vector<Vec2>> quads = {
      {Vec2(0, 0), Vec2(0.5, 0), P, Vec2(0, 0.5)},
      {Vec2(0.5, 0), Vec2(1, 0), Vec2(1, 0.5), P},
      {P, Vec2(1, 0.5), Vec2(1, 1), Vec2(0.5, 1)},
      {Vec2(0, 0.5), P, Vec2(0.5, 1), Vec2(0, 1)},
  };
  double h0 = 0.0;
  for (const auto& q : quads) h0 = std::max(h0, cell_geometry(q).diameter);

  for (int l = 0; l < level; ++l) {
    std::vector<std::vector<Vec2>> next;
    next.reserve(quads.size() * 4);
    for (const std::vector<Vec2>& q : quads) {
      const Vec2 g = cell_geometry(q).centroid;
      const std::size_t m = q.size();
      for (std::size_t i = 0; i < m; ++i) {
        const Vec2 mid_prev = 0.5 * (q[(i + m - 1) % m] + q[i]);
        const Vec2 mid_next = 0.5 * (q[i] + q[(i + 1) % m]);
        next.push_back({q[i], mid_next, g, mid_prev});
      }
    }
    quads = std::move(next);
  }
  PolyMesh2 mesh = mesh_from_polygons(quads, 1e-12, false);
  mesh.reported_h = h0 / std::pow(2.0, level);
  return mesh;
}

namespace {

// Sutherland-Hodgman clip of a convex loop against axis >= c or axis <= c.
// Intersections are computed from lexicographically ordered endpoints so the
// two cells sharing a cut edge produce bitwise identical points.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, int axis, double c,
                                  bool keep_ge) {
  auto inside = [&](const Vec2& p) { return keep_ge ? p[axis] >= c : p[axis] <= c; };
  auto intersect = [&](Vec2 p, Vec2 q) {
    if (std::make_pair(q.x(), q.y()) < std::make_pair(p.x(), p.y())) std::swap(p, q);
    const double t = (c - p[axis]) / (q[axis] - p[axis]);
    Vec2 r = p + t * (q - p);
    r[axis] = c;
    return r;
  };
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % poly.size()];
    if (inside(cur)) {
      out.push_back(cur);
      if (!inside(nxt)) out.push_back(intersect(cur, nxt));
    } else if (inside(nxt)) {
      out.push_back(intersect(cur, nxt));
    }
  }
  // Remove consecutive duplicates introduced by vertices on the clip line.
  std::vector<Vec2> dedup;
  for (const Vec2& p : out)
    if (dedup.empty() || (dedup.back() - p).norm() > 1e-14) dedup.push_back(p);
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= 1e-14)
    dedup.pop_back();
  return dedup;
}

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

}  // namespace

PolyMesh2 gen_honeycomb(int n_rows) {
  if (n_rows < 2) throw MeshError("gen_honeycomb: n_rows must be >= 2");
  // Pointy-top hexagons: row pitch 1.5 r = 1/n_rows, column pitch sqrt(3) r,
  // odd rows offset by half a column.
  const double r = 2.0 / (3.0 * n_rows);
  const double w = std::sqrt(3.0) * r;
  const double w2 = 0.5 * w;

  std::vector<std::vector<Vec2>> cells;
  const int jmax = static_cast<int>(std::ceil(1.0 / w)) + 1;
  for (int i = 0; i <= n_rows; ++i) {
    const double cy = 1.5 * r * i;
    const double offset = (i % 2 == 0) ? 0.0 : w2;
    for (int j = -jmax; j <= jmax; ++j) {
      const double cx = j * w + offset;
      if (cx + w2 < 0.0 || cx - w2 > 1.0) continue;
      std::vector<Vec2> hex = {
          Vec2(cx + w2, cy + 0.5 * r), Vec2(cx, cy + r),       Vec2(cx - w2, cy + 0.5 * r),
          Vec2(cx - w2, cy - 0.5 * r), Vec2(cx, cy - r),       Vec2(cx + w2, cy - 0.5 * r),
      };
      for (auto [axis, c, keep_ge] : {std::tuple<int, double, bool>{0, 0.0, true},
                                      {0, 1.0, false},
                                      {1, 0.0, true},
                                      {1, 1.0, false}}) {
        hex = clip_half_plane(hex, axis, c, keep_ge);
        if (hex.size() < 3) break;
      }
      if (hex.size() < 3) continue;
      if (polygon_area(hex) <= 0.0) continue;
      cells.push_back(std::move(hex));
    }
  }
  PolyMesh2 mesh = mesh_from_polygons(cells, 1e-12, true);
  mesh.reported_h = 1.0 / n_rows;
  return mesh;
}

}  // namespace wgfem
