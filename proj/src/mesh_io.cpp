#include <cstdio>
#include <fstream>
#include <sstream>

#include "wgfem/mesh.hpp"

namespace wgfem {

namespace {

std::string format_coord(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_mesh(const PolyMesh2& mesh, std::ostream& out) {
  out << "polymesh2 1\n";
  for (const Vec2& v : mesh.vertices)
    out << "v " << format_coord(v.x()) << ' ' << format_coord(v.y()) << '\n';
  for (const std::vector<int>& cell : mesh.cells) {
    out << 'c';
    for (int v : cell) out << ' ' << v;
    out << '\n';
  }
}

void write_mesh(const PolyMesh2& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("write_mesh: cannot open '" + path + "'");
  write_mesh(mesh, out);
}

PolyMesh2 read_mesh(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw MeshError("read_mesh: empty input");
  ++line_no;
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "polymesh2" || version != 1)
      throw MeshError("read_mesh: line 1: expected header 'polymesh2 1'");
  }

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "v") {
      double x = 0.0, y = 0.0;
      if (!(ls >> x >> y))
        throw MeshError("read_mesh: line " + std::to_string(line_no) +
                        ": malformed vertex line");
      vertices.emplace_back(x, y);
    } else if (tag == "c") {
      std::vector<int> cell;
      long long idx = 0;
      while (ls >> idx) {
        if (idx < 0 || idx >= static_cast<long long>(vertices.size()))
          throw MeshError("read_mesh: line " + std::to_string(line_no) + ": cell " +
                          std::to_string(cells.size()) + " has out-of-range vertex index " +
                          std::to_string(idx));
        cell.push_back(static_cast<int>(idx));
      }
      if (!ls.eof())
        throw MeshError("read_mesh: line " + std::to_string(line_no) + ": cell " +
                        std::to_string(cells.size()) + " has a malformed vertex index");
      if (cell.size() < 3)
        throw MeshError("read_mesh: line " + std::to_string(line_no) + ": cell " +
                        std::to_string(cells.size()) + " has fewer than 3 vertices");
      cells.push_back(std::move(cell));
    } else {
      throw MeshError("read_mesh: line " + std::to_string(line_no) +
                      ": unknown record '" + tag + "'");
    }
  }
  if (cells.empty()) throw MeshError("read_mesh: no cells in input");
  return make_mesh(std::move(vertices), std::move(cells));
}

PolyMesh2 read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("read_mesh: cannot open '" + path + "'");
  return read_mesh(in);
}

}  // namespace wgfem
