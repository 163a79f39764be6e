#pragma once

#include <string>

#include "madeup/mesh.hpp"
#include "madeup/turtle.hpp"

namespace madeup {

struct GridParams {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool wrap_rows = false;
  bool wrap_cols = false;
};

/// Treats the vertex stream as a row-major rows x cols grid and splits every cell into
/// two triangles. Wrap flags add the band of cells joining the last row (column) back to
/// the first.
inline TriangleMesh triangulate_grid(const PathTrace& path, const GridParams& grid) {
  if (grid.rows < 2 || grid.cols < 2) throw MeshError("grid needs at least 2 rows and 2 columns");
  const std::size_t R = grid.rows;
  const std::size_t C = grid.cols;
  if (path.vertices.size() != R * C)
    throw MeshError("grid is " + std::to_string(R) + "x" + std::to_string(C) + " = " +
                    std::to_string(R * C) + " vertices but the path has " +
                    std::to_string(path.vertices.size()));

  TriangleMesh mesh;
  mesh.positions = path.vertices;
  const std::size_t row_cells = R - 1 + (grid.wrap_rows ? 1 : 0);
  const std::size_t col_cells = C - 1 + (grid.wrap_cols ? 1 : 0);
  mesh.triangles.reserve(2 * row_cells * col_cells);
  const auto id = [C](std::size_t r, std::size_t c) { return static_cast<Index>(r * C + c); };
  for (std::size_t r = 0; r < row_cells; ++r) {
    const std::size_t r1 = (r + 1) % R;
    for (std::size_t c = 0; c < col_cells; ++c) {
      const std::size_t c1 = (c + 1) % C;
      mesh.triangles.push_back({id(r, c), id(r, c1), id(r1, c)});
      mesh.triangles.push_back({id(r, c1), id(r1, c1), id(r1, c)});
    }
  }
  return mesh;
}

/// Mesh made of exactly the emitted vertices and faces, winding preserved.
inline TriangleMesh build_manual(const PathTrace& path) {
  if (path.faces.empty()) throw MeshError("no faces were emitted");
  const std::size_t n = path.vertices.size();
  for (std::size_t f = 0; f < path.faces.size(); ++f) {
    const Triangle& t = path.faces[f];
    if (t[0] >= n || t[1] >= n || t[2] >= n)
      throw MeshError("face " + std::to_string(f) + " references a vertex beyond the " +
                      std::to_string(n) + " emitted");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw MeshError("face " + std::to_string(f) + " repeats a vertex index");
  }
  return TriangleMesh{path.vertices, path.faces, {}};
}

}  // namespace madeup
