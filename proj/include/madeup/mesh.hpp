#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "madeup/vec3.hpp"

namespace madeup {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TriangleMesh {
  std::vector<Vec3> positions;
  std::vector<Triangle> triangles;
  std::vector<Vec3> normals;  // empty until compute_normals, then one per position

  std::size_t vertex_count() const { return positions.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

/// Unnormalized normal of a triangle: twice its area along the winding direction.
inline Vec3 area_normal(const TriangleMesh& mesh, const Triangle& t) {
  const Vec3& a = mesh.positions[t[0]];
  return cross(mesh.positions[t[1]] - a, mesh.positions[t[2]] - a);
}

struct ValidationReport {
  bool index_ok = true;
  std::size_t degenerate_count = 0;
  std::size_t boundary_edge_count = 0;
  // Edges shared by more than two triangles, or by two with the same direction.
  std::size_t nonmanifold_edge_count = 0;
  std::size_t edge_count = 0;
  long long euler_characteristic = 0;

  bool watertight() const {
    return index_ok && boundary_edge_count == 0 && nonmanifold_edge_count == 0;
  }
};

/// Topological audit. Never throws; out-of-range triangles are reported and skipped.
inline ValidationReport validate_mesh(const TriangleMesh& mesh) {
  ValidationReport report;
  struct EdgeUse {
    std::uint32_t forward = 0;  // uses as (low -> high)
    std::uint32_t backward = 0;
  };
  std::unordered_map<std::uint64_t, EdgeUse> edges;
  edges.reserve(mesh.triangles.size() * 2);
  const std::size_t n = mesh.positions.size();

  for (const Triangle& t : mesh.triangles) {
    if (t[0] >= n || t[1] >= n || t[2] >= n) {
      report.index_ok = false;
      continue;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      report.index_ok = false;
      ++report.degenerate_count;
      continue;
    }
    const Vec3 an = area_normal(mesh, t);
    if (!(dot(an, an) > 0.0)) ++report.degenerate_count;
    for (int e = 0; e < 3; ++e) {
      const Index a = t[e];
      const Index b = t[(e + 1) % 3];
      const auto lo = std::min(a, b);
      const auto hi = std::max(a, b);
      auto& use = edges[(static_cast<std::uint64_t>(lo) << 32) | hi];
      (a < b ? use.forward : use.backward)++;
    }
  }

  for (const auto& [key, use] : edges) {
    const auto total = use.forward + use.backward;
    if (total == 1) ++report.boundary_edge_count;
    else if (total > 2 || use.forward != 1) ++report.nonmanifold_edge_count;
  }
  report.edge_count = edges.size();
  report.euler_characteristic = static_cast<long long>(n) -
                                static_cast<long long>(edges.size()) +
                                static_cast<long long>(mesh.triangles.size());
  return report;
}

/// Fills `mesh.normals` with normalized, area-weighted vertex normals. Vertices whose
/// accumulated normal is zero get +Z and are returned.
inline std::vector<Index> compute_normals(TriangleMesh& mesh) {
  std::vector<Vec3> accum(mesh.positions.size());
  for (const Triangle& t : mesh.triangles) {
    const Vec3 an = area_normal(mesh, t);
    for (Index i : t) accum[i] += an;
  }
  std::vector<Index> flagged;
  for (std::size_t i = 0; i < accum.size(); ++i) {
    const double len = norm(accum[i]);
    if (len > 0.0 && std::isfinite(len)) {
      accum[i] = accum[i] / len;
    } else {
      accum[i] = {0, 0, 1};
      flagged.push_back(static_cast<Index>(i));
    }
  }
  mesh.normals = std::move(accum);
  return flagged;
}

}  // namespace madeup
