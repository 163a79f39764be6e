#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "madeup/mesh.hpp"
#include "madeup/turtle.hpp"
#include "madeup/vec3.hpp"

namespace madeup {

struct TubeParams {
  int sides = 8;
  double radius = 0.5;
  // First and last path vertices closer than this make a closed loop.
  double closure_epsilon = 1e-6;
};

/// Consecutive vertices closer than `tolerance` are merged into the first of the run.
inline std::vector<Vec3> collapse_duplicates(std::span<const Vec3> points, double tolerance = 1e-9) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points)
    if (out.empty() || distance(out.back(), p) >= tolerance) out.push_back(p);
  return out;
}

namespace detail {

// First ring's reference direction. Taken from the first bend of the path so the tube
// moves rigidly with its path; a straight path falls back to global +Z, or +X when the
// path runs along Z.
inline Vec3 seed_direction(std::span<const Vec3> segments, const Vec3& tangent) {
  for (const Vec3& s : segments) {
    if (norm(cross(s, tangent)) > 1e-6) return normalized(s - tangent * dot(s, tangent));
  }
  Vec3 ref{0, 0, 1};
  if (norm(cross(ref, tangent)) < 1e-6) ref = {1, 0, 0};
  return normalized(ref - tangent * dot(ref, tangent));
}

}  // namespace detail

/// Sweeps a regular `sides`-gon of `radius` along the path using parallel-transport
/// frames. Ring planes at interior vertices are normal to the mean of the adjacent
/// segment directions. A path whose ends meet within `closure_epsilon` produces a
/// closed torus-like tube; otherwise both ends are capped with fans. Faces wind
/// counterclockwise seen from outside.
inline TriangleMesh sweep_polytube(std::span<const Vec3> path_points, const TubeParams& params = {}) {
  if (params.sides < 3) throw MeshError("tube needs at least 3 sides");
  if (!(params.radius > 0.0) || !std::isfinite(params.radius))
    throw MeshError("tube radius must be positive and finite");
  if (!(params.closure_epsilon >= 0.0)) throw MeshError("closure epsilon must be non-negative");

  std::vector<Vec3> pts = collapse_duplicates(path_points);
  if (pts.size() < 2) throw MeshError("polytube needs at least 2 distinct path vertices");

  const bool closed = pts.size() >= 4 && distance(pts.front(), pts.back()) <= params.closure_epsilon;
  if (closed) pts.pop_back();
  const std::size_t m = pts.size();
  const std::size_t nseg = closed ? m : m - 1;

  std::vector<Vec3> seg(nseg);
  for (std::size_t i = 0; i < nseg; ++i) seg[i] = normalized(pts[(i + 1) % m] - pts[i]);

  std::vector<Vec3> tangent(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vec3 t;
    if (!closed && i == 0) t = seg.front();
    else if (!closed && i == m - 1) t = seg.back();
    else t = seg[(i + nseg - 1) % nseg] + seg[i % nseg];
    if (norm(t) < 1e-9)
      throw MeshError("degenerate frame: path reverses on itself at vertex " + std::to_string(i));
    tangent[i] = normalized(t);
  }

  std::vector<Vec3> ref(m);
  ref[0] = detail::seed_direction(seg, tangent[0]);
  for (std::size_t i = 1; i < m; ++i) {
    const Vec3 u = rotate_between(ref[i - 1], tangent[i - 1], tangent[i]);
    ref[i] = normalized(u - tangent[i] * dot(u, tangent[i]));
  }
  if (closed) {
    // Spread the holonomy of the loop evenly so the last ring meets the first untwisted.
    const Vec3 wrapped = rotate_between(ref[m - 1], tangent[m - 1], tangent[0]);
    const double phi =
        std::atan2(dot(cross(wrapped, ref[0]), tangent[0]), dot(wrapped, ref[0]));
    for (std::size_t i = 1; i < m; ++i)
      ref[i] = rotate(ref[i], tangent[i], phi * static_cast<double>(i) / static_cast<double>(m));
  }

  const auto sides = static_cast<std::size_t>(params.sides);
  TriangleMesh mesh;
  mesh.positions.reserve(m * sides);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 u = ref[i];
    const Vec3 v = cross(tangent[i], u);
    for (std::size_t k = 0; k < sides; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(sides);
      mesh.positions.push_back(pts[i] + (u * std::cos(theta) + v * std::sin(theta)) * params.radius);
    }
  }

  const auto at = [sides](std::size_t ring, std::size_t k) {
    return static_cast<Index>(ring * sides + k % sides);
  };
  const std::size_t bands = closed ? m : m - 1;
  mesh.triangles.reserve(2 * sides * bands + (closed ? 0 : 2 * (sides - 2)));
  for (std::size_t i = 0; i < bands; ++i) {
    const std::size_t j = (i + 1) % m;
    for (std::size_t k = 0; k < sides; ++k) {
      mesh.triangles.push_back({at(i, k), at(i, k + 1), at(j, k)});
      mesh.triangles.push_back({at(i, k + 1), at(j, k + 1), at(j, k)});
    }
  }
  if (!closed) {
    for (std::size_t k = 1; k + 1 < sides; ++k) mesh.triangles.push_back({at(0, 0), at(0, k + 1), at(0, k)});
    for (std::size_t k = 1; k + 1 < sides; ++k)
      mesh.triangles.push_back({at(m - 1, 0), at(m - 1, k), at(m - 1, k + 1)});
  }
  return mesh;
}

inline TriangleMesh sweep_polytube(const PathTrace& path, const TubeParams& params = {}) {
  return sweep_polytube(std::span<const Vec3>(path.vertices), params);
}

}  // namespace madeup
