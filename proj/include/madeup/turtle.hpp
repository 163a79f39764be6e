#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "madeup/vec3.hpp"

namespace madeup {

/// How the vertex stream becomes geometry.
enum class GeometryMode { polyline, parametric, triangles };

inline const char* to_string(GeometryMode m) {
  switch (m) {
    case GeometryMode::polyline: return "polyline";
    case GeometryMode::parametric: return "parametric";
    case GeometryMode::triangles: return "triangles";
  }
  return "?";
}

class TurtleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position plus a right-handed orthonormal frame: right x heading = up.
struct TurtleState {
  Vec3 position{0, 0, 0};
  Vec3 heading{0, 1, 0};
  Vec3 up{0, 0, 1};
  Vec3 right{1, 0, 0};
};

struct PathTrace {
  std::vector<Vec3> vertices;
  GeometryMode mode = GeometryMode::polyline;
  std::vector<Triangle> faces;  // triangles mode only
};

/// Interprets navigation commands and records every stop.
class Turtle {
 public:
  explicit Turtle(GeometryMode mode = GeometryMode::polyline) { trace_.mode = mode; }

  void move(double distance) {
    if (!std::isfinite(distance)) throw TurtleError("move distance must be finite");
    // The first relative move also records where it started.
    if (trace_.vertices.empty()) trace_.vertices.push_back(state_.position);
    state_.position += state_.heading * distance;
    trace_.vertices.push_back(state_.position);
  }

  void moveto(double x, double y, double z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      throw TurtleError("moveto coordinates must be finite");
    state_.position = {x, y, z};
    trace_.vertices.push_back(state_.position);
  }

  void yaw(double degrees) {
    const double a = radians(degrees, "yaw");
    state_.heading = rotate(state_.heading, state_.up, a);
    state_.right = rotate(state_.right, state_.up, a);
    reorthonormalize();
  }

  void pitch(double degrees) {
    const double a = radians(degrees, "pitch");
    state_.heading = rotate(state_.heading, state_.right, a);
    state_.up = rotate(state_.up, state_.right, a);
    reorthonormalize();
  }

  void roll(double degrees) {
    const double a = radians(degrees, "roll");
    state_.right = rotate(state_.right, state_.heading, a);
    state_.up = rotate(state_.up, state_.heading, a);
    reorthonormalize();
  }

  void emit_face(std::size_t i, std::size_t j, std::size_t k) {
    if (trace_.mode != GeometryMode::triangles)
      throw TurtleError("faces can only be emitted in triangles mode");
    const std::size_t n = trace_.vertices.size();
    if (i >= n || j >= n || k >= n)
      throw TurtleError("face index out of range (" + std::to_string(n) + " vertices emitted)");
    if (i == j || j == k || i == k) throw TurtleError("face indices must be distinct");
    trace_.faces.push_back({static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(k)});
  }

  std::size_t vertex_count() const { return trace_.vertices.size(); }
  const TurtleState& state() const { return state_; }
  const PathTrace& trace() const { return trace_; }
  PathTrace take_trace() { return std::move(trace_); }

 private:
  TurtleState state_;
  PathTrace trace_;

  static double radians(double degrees, const char* command) {
    if (!std::isfinite(degrees)) throw TurtleError(std::string(command) + " angle must be finite");
    return degrees * std::numbers::pi / 180.0;
  }

  // Gram-Schmidt with heading as the anchor.
  void reorthonormalize() {
    state_.heading = normalized(state_.heading);
    state_.up = normalized(state_.up - state_.heading * dot(state_.up, state_.heading));
    state_.right = cross(state_.heading, state_.up);
  }
};

/// One `x y z` line per vertex, 17 significant digits.
inline std::string write_trace(const PathTrace& trace) {
  std::string out;
  char buf[96];
  for (const Vec3& v : trace.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  return out;
}

}  // namespace madeup
