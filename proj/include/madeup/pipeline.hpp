#pragma once

#include <string_view>
#include <vector>

#include "madeup/diagnostic.hpp"
#include "madeup/interpreter.hpp"
#include "madeup/mesh.hpp"
#include "madeup/parser.hpp"
#include "madeup/surface.hpp"
#include "madeup/sweep.hpp"
#include "madeup/turtle.hpp"

namespace madeup {

struct RunOptions {
  GeometryMode mode = GeometryMode::polyline;
  TubeParams tube;
  GridParams grid;
  EvalLimits limits;
};

struct RunOutcome {
  bool ok = false;
  Value value;
  PathTrace path;
  TriangleMesh mesh;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
};

/// Solidifies a trace according to its mode. An empty trace gives an empty mesh.
inline TriangleMesh build_mesh(const PathTrace& path, const RunOptions& options) {
  if (path.vertices.empty()) return {};
  switch (options.mode) {
    case GeometryMode::polyline: return sweep_polytube(path, options.tube);
    case GeometryMode::parametric: return triangulate_grid(path, options.grid);
    case GeometryMode::triangles: return build_manual(path);
  }
  throw MeshError("unknown geometry mode");
}

/// Parse and evaluate `source`, recording the turtle's trace but building no mesh.
inline RunOutcome trace_source(std::string_view source, const RunOptions& options) {
  RunOutcome out;
  auto program = parse_source(source);
  if (!program) {
    out.errors = program.diagnostics();
    return out;
  }
  Turtle turtle(options.mode);
  Environment env;
  try {
    out.value = evaluate(program.value(), env, turtle, options.limits, &out.warnings);
    out.ok = true;
  } catch (const RuntimeError& e) {
    out.errors.push_back(e.diagnostic());
  }
  out.path = turtle.take_trace();
  return out;
}

/// Parse, evaluate, and mesh `source`. Failures of any stage land in `errors`; geometry
/// errors, which have no source location, point at line 1, column 1.
inline RunOutcome run_source(std::string_view source, const RunOptions& options) {
  RunOutcome out = trace_source(source, options);
  if (!out.ok) return out;
  try {
    out.mesh = build_mesh(out.path, options);
  } catch (const MeshError& e) {
    out.errors.push_back({Severity::error, e.what(), {1, 1}});
    out.ok = false;
    return out;
  }
  compute_normals(out.mesh);
  return out;
}

}  // namespace madeup
