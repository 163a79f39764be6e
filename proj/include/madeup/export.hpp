#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "madeup/mesh.hpp"
#include "madeup/turtle.hpp"

namespace madeup {

enum class ExportFormat { obj, stl_binary, stl_ascii, mesh_json };

struct ExportOptions {
  ExportFormat format = ExportFormat::obj;
  int decimal_digits = 6;  // OBJ and ASCII STL only, in [1, 17]
};

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kStlHeaderText = "madeup-forge";

/// Fixed-point with at most `digits` fraction digits; trailing zeros trimmed, -0 -> 0.
inline std::string format_decimal(double v, int digits) {
  if (digits < 1 || digits > 17) throw ExportError("decimal_digits must be in [1, 17]");
  char buf[400];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline std::string write_obj(const TriangleMesh& mesh, int decimal_digits = 6) {
  std::string out;
  for (const Vec3& p : mesh.positions) {
    out += "v " + format_decimal(p.x, decimal_digits) + ' ' + format_decimal(p.y, decimal_digits) +
           ' ' + format_decimal(p.z, decimal_digits) + '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + 1ull) + ' ' + std::to_string(t[1] + 1ull) + ' ' +
           std::to_string(t[2] + 1ull) + '\n';
  }
  return out;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

inline float get_f32(std::string_view in, std::size_t at) {
  return std::bit_cast<float>(get_u32(in, at));
}

}  // namespace detail

/// Unit face normal from winding; zero for degenerate triangles.
inline Vec3 face_normal(const TriangleMesh& mesh, const Triangle& t) {
  return normalized(area_normal(mesh, t));
}

/// Binary STL: 80-byte header, little-endian u32 count, 50 bytes per triangle.
inline std::string write_stl_binary(const TriangleMesh& mesh) {
  if (mesh.triangles.size() > std::numeric_limits<std::uint32_t>::max())
    throw ExportError("too many triangles for binary STL");
  std::string out(80, '\0');
  std::memcpy(out.data(), kStlHeaderText.data(), kStlHeaderText.size());
  out.reserve(84 + 50 * mesh.triangles.size());
  detail::put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
  for (const Triangle& t : mesh.triangles) {
    const Vec3 n = face_normal(mesh, t);
    for (double c : {n.x, n.y, n.z}) detail::put_f32(out, c);
    for (Index i : t) {
      const Vec3& p = mesh.positions[i];
      for (double c : {p.x, p.y, p.z}) detail::put_f32(out, c);
    }
    out.push_back('\0');
    out.push_back('\0');
  }
  return out;
}

inline std::string write_stl_ascii(const TriangleMesh& mesh, int decimal_digits = 6) {
  const auto vec = [&](const Vec3& v) {
    return format_decimal(v.x, decimal_digits) + ' ' + format_decimal(v.y, decimal_digits) + ' ' +
           format_decimal(v.z, decimal_digits);
  };
  std::string out = "solid " + std::string(kStlHeaderText) + '\n';
  for (const Triangle& t : mesh.triangles) {
    out += "  facet normal " + vec(face_normal(mesh, t)) + "\n    outer loop\n";
    for (Index i : t) out += "      vertex " + vec(mesh.positions[i]) + '\n';
    out += "    endloop\n  endfacet\n";
  }
  out += "endsolid " + std::string(kStlHeaderText) + '\n';
  return out;
}

/// Playground interchange object: positions, triangles, normals, path; flat arrays.
inline nlohmann::ordered_json mesh_json(const TriangleMesh& mesh, const PathTrace& path) {
  using nlohmann::ordered_json;
  ordered_json positions = ordered_json::array();
  for (const Vec3& p : mesh.positions) positions.insert(positions.end(), {p.x, p.y, p.z});
  ordered_json triangles = ordered_json::array();
  for (const Triangle& t : mesh.triangles) triangles.insert(triangles.end(), {t[0], t[1], t[2]});

  std::vector<Vec3> normals = mesh.normals;
  if (normals.size() != mesh.positions.size()) {
    TriangleMesh copy{mesh.positions, mesh.triangles, {}};
    compute_normals(copy);
    normals = std::move(copy.normals);
  }
  ordered_json normal_list = ordered_json::array();
  for (const Vec3& n : normals) normal_list.insert(normal_list.end(), {n.x, n.y, n.z});
  ordered_json path_list = ordered_json::array();
  for (const Vec3& v : path.vertices) path_list.insert(path_list.end(), {v.x, v.y, v.z});

  ordered_json j;
  j["positions"] = std::move(positions);
  j["triangles"] = std::move(triangles);
  j["normals"] = std::move(normal_list);
  j["path"] = std::move(path_list);
  return j;
}

inline std::string write_mesh_json(const TriangleMesh& mesh, const PathTrace& path) {
  return mesh_json(mesh, path).dump();
}

/// Serializes in the chosen format. Binary STL is returned as raw bytes.
inline std::string export_mesh(const TriangleMesh& mesh, const PathTrace& path,
                               const ExportOptions& options) {
  if (options.decimal_digits < 1 || options.decimal_digits > 17)
    throw ExportError("decimal_digits must be in [1, 17]");
  switch (options.format) {
    case ExportFormat::obj: return write_obj(mesh, options.decimal_digits);
    case ExportFormat::stl_binary: return write_stl_binary(mesh);
    case ExportFormat::stl_ascii: return write_stl_ascii(mesh, options.decimal_digits);
    case ExportFormat::mesh_json: return write_mesh_json(mesh, path);
  }
  throw ExportError("unknown export format");
}

/// Reads `v` and triangular `f` records; other records are ignored. Accepts `i/t/n` forms.
inline TriangleMesh read_obj(std::string_view text) {
  TriangleMesh mesh;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw ExportError("bad vertex on OBJ line " + std::to_string(lineno));
      mesh.positions.push_back(p);
    } else if (tag == "f") {
      Triangle t{};
      for (auto& idx : t) {
        std::string ref;
        if (!(ls >> ref)) throw ExportError("OBJ face on line " + std::to_string(lineno) + " is not a triangle");
        const long long v = std::stoll(ref.substr(0, ref.find('/')));
        if (v < 1 || static_cast<std::size_t>(v) > mesh.positions.size())
          throw ExportError("OBJ face index out of range on line " + std::to_string(lineno));
        idx = static_cast<Index>(v - 1);
      }
      mesh.triangles.push_back(t);
    }
  }
  return mesh;
}

/// Unindexed read: three fresh positions per triangle, in file order.
inline TriangleMesh read_stl_binary(std::string_view bytes) {
  if (bytes.size() < 84) throw ExportError("binary STL shorter than its 84-byte preamble");
  const std::uint32_t count = detail::get_u32(bytes, 80);
  if (bytes.size() != 84 + 50ull * count)
    throw ExportError("binary STL size does not match its triangle count");
  TriangleMesh mesh;
  mesh.positions.reserve(3ull * count);
  for (std::uint32_t f = 0; f < count; ++f) {
    const std::size_t base = 84 + 50ull * f + 12;
    Triangle t{};
    for (int v = 0; v < 3; ++v) {
      const std::size_t at = base + 12 * v;
      mesh.positions.push_back({detail::get_f32(bytes, at), detail::get_f32(bytes, at + 4),
                                detail::get_f32(bytes, at + 8)});
      t[v] = static_cast<Index>(mesh.positions.size() - 1);
    }
    mesh.triangles.push_back(t);
  }
  return mesh;
}

}  // namespace madeup
