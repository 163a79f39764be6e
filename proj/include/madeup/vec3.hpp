#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace madeup {

using Index = std::uint32_t;

/// Vertex indices of one triangle, in winding order.
using Triangle = std::array<Index, 3>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Unit vector along `v`; the zero vector is returned unchanged.
inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : v;
}

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Rotates `v` about the unit `axis` by `radians`, counterclockwise by the right-hand rule.
inline Vec3 rotate(const Vec3& v, const Vec3& axis, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1.0 - c));
}

/// Smallest rotation taking unit vector `from` onto unit vector `to`, applied to `v`.
/// Antiparallel inputs have no unique minimal rotation; `v` is then rotated by pi about
/// an axis orthogonal to `from`.
inline Vec3 rotate_between(const Vec3& v, const Vec3& from, const Vec3& to) {
  const Vec3 axis = cross(from, to);
  const double s = norm(axis);
  const double c = dot(from, to);
  if (s < 1e-12) {
    if (c > 0.0) return v;
    Vec3 ortho = cross(from, Vec3{1, 0, 0});
    if (norm(ortho) < 1e-6) ortho = cross(from, Vec3{0, 1, 0});
    return rotate(v, normalized(ortho), std::numbers::pi);
  }
  return rotate(v, axis / s, std::atan2(s, c));
}

}  // namespace madeup
