#pragma once

#include <algorithm>
#include <cmath>
#include <variant>

namespace ifgx {

/// World-frame vector in meters; y is up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return a * s; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return length(a - b); }
inline bool isFinite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Unit vector along v, or zero when v is (numerically) zero.
inline Vec3 normalized(const Vec3& v) {
  const double len = length(v);
  return len > 1e-12 ? v / len : Vec3{};
}

/// Rotates v about the world y axis by yawDeg degrees (clockwise seen from above,
/// so +90 maps +z onto +x).
inline Vec3 rotateYaw(const Vec3& v, double yawDeg) {
  const double rad = yawDeg * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

struct Sphere {
  double radius = 0.0;
  friend bool operator==(const Sphere&, const Sphere&) = default;
};

/// Axis-aligned box; colliders never rotate with their owner.
struct Box {
  Vec3 halfExtents;
  friend bool operator==(const Box&, const Box&) = default;
};

struct ColliderShape {
  std::variant<Sphere, Box> volume;
  Vec3 offset; ///< local offset from the owner origin

  friend bool operator==(const ColliderShape&, const ColliderShape&) = default;

  bool valid() const {
    if (!isFinite(offset)) return false;
    if (const auto* s = std::get_if<Sphere>(&volume)) return std::isfinite(s->radius) && s->radius > 0.0;
    const auto& h = std::get<Box>(volume).halfExtents;
    return isFinite(h) && h.x > 0.0 && h.y > 0.0 && h.z > 0.0;
  }

  /// Half-size along each axis of the shape's world AABB.
  Vec3 halfSize() const {
    if (const auto* s = std::get_if<Sphere>(&volume)) return {s->radius, s->radius, s->radius};
    return std::get<Box>(volume).halfExtents;
  }

  /// Radius of the smallest origin-centred sphere enclosing the shape.
  double boundingRadius() const { return length(offset) + length(halfSize()); }
};

namespace detail {

inline Vec3 clampToBox(const Vec3& p, const Vec3& center, const Vec3& half) {
  return {std::clamp(p.x, center.x - half.x, center.x + half.x),
          std::clamp(p.y, center.y - half.y, center.y + half.y),
          std::clamp(p.z, center.z - half.z, center.z + half.z)};
}

inline bool sphereBox(const Vec3& c, double r, const Vec3& boxCenter, const Vec3& half) {
  const Vec3 d = c - clampToBox(c, boxCenter, half);
  return dot(d, d) <= r * r;
}

} // namespace detail

/// Overlap test between two world-placed shapes; touching counts as overlap.
inline bool intersects(const ColliderShape& a, const Vec3& poseA, const ColliderShape& b, const Vec3& poseB) {
  const Vec3 ca = poseA + a.offset;
  const Vec3 cb = poseB + b.offset;
  const auto* sa = std::get_if<Sphere>(&a.volume);
  const auto* sb = std::get_if<Sphere>(&b.volume);
  if (sa && sb) {
    const Vec3 d = ca - cb;
    const double r = sa->radius + sb->radius;
    return dot(d, d) <= r * r;
  }
  if (sa) return detail::sphereBox(ca, sa->radius, cb, std::get<Box>(b.volume).halfExtents);
  if (sb) return detail::sphereBox(cb, sb->radius, ca, std::get<Box>(a.volume).halfExtents);
  const Vec3& ha = std::get<Box>(a.volume).halfExtents;
  const Vec3& hb = std::get<Box>(b.volume).halfExtents;
  return std::abs(ca.x - cb.x) <= ha.x + hb.x && std::abs(ca.y - cb.y) <= ha.y + hb.y &&
         std::abs(ca.z - cb.z) <= ha.z + hb.z;
}

/// Distance between the shape's world centre and a point.
inline double centerDistance(const ColliderShape& s, const Vec3& pose, const Vec3& p) {
  return distance(pose + s.offset, p);
}

} // namespace ifgx
