#pragma once

#include <cmath>

namespace pregrasp {

// 2D vector in the manipulation plane. Components are named (y, z):
// y runs horizontally toward the support surface, z points up.
struct Vec2 {
  double y = 0.0;
  double z = 0.0;

  Vec2 operator+(const Vec2& o) const { return {y + o.y, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {y - o.y, z - o.z}; }
  Vec2 operator*(double s) const { return {y * s, z * s}; }
  Vec2 operator-() const { return {-y, -z}; }
  Vec2& operator+=(const Vec2& o) { y += o.y; z += o.z; return *this; }
  Vec2& operator-=(const Vec2& o) { y -= o.y; z -= o.z; return *this; }

  double dot(const Vec2& o) const { return y * o.y + z * o.z; }
  double norm_sq() const { return y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
  bool finite() const { return std::isfinite(y) && std::isfinite(z); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Pitch convention: positive pitch is the lifting rotation, i.e. the sense
// that raises the box face away from the support surface when the support
// sits at larger y. (Equivalently: clockwise when y points right, z up.)
inline Vec2 rotate_pitch(const Vec2& local, double pitch) {
  const double c = std::cos(pitch), s = std::sin(pitch);
  return {local.y * c + local.z * s, -local.y * s + local.z * c};
}

// Velocity of a point at offset r from the center, per unit angular velocity,
// in the pitch convention above.
inline Vec2 angular_velocity_arm(const Vec2& r) { return {r.z, -r.y}; }

// Scalar "cross product" matching the pitch convention: the angular impulse
// produced by force f applied at offset r.
inline double cross_pitch(const Vec2& r, const Vec2& f) {
  return r.z * f.y - r.y * f.z;
}

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a <= -M_PI) a += two_pi;
  if (a > M_PI) a -= two_pi;
  return a;
}

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// Closest point on segment [a, b] to p.
inline Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq <= 0.0) return a;
  const double t = clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return a + ab * t;
}

}  // namespace pregrasp
