#pragma once

#include <cmath>

#include "tclq/core/types.hpp"

/// Rotation generators of the Bloch sphere, with L_i r = e_i × r. In this
/// convention L_z² = diag(−1, −1, 0) and [L_x, L_y] = L_z (cyclic).
namespace tclq::so3 {

inline Mat3 Lx() {
  Mat3 m;
  m << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  return m;
}

inline Mat3 Ly() {
  Mat3 m;
  m << 0, 0, 1, 0, 0, 0, -1, 0, 0;
  return m;
}

inline Mat3 Lz() {
  Mat3 m;
  m << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  return m;
}

/// h·L, the generator of ṙ = h × r.
inline Mat3 hat(const Vec3& h) {
  Mat3 m;
  m << 0, -h.z(), h.y(), h.z(), 0, -h.x(), -h.y(), h.x(), 0;
  return m;
}

/// Inverse of `hat` for an antisymmetric matrix.
inline Vec3 vee(const Mat3& a) { return {a(2, 1), a(0, 2), a(1, 0)}; }

/// exp(θ L_z): counter-clockwise rotation about z by θ.
inline Mat3 rot_z(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

/// exp(hat(w)) by the Rodrigues formula.
inline Mat3 exp_hat(const Vec3& w) {
  const double th = w.norm();
  const Mat3 k = hat(w);
  if (th < 1e-4) {
    // Series to O(θ⁵); the truncation error is below 1e-21 here.
    const double th2 = th * th;
    const double a = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
    const double b = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
    return Mat3::Identity() + a * k + b * k * k;
  }
  return Mat3::Identity() + (std::sin(th) / th) * k + ((1.0 - std::cos(th)) / (th * th)) * k * k;
}

/// Rotate r by exp(hat(w)) without forming the matrix.
inline Vec3 rotate(const Vec3& w, const Vec3& r) {
  const double th = w.norm();
  if (th == 0.0) return r;
  const Vec3 k = w / th;
  const double c = std::cos(th), s = std::sin(th);
  return r * c + k.cross(r) * s + k * (k.dot(r) * (1.0 - c));
}

}  // namespace tclq::so3
