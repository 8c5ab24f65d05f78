#pragma once

#include "tclq/core/types.hpp"

namespace tclq::pauli {

inline Mat2c identity() { return Mat2c::Identity(); }

inline Mat2c x() {
  Mat2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2c y() {
  Mat2c m;
  m << 0, -I, I, 0;
  return m;
}

inline Mat2c z() {
  Mat2c m;
  m << 1, 0, 0, -1;
  return m;
}

/// σ₊ = |0⟩⟨1| raises |1⟩ to |0⟩; |0⟩ is the +1 eigenstate of σ_z.
inline Mat2c plus() {
  Mat2c m;
  m << 0, 1, 0, 0;
  return m;
}

inline Mat2c minus() { return plus().transpose(); }

inline Mat2c component(int i) {
  switch (i) {
    case 0: return x();
    case 1: return y();
    default: return z();
  }
}

/// Field vector h of H = h₀·1 + ½ h·σ, i.e. h_i = Tr(σ_i H). The Bloch
/// equation of motion under H is ṙ = h × r.
inline Vec3 field(const Mat2c& h) {
  return {(x() * h).trace().real(), (y() * h).trace().real(), (z() * h).trace().real()};
}

/// Inverse of `field` (traceless part only).
inline Mat2c from_field(const Vec3& h) { return 0.5 * (h.x() * x() + h.y() * y() + h.z() * z()); }

}  // namespace tclq::pauli
