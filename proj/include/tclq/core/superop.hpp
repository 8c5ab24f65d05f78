#pragma once

#include <string>

#include "tclq/core/pauli.hpp"
#include "tclq/core/state.hpp"
#include "tclq/error.hpp"

// Tetradic representation. Density matrices are vectorized by stacking
// columns, vec(ρ) = (ρ₀₀, ρ₁₀, ρ₀₁, ρ₁₁), so that vec(AXB) = (Bᵀ ⊗ A) vec(X).

namespace tclq {

/// 4×4 complex matrix acting on column-stacked 2×2 matrices.
using Tetradic = Mat4c;

inline Vec4c vectorize(const Mat2c& m) { return Eigen::Map<const Vec4c>(m.data()); }

inline Vec4c vectorize(const DensityMatrix& rho) { return vectorize(rho.matrix()); }

inline Mat2c devectorize(const Eigen::Ref<const VecXc>& v) {
  if (v.size() != 4)
    throw InvalidArgument("devectorize expects 4 entries, got " + std::to_string(v.size()));
  Mat2c m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

inline Tetradic kron(const Mat2c& a, const Mat2c& b) {
  Tetradic k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

/// X ↦ A X
inline Tetradic left_mul(const Mat2c& a) { return kron(Mat2c::Identity(), a); }
/// X ↦ X B
inline Tetradic right_mul(const Mat2c& b) { return kron(b.transpose(), Mat2c::Identity()); }

/// Superoperator of X ↦ [H, X]. H must be Hermitian to 1e-12.
inline Tetradic commutator_superop(const Mat2c& h) {
  if (!h.allFinite()) throw InvalidArgument("commutator_superop: non-finite operator");
  if (hermiticity_error(h) > 1e-12) throw InvalidArgument("commutator_superop: operator is not Hermitian");
  return left_mul(h) - right_mul(h);
}

/// Apply a tetradic superoperator to a 2×2 matrix.
inline Mat2c apply(const Tetradic& s, const Mat2c& x) { return devectorize(s * vectorize(x)); }

/// Affine Bloch form of a trace- and Hermiticity-preserving superoperator:
/// M_ij = ½ Tr(σ_i S(σ_j)), b_i = ½ Tr(σ_i S(1)). Imaginary residue is
/// returned in `imag_residue` when requested.
inline BlochAffine to_bloch(const Tetradic& s, double* imag_residue = nullptr) {
  BlochAffine out;
  double residue = 0.0;
  const Mat2c id = Mat2c::Identity();
  const Mat2c s_id = tclq::apply(s, id);
  for (int i = 0; i < 3; ++i) {
    const Mat2c si = pauli::component(i);
    const cplx bi = 0.5 * (si * s_id).trace();
    out.b(i) = bi.real();
    residue = std::max(residue, std::abs(bi.imag()));
    for (int j = 0; j < 3; ++j) {
      const cplx mij = 0.5 * (si * tclq::apply(s, pauli::component(j))).trace();
      out.M(i, j) = mij.real();
      residue = std::max(residue, std::abs(mij.imag()));
    }
  }
  if (imag_residue) *imag_residue = residue;
  return out;
}

/// Tetradic form of ṙ = M r + b acting on ρ = (1 + r·σ)/2 (trace preserving).
inline Tetradic to_tetradic(const BlochAffine& a) {
  // Columns: images of the matrix units E_kl under the affine map.
  Tetradic s = Tetradic::Zero();
  for (int col = 0; col < 4; ++col) {
    Vec4c e = Vec4c::Zero();
    e(col) = 1.0;
    const Mat2c x = devectorize(e);
    // Decompose x = (c0 1 + c·σ)/2 with complex coefficients.
    const cplx c0 = x.trace();
    Vec3c c;
    for (int i = 0; i < 3; ++i) c(i) = (pauli::component(i) * x).trace();
    const Vec3c dc = a.M.cast<cplx>() * c + c0 * a.b.cast<cplx>();
    Mat2c y = Mat2c::Zero();
    for (int i = 0; i < 3; ++i) y += 0.5 * dc(i) * pauli::component(i);
    s.col(col) = vectorize(y);
  }
  return s;
}

}  // namespace tclq
