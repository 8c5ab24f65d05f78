#pragma once

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "tclq/core/pauli.hpp"
#include "tclq/error.hpp"

namespace tclq {

inline double hermiticity_error(const MatXc& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const MatXc& m, double tol = 1e-12) { return hermiticity_error(m) <= tol; }

/// Smallest eigenvalue of the Hermitian part of `m`.
inline double min_eigenvalue(const MatXc& m) {
  const MatXc h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Qubit density matrix. Construction checks Hermiticity and unit trace;
/// positivity is checked separately since intermediate numerical states may
/// leave the Bloch ball slightly.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit DensityMatrix(const Mat2c& m) : m_(m) {
    if (!m.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
    if (hermiticity_error(m) > kTolerance)
      throw InvalidArgument("density matrix is not Hermitian (error " + std::to_string(hermiticity_error(m)) + ")");
    if (std::abs(m.trace() - 1.0) > kTolerance)
      throw InvalidArgument("density matrix trace differs from one");
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(0.5 * Mat2c::Identity()); }
  static DensityMatrix pure(const Eigen::Vector2cd& psi) {
    const Eigen::Vector2cd n = psi.normalized();
    return DensityMatrix(n * n.adjoint());
  }

  const Mat2c& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  bool is_physical(double tol = 1e-10) const { return min_eigenvalue(m_) >= -tol; }

 private:
  Mat2c m_;
};

/// r_i = Tr(σ_i ρ).
inline BlochVector bloch_encode(const DensityMatrix& rho) { return pauli::field(rho.matrix()); }

/// ρ = (1 + r·σ)/2. Vectors outside the unit ball are accepted (they occur
/// as intermediate numerical states) and reported through `outside_ball`.
inline DensityMatrix bloch_decode(const BlochVector& r, bool* outside_ball = nullptr) {
  if (!r.allFinite()) throw InvalidArgument("Bloch vector has non-finite entries");
  if (outside_ball) *outside_ball = r.norm() > 1.0 + 1e-10;
  return DensityMatrix(0.5 * Mat2c::Identity() + pauli::from_field(r));
}

}  // namespace tclq
