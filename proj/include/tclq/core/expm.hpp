#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include "tclq/core/so3.hpp"
#include "tclq/error.hpp"

namespace tclq {

/// e^{tA} for a square matrix. Real 3×3 antisymmetric generators go through
/// the Rodrigues formula; everything else through Padé scaling-and-squaring.
template <class Derived>
auto expm(const Eigen::MatrixBase<Derived>& a, double t = 1.0) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix is not square");
  if (!a.allFinite() || !std::isfinite(t)) throw InvalidArgument("expm: non-finite input");
  Plain m = (t * a.derived()).eval();
  if constexpr (!Eigen::NumTraits<Scalar>::IsComplex) {
    if (m.rows() == 3 && (m + m.transpose()).cwiseAbs().maxCoeff() == 0.0) {
      const Mat3 r = so3::exp_hat(so3::vee(Mat3(m)));
      return Plain(r);
    }
  }
  return Plain(m.exp());
}

/// e^{tA} x.
template <class DerivedA, class DerivedX>
auto exp_action(const Eigen::MatrixBase<DerivedA>& a, double t, const Eigen::MatrixBase<DerivedX>& x) {
  if (x.rows() != a.cols()) throw InvalidArgument("exp_action: dimension mismatch");
  if (!x.allFinite()) throw InvalidArgument("exp_action: non-finite vector");
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar, typename DerivedX::Scalar>::ReturnType;
  using PlainVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto e = expm(a, t);
  return PlainVec(e.template cast<Scalar>() * x.derived().template cast<Scalar>());
}

}  // namespace tclq
