#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace tclq {

using cplx = std::complex<double>;

using Mat2c = Eigen::Matrix2cd;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;
using MatXc = Eigen::MatrixXcd;
using VecXc = Eigen::VectorXcd;

/// Real Bloch vector r = Tr(σρ).
using BlochVector = Vec3;

inline constexpr cplx I{0.0, 1.0};

/// Affine Bloch-space generator: dr/dt = M r + b.
struct BlochAffine {
  Mat3 M = Mat3::Zero();
  Vec3 b = Vec3::Zero();

  BlochAffine& operator+=(const BlochAffine& o) {
    M += o.M;
    b += o.b;
    return *this;
  }
  friend BlochAffine operator+(BlochAffine a, const BlochAffine& o) { return a += o; }
  Vec3 apply(const Vec3& r) const { return M * r + b; }
};

/// Sampled Bloch-vector trajectory. `t` and `r` have equal length.
struct BlochTrajectory {
  std::vector<double> t;
  std::vector<Vec3> r;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

}  // namespace tclq
