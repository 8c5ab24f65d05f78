#pragma once

#include <array>
#include <span>

#include <Eigen/LU>

#include "tclq/core/so3.hpp"
#include "tclq/laplace/rational.hpp"
#include "tclq/laplace/transforms.hpp"
#include "tclq/numerics/ode.hpp"

namespace tclq {

/// Mean rotating-frame generator ⟨L⟩ = hat(D cos φ, D sin φ, Δ).
inline Mat3 mean_rotating_generator(const LaplaceParams& p) {
  return so3::hat(Vec3(p.drive * std::cos(p.phase), p.drive * std::sin(p.phase), p.delta));
}

/// R(s) = [s·1 − ⟨L⟩ + g/(1+sτ) diag(1,1,0)]⁻¹ r(0).
inline Vec3c novikov_resolvent(std::complex<double> s, const LaplaceParams& p, const Vec3& r0 = Vec3(0, 0, 1)) {
  Mat3c a = s * Mat3c::Identity() - mean_rotating_generator(p).cast<std::complex<double>>();
  const std::complex<double> k = p.g / (1.0 + s * p.tau);
  a(0, 0) += k;
  a(1, 1) += k;
  Eigen::FullPivLU<Mat3c> lu(a);
  if (!lu.isInvertible() || lu.rcond() < 1e-15) throw SingularError("novikov_resolvent: singular matrix at s");
  return lu.solve(r0.cast<std::complex<double>>());
}

/// The three components of the resolvent as rational functions of s. The
/// system is cleared by (1+sτ); the resulting determinant carries one
/// factor (1+sτ), which is divided out.
inline std::array<RationalFunction, 3> novikov_resolvent_rational(const LaplaceParams& p,
                                                                  const Vec3& r0 = Vec3(0, 0, 1)) {
  using P = RealPolynomial;
  const Mat3 l = mean_rotating_generator(p);
  const P one{1.0, p.tau};
  P b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      P e = P::constant(-l(i, j));
      if (i == j) e += P{0.0, 1.0};
      b[i][j] = one * e;
      if (i == j && i < 2) b[i][j] += P::constant(p.g);
    }
  auto minor = [&](int r, int c) {
    int rs[2], cs[2];
    for (int i = 0, k = 0; i < 3; ++i)
      if (i != r) rs[k++] = i;
    for (int j = 0, k = 0; j < 3; ++j)
      if (j != c) cs[k++] = j;
    return b[rs[0]][cs[0]] * b[rs[1]][cs[1]] - b[rs[0]][cs[1]] * b[rs[1]][cs[0]];
  };
  P det = b[0][0] * minor(0, 0) - b[0][1] * minor(0, 1) + b[0][2] * minor(0, 2);
  // R = (1+sτ) adj(B) r0 / det(B) = adj(B) r0 / q with det(B) = (1+sτ) q.
  // adj(B)_{ij} = (−1)^{i+j} minor(j, i)
  std::array<P, 3> numer;
  for (int i = 0; i < 3; ++i) {
    P acc;
    for (int j = 0; j < 3; ++j) {
      if (r0(j) == 0.0) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      acc += minor(j, i) * (sign * r0(j));
    }
    numer[static_cast<std::size_t>(i)] = acc;
  }
  P den = det;
  if (p.tau > 0.0) {
    // Divide by (1 + τs) from the constant term upwards; the root −1/τ is
    // large, so this direction damps rounding errors by τ per step.
    const auto& d = det.coefficients();
    std::vector<double> q(d.size() - 1);
    q[0] = d[0];
    for (std::size_t k = 1; k < q.size(); ++k) q[k] = d[k] - p.tau * q[k - 1];
    double scale = 0.0;
    for (double c : d) scale = std::max(scale, std::abs(c));
    if (std::abs(d.back() - p.tau * q.back()) > 1e-10 * scale)
      throw SingularError("novikov_resolvent_rational: (1+s tau) does not divide the determinant");
    den = P(std::move(q));
  }
  std::array<RationalFunction, 3> out;
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = {numer[static_cast<std::size_t>(i)].trimmed(1e-15), den};
  return out;
}

/// Pole–residue inversion of all three resolvent components.
inline BlochTrajectory invert_resolvent(const LaplaceParams& p, const Vec3& r0, std::span<const double> grid,
                                        const InversionOptions& opt = {}) {
  const auto rf = novikov_resolvent_rational(p, r0);
  std::array<PoleResidueForm, 3> forms;
  for (int i = 0; i < 3; ++i) forms[static_cast<std::size_t>(i)] = invert_rational(rf[static_cast<std::size_t>(i)], opt);
  BlochTrajectory out;
  out.t.assign(grid.begin(), grid.end());
  for (double t : grid) out.r.emplace_back(forms[0](t), forms[1](t), forms[2](t));
  return out;
}

/// Exact time-domain solution of the non-local equation through the
/// auxiliary memory m(t) = ∫₀ᵗ e^{−(t−t′)/τ} diag(1,1,0) r(t′) dt′:
///   ṙ = ⟨L⟩ r − (g/τ) m,   ṁ = −m/τ + diag(1,1,0) r.
inline BlochTrajectory novikov_extended_ode(const LaplaceParams& p, const Vec3& r0, std::span<const double> grid,
                                            ode::Options opt = {1e-12, 1e-14}) {
  if (!(p.tau > 0.0)) throw InvalidArgument("novikov_extended_ode: requires tau > 0");
  const Mat3 l = mean_rotating_generator(p);
  const double k = p.g / p.tau, inv = 1.0 / p.tau;
  using State = std::array<double, 6>;
  auto rhs = [&](const State& x, State& dx, double) {
    for (int i = 0; i < 3; ++i) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += l(i, j) * x[static_cast<std::size_t>(j)];
      dx[static_cast<std::size_t>(i)] = v - (i < 2 ? k * x[static_cast<std::size_t>(3 + i)] : 0.0);
    }
    dx[3] = -inv * x[3] + x[0];
    dx[4] = -inv * x[4] + x[1];
    dx[5] = 0.0;
  };
  const auto xs = ode::integrate_on_grid(rhs, State{r0.x(), r0.y(), r0.z(), 0, 0, 0}, grid, opt);
  BlochTrajectory out;
  out.t.assign(grid.begin(), grid.end());
  for (const auto& x : xs) out.r.emplace_back(x[0], x[1], x[2]);
  return out;
}

}  // namespace tclq
