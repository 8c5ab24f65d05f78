#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "tclq/numerics/ode.hpp"
#include "tclq/pseudomode/bath.hpp"

namespace tclq {

/// Bloch form of the qubit time-local equation with rates Γ(t) and g(t):
///   M = [−Γ_R, −Ω−Γ_I, −2f_I; Ω+Γ_I, −Γ_R, −2f_R; 2(f_I+g_I), 2(f_R+g_R), −2Γ_R],
///   b = 2 (g_I, g_R, −Γ_R).
inline BlochAffine qubit_tcl_bloch(double omega, cplx f, cplx gamma, cplx g) {
  const double gr = gamma.real(), gi = gamma.imag();
  BlochAffine a;
  a.M << -gr, -omega - gi, -2.0 * f.imag(),  //
      omega + gi, -gr, -2.0 * f.real(),      //
      2.0 * (f.imag() + g.imag()), 2.0 * (f.real() + g.real()), -2.0 * gr;
  a.b << 2.0 * g.imag(), 2.0 * g.real(), -2.0 * gr;
  return a;
}

/// Second- (g ≡ 0) or third-order time-local propagation of the qubit.
/// A non-monochromatic drive has g(t) tabulated by nested quadrature on a
/// grid of spacing `g_table_step` and interpolated with cubic B-splines.
inline BlochTrajectory tcl3_bloch_propagate(const PseudoModeBath& bath, double omega, const DriveSpec& drive,
                                            int order, const BlochVector& r0, std::span<const double> grid,
                                            ode::Options opt = {1e-10, 1e-12}, double g_table_step = 0.05) {
  bath.validate();
  drive.validate();
  if (order != 2 && order != 3) throw InvalidArgument("tcl3_bloch_propagate: order must be 2 or 3");
  std::function<cplx(double)> g = [](double) { return cplx(0.0); };
  if (order == 3) {
    if (drive.is_monochromatic()) {
      g = [&](double t) { return g_rate_closed(bath, omega, drive, t); };
    } else if (!grid.empty()) {
      using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
      const auto tg = ode::uniform_grid(grid.back() + 4 * g_table_step, g_table_step);
      std::vector<double> re, im;
      for (double t : tg) {
        const cplx v = g_rate_quadrature(bath, omega, drive, t);
        re.push_back(v.real());
        im.push_back(v.imag());
      }
      auto sr = std::make_shared<Spline>(re.begin(), re.end(), 0.0, g_table_step);
      auto si = std::make_shared<Spline>(im.begin(), im.end(), 0.0, g_table_step);
      g = [sr, si](double t) { return cplx((*sr)(t), (*si)(t)); };
    }
  }
  using State = std::array<double, 3>;
  auto rhs = [&](const State& x, State& dx, double t) {
    const BlochAffine a = qubit_tcl_bloch(omega, drive.f(t), gamma_rate(bath, omega, t), g(t));
    const Vec3 v = a.apply(Vec3(x[0], x[1], x[2]));
    dx = {v.x(), v.y(), v.z()};
  };
  const auto xs = ode::integrate_on_grid(rhs, State{r0.x(), r0.y(), r0.z()}, grid, opt);
  BlochTrajectory out;
  out.t.assign(grid.begin(), grid.end());
  for (const auto& x : xs) out.r.emplace_back(x[0], x[1], x[2]);
  return out;
}

/// e^{iΩt} ρ₀₁(t) with ρ₀₁ = (r_x − i r_y)/2.
inline std::vector<cplx> interaction_picture_coherence(const BlochTrajectory& traj, double omega) {
  std::vector<cplx> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k)
    out.push_back(std::exp(I * omega * traj.t[k]) * 0.5 * cplx(traj.r[k].x(), -traj.r[k].y()));
  return out;
}

}  // namespace tclq
