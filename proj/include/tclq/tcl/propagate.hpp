#pragma once

#include <array>
#include <span>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "tclq/core/so3.hpp"
#include "tclq/numerics/ode.hpp"
#include "tclq/tcl/generators.hpp"

namespace tclq {

/// Integrates ṙ = Σ M_i(t) r + Σ b_i(t) with the adaptive Dormand–Prince
/// stepper and returns the dense output on `grid`.
inline BlochTrajectory propagate(std::span<const TLGenerator> gens, const BlochVector& r0,
                                 std::span<const double> grid, const ode::Options& opt = {}) {
  if (gens.empty()) throw InvalidArgument("propagate: no generators");
  for (const auto& g : gens)
    if (g.frame != gens.front().frame) throw InvalidArgument("propagate: generators are in different frames");
  if (!r0.allFinite()) throw InvalidArgument("propagate: non-finite initial state");
  using State = std::array<double, 3>;
  auto rhs = [&](const State& x, State& dx, double t) {
    BlochAffine a;
    for (const auto& g : gens) a += g(t);
    const Vec3 d = a.apply(Vec3(x[0], x[1], x[2]));
    dx = {d.x(), d.y(), d.z()};
  };
  const auto xs = ode::integrate_on_grid(rhs, State{r0.x(), r0.y(), r0.z()}, grid, opt);
  BlochTrajectory out;
  out.t.assign(grid.begin(), grid.end());
  out.r.reserve(xs.size());
  for (const auto& x : xs) out.r.emplace_back(x[0], x[1], x[2]);
  return out;
}

inline BlochTrajectory propagate(std::initializer_list<TLGenerator> gens, const BlochVector& r0,
                                 std::span<const double> grid, const ode::Options& opt = {}) {
  const std::vector<TLGenerator> v(gens);
  return propagate(std::span<const TLGenerator>(v), r0, grid, opt);
}

enum class FrameDirection { to_rotating, to_lab };

/// Lab → rotating: r′(t) = exp(−ωt L_z) r(t); to_lab applies the inverse.
/// r_z is unchanged.
inline BlochTrajectory rotating_frame_map(const BlochTrajectory& traj, double omega, FrameDirection dir) {
  BlochTrajectory out = traj;
  const double sign = dir == FrameDirection::to_rotating ? -1.0 : 1.0;
  for (std::size_t k = 0; k < traj.size(); ++k) out.r[k] = so3::rot_z(sign * omega * traj.t[k]) * traj.r[k];
  return out;
}

/// Generator sampled on a uniform grid and interpolated with cubic
/// B-splines, for kernels that are expensive to evaluate (nested
/// quadrature). Evaluation outside [0, t_max] throws.
inline TLGenerator tabulate(const TLGenerator& gen, double t_max, double h) {
  if (!(t_max > 0) || !(h > 0)) throw InvalidArgument("tabulate: need t_max > 0 and h > 0");
  const auto grid = ode::uniform_grid(t_max, h);
  if (grid.size() < 4) throw InvalidArgument("tabulate: grid too coarse");
  std::array<std::vector<double>, 12> samples;
  for (auto& s : samples) s.reserve(grid.size());
  for (double t : grid) {
    const BlochAffine a = gen(t);
    for (int i = 0; i < 9; ++i) samples[static_cast<std::size_t>(i)].push_back(a.M(i / 3, i % 3));
    for (int i = 0; i < 3; ++i) samples[static_cast<std::size_t>(9 + i)].push_back(a.b(i));
  }
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto splines = std::make_shared<std::vector<Spline>>();
  for (auto& s : samples) splines->emplace_back(s.begin(), s.end(), 0.0, h);
  const double t_end = grid.back();
  return {gen.order, gen.frame, [splines, t_end](double t) {
            if (t < 0.0 || t > t_end * (1 + 1e-12)) throw InvalidArgument("tabulated generator evaluated out of range");
            BlochAffine a;
            for (int i = 0; i < 9; ++i) a.M(i / 3, i % 3) = (*splines)[static_cast<std::size_t>(i)](t);
            for (int i = 0; i < 3; ++i) a.b(i) = (*splines)[static_cast<std::size_t>(9 + i)](t);
            return a;
          }};
}

}  // namespace tclq
