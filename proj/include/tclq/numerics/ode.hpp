#pragma once

#include <span>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "tclq/error.hpp"

namespace tclq::ode {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Upper bound on the step; 0 leaves it free.
  double max_dt = 0.0;
  /// Step budget between two consecutive output times.
  int max_steps_per_output = 2'000'000;
};

/// Integrates dx/dt = f(x, t) with the Dormand–Prince 5(4) pair and samples
/// the dense output on `grid` (non-decreasing, starting at the initial time).
/// `System` has the odeint signature `void(const State&, State&, double)`.
template <class State, class System>
std::vector<State> integrate_on_grid(System&& system, State x0, std::span<const double> grid,
                                     const Options& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  std::vector<State> out;
  if (grid.empty()) return out;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] >= grid[i - 1])) throw InvalidArgument("integrate_on_grid: time grid is not monotone");
  out.reserve(grid.size());
  if (grid.size() == 1 || grid.back() == grid.front()) {
    out.assign(grid.size(), x0);
    return out;
  }
  using Stepper = odeint::runge_kutta_dopri5<State>;
  double dt0 = (grid.back() - grid.front()) * 1e-4;
  if (opt.max_dt > 0) dt0 = std::min(dt0, opt.max_dt);
  auto observer = [&out](const State& x, double) { out.push_back(x); };
  try {
    if (opt.max_dt > 0) {
      auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dt, Stepper());
      odeint::integrate_times(stepper, system, x0, grid.begin(), grid.end(), dt0, observer,
                              odeint::max_step_checker(opt.max_steps_per_output));
    } else {
      auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Stepper());
      odeint::integrate_times(stepper, system, x0, grid.begin(), grid.end(), dt0, observer,
                              odeint::max_step_checker(opt.max_steps_per_output));
    }
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("ODE integration failed: ") + e.what());
  }
  if (out.size() != grid.size()) throw IntegrationError("ODE integration produced an incomplete trajectory");
  return out;
}

/// Uniform grid 0, dt, 2dt, ... up to and including t_max (within 1e-9·dt).
inline std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(dt > 0) || !(t_max >= 0)) throw InvalidArgument("uniform_grid: need dt > 0 and t_max >= 0");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = static_cast<double>(k) * dt;
  return g;
}

}  // namespace tclq::ode
