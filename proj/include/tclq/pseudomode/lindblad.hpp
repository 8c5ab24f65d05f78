#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "tclq/core/pauli.hpp"
#include "tclq/core/state.hpp"
#include "tclq/numerics/ode.hpp"
#include "tclq/pseudomode/bath.hpp"

namespace tclq {

struct PMResult {
  BlochTrajectory reduced;
  std::vector<Mat2c> rho_s;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 1.0;
  double max_hermiticity_error = 0.0;
  int n_max = 0;
};

namespace detail {

/// Operators on qubit ⊗ mode_1 ⊗ … ⊗ mode_N, qubit first.
struct PMOperators {
  int dim = 0;
  int bath_dim = 0;
  MatXc h_static;  // Ω σ₊σ₋ + Σ ξ b†b + Σ η(σ₊b + σ₋b†) − i/2 Σ Γ b†b
  MatXc sp, sm;
  std::vector<MatXc> jumps;  // √Γ_l b_l
};

inline PMOperators build_pm_operators(const PseudoModeBath& bath, double omega) {
  const int n = bath.n_max + 1;
  const auto modes = static_cast<int>(bath.modes.size());
  int bath_dim = 1;
  for (int l = 0; l < modes; ++l) bath_dim *= n;
  MatXc a = MatXc::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  auto embed_mode = [&](const MatXc& op, int which) {
    MatXc out = MatXc::Identity(1, 1);
    for (int l = 0; l < modes; ++l) {
      const MatXc f = (l == which) ? op : MatXc::Identity(n, n);
      out = Eigen::kroneckerProduct(out, f).eval();
    }
    return out;
  };
  PMOperators ops;
  ops.bath_dim = bath_dim;
  ops.dim = 2 * bath_dim;
  const MatXc id_b = MatXc::Identity(bath_dim, bath_dim);
  ops.sp = Eigen::kroneckerProduct(MatXc(pauli::plus()), id_b).eval();
  ops.sm = Eigen::kroneckerProduct(MatXc(pauli::minus()), id_b).eval();
  ops.h_static = omega * ops.sp * ops.sm;
  for (int l = 0; l < modes; ++l) {
    const auto& m = bath.modes[static_cast<std::size_t>(l)];
    const double eta = bath.coupling(static_cast<std::size_t>(l));
    const MatXc b = Eigen::kroneckerProduct(MatXc::Identity(2, 2), embed_mode(a, l)).eval();
    const MatXc nb = b.adjoint() * b;
    ops.h_static += m.xi * nb + eta * (ops.sp * b + ops.sm * b.adjoint()) - I * (0.5 * m.gamma) * nb;
    ops.jumps.push_back(std::sqrt(m.gamma) * b);
  }
  return ops;
}

inline Mat2c partial_trace_bath(const MatXc& rho, int bath_dim) {
  Mat2c r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = rho.block(i * bath_dim, j * bath_dim, bath_dim, bath_dim).trace();
  return r;
}

}  // namespace detail

/// Exact Lindblad evolution of the qubit plus pseudo-modes, starting from
/// the qubit state r0 and all modes in vacuum. Returns the reduced qubit
/// trajectory and diagnostics of the composite state.
inline PMResult pm_lindblad_propagate(const PseudoModeBath& bath, double omega, const DriveSpec& drive,
                                      const BlochVector& r0, std::span<const double> grid,
                                      ode::Options opt = {1e-10, 1e-12}) {
  bath.validate();
  drive.validate();
  const auto ops = detail::build_pm_operators(bath, omega);
  const int d = ops.dim;
  const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);

  MatXc rho0 = MatXc::Zero(d, d);
  const Mat2c q = bloch_decode(r0).matrix();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rho0(i * ops.bath_dim, j * ops.bath_dim) = q(i, j);

  using State = std::vector<double>;
  State x0(2 * dd);
  std::copy_n(reinterpret_cast<const double*>(rho0.data()), 2 * dd, x0.begin());

  MatXc heff(d, d), tmp(d, d);
  auto rhs = [&](const State& x, State& dx, double t) {
    const Eigen::Map<const MatXc> rho(reinterpret_cast<const cplx*>(x.data()), d, d);
    Eigen::Map<MatXc> out(reinterpret_cast<cplx*>(dx.data()), d, d);
    const cplx f = drive.f(t);
    heff = ops.h_static + f * ops.sp + std::conj(f) * ops.sm;
    tmp.noalias() = heff * rho;
    out = -I * tmp;
    out += I * tmp.adjoint();  // ρ H_eff† = (H_eff ρ)† for Hermitian ρ
    for (const auto& j : ops.jumps) out.noalias() += j * rho * j.adjoint();
  };
  const auto xs = ode::integrate_on_grid(rhs, x0, grid, opt);

  PMResult res;
  res.n_max = bath.n_max;
  res.reduced.t.assign(grid.begin(), grid.end());
  for (const auto& x : xs) {
    const Eigen::Map<const MatXc> rho(reinterpret_cast<const cplx*>(x.data()), d, d);
    res.max_trace_drift = std::max(res.max_trace_drift, std::abs(rho.trace() - 1.0));
    res.max_hermiticity_error = std::max(res.max_hermiticity_error, hermiticity_error(rho));
    res.min_eigenvalue = std::min(res.min_eigenvalue, min_eigenvalue(0.5 * (rho + rho.adjoint())));
    const Mat2c rs = detail::partial_trace_bath(rho, ops.bath_dim);
    res.rho_s.push_back(rs);
    res.reduced.r.push_back(pauli::field(rs));
  }
  return res;
}

struct TruncationReport {
  int n_max = 0;
  double delta = 0.0;
};

/// Compares reduced trajectories at n_max and n_max + 2; throws
/// ConvergenceError carrying the achieved max-norm difference if it
/// exceeds `tol`.
inline TruncationReport pm_truncation_check(PseudoModeBath bath, double omega, const DriveSpec& drive,
                                            const BlochVector& r0, std::span<const double> grid, double tol = 1e-6,
                                            ode::Options opt = {1e-10, 1e-12}) {
  const auto a = pm_lindblad_propagate(bath, omega, drive, r0, grid, opt);
  bath.n_max += 2;
  const auto b = pm_lindblad_propagate(bath, omega, drive, r0, grid, opt);
  double delta = 0.0;
  for (std::size_t k = 0; k < a.reduced.size(); ++k)
    delta = std::max(delta, (a.reduced.r[k] - b.reduced.r[k]).cwiseAbs().maxCoeff());
  if (delta > tol)
    throw ConvergenceError("pseudo-mode truncation not converged at n_max = " + std::to_string(bath.n_max - 2) +
                               ": delta = " + std::to_string(delta),
                           delta);
  return {bath.n_max - 2, delta};
}

}  // namespace tclq
