#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tclq/core/types.hpp"
#include "tclq/error.hpp"
#include "tclq/numerics/quadrature.hpp"
#include "tclq/numerics/special.hpp"
#include "tclq/tcl/spec.hpp"

namespace tclq {

/// Bath whose correlation function is a finite sum of damped exponentials,
/// c(t) = −iΛ₀² Σ r_l e^{−i z_l t}, z_l = ξ_l − iΓ_l/2, realized by damped
/// bosonic pseudo-modes with couplings η_l = Λ₀ √(−i r_l).
struct PseudoModeBath {
  struct Mode {
    double xi = 0.0;
    double gamma = 0.0;
    /// Pole residue; −i·residue must be real and positive.
    cplx residue{0.0, 1.0};
  };
  std::vector<Mode> modes;
  double lambda0 = 1.0;
  int n_max = 3;

  /// One mode with coupling η: residue i, Λ₀ = η.
  static PseudoModeBath single(double eta, double xi, double gamma, int n_max = 3) {
    return PseudoModeBath{{Mode{xi, gamma, cplx(0.0, 1.0)}}, eta, n_max};
  }

  void validate() const {
    if (modes.empty()) throw InvalidArgument("pseudo-mode bath has no modes");
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) throw InvalidArgument("lambda0 must be finite and >= 0");
    if (n_max < 1) throw InvalidArgument("Fock truncation n_max must be >= 1");
    for (const auto& m : modes) {
      if (!(m.gamma > 0.0) || !std::isfinite(m.gamma)) throw InvalidArgument("pseudo-mode decay Gamma must be > 0");
      if (!std::isfinite(m.xi)) throw InvalidArgument("pseudo-mode energy must be finite");
      const cplx w = -I * m.residue;
      if (std::abs(w.imag()) > 1e-12 * std::abs(w) || !(w.real() > 0.0))
        throw InvalidArgument("pseudo-mode residue must satisfy -i r > 0");
    }
  }

  double coupling(std::size_t l) const { return lambda0 * std::sqrt((-I * modes[l].residue).real()); }
};

inline cplx bath_correlation(const PseudoModeBath& bath, double t) {
  cplx acc = 0.0;
  for (const auto& m : bath.modes) acc += m.residue * std::exp(-I * cplx(m.xi, -0.5 * m.gamma) * t);
  return -I * bath.lambda0 * bath.lambda0 * acc;
}

/// Γ(t) = ∫₀ᵗ e^{iΩt₁} c(t₁) dt₁ = Σ η_l² φ₁(iΔ_l − Γ_l/2, t), Δ_l = Ω − ξ_l.
inline cplx gamma_rate(const PseudoModeBath& bath, double omega, double t) {
  cplx acc = 0.0;
  for (std::size_t l = 0; l < bath.modes.size(); ++l) {
    const double eta = bath.coupling(l);
    const auto& m = bath.modes[l];
    acc += eta * eta * phi1(cplx(-0.5 * m.gamma, omega - m.xi), t);
  }
  return acc;
}

inline cplx gamma_rate_quadrature(const PseudoModeBath& bath, double omega, double t, const quad::Options& opt = {}) {
  if (t == 0.0) return 0.0;
  auto f = [&](double t1) { return std::exp(I * omega * t1) * bath_correlation(bath, t1); };
  return quad::integrate(f, 0.0, t, opt).value;
}

/// g(t) = ∫₀ᵗdt₁ ∫₀^{t₁}dt₂ f(t₁) c(t−t₂) e^{iΩ(t₁−t₂)}.
/// For f(t) = (D/2)e^{−i(ωt+φ)}, with κ_l = iξ_l + Γ_l/2, μ_l = Γ_l/2 − i(Ω−ξ_l)
/// and δ = Ω − ω, each mode contributes
///   (D/2) e^{−iφ} η_l² e^{−κ_l t} [φ₁(μ_l + iδ, t) − φ₁(iδ, t)]/μ_l.
inline cplx g_rate_closed(const PseudoModeBath& bath, double omega, const DriveSpec& drive, double t) {
  if (!drive.is_monochromatic()) throw InvalidArgument("g_rate_closed: requires a monochromatic drive");
  const double det = omega - drive.frequency;
  const cplx pre = 0.5 * drive.amplitude * std::exp(-I * drive.phase);
  cplx acc = 0.0;
  for (std::size_t l = 0; l < bath.modes.size(); ++l) {
    const double eta = bath.coupling(l);
    const auto& m = bath.modes[l];
    const cplx kappa(0.5 * m.gamma, m.xi);
    const cplx mu(0.5 * m.gamma, -(omega - m.xi));
    acc += eta * eta * std::exp(-kappa * t) * (phi1(mu + I * det, t) - phi1(cplx(0.0, det), t)) / mu;
  }
  return pre * acc;
}

/// Nested adaptive quadrature of the defining double integral.
inline cplx g_rate_quadrature(const PseudoModeBath& bath, double omega, const DriveSpec& drive, double t,
                              const quad::Options& opt = {1e-11}) {
  if (t == 0.0) return 0.0;
  quad::Options inner = opt;
  inner.abs_tol = opt.abs_tol / std::max(1.0, t);
  auto outer = [&](double t1) -> cplx {
    if (t1 == 0.0) return 0.0;
    auto f = [&](double t2) { return bath_correlation(bath, t - t2) * std::exp(-I * omega * t2); };
    return drive.f(t1) * std::exp(I * omega * t1) * quad::integrate(f, 0.0, t1, inner).value;
  };
  return quad::integrate(outer, 0.0, t, opt).value;
}

inline cplx g_rate(const PseudoModeBath& bath, double omega, const DriveSpec& drive, double t) {
  return drive.is_monochromatic() ? g_rate_closed(bath, omega, drive, t) : g_rate_quadrature(bath, omega, drive, t);
}

}  // namespace tclq
