#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "tclq/core/pauli.hpp"
#include "tclq/core/so3.hpp"
#include "tclq/core/superop.hpp"
#include "tclq/noise/ou.hpp"
#include "tclq/numerics/quadrature.hpp"
#include "tclq/numerics/special.hpp"
#include "tclq/tcl/spec.hpp"

namespace tclq {

/// Time-local generator of a given cumulant order, in Bloch affine form.
struct TLGenerator {
  int order = 1;
  Frame frame = Frame::lab;
  std::function<BlochAffine(double)> eval;

  BlochAffine operator()(double t) const { return eval(t); }
};

namespace detail {

/// e^{−isH} for a 2×2 Hermitian H.
inline Mat2c unitary(const Mat2c& h, double s) {
  const double a = 0.5 * h.trace().real();
  const Vec3 f = pauli::field(h);
  const double th = 0.5 * f.norm() * s;
  Mat2c u = std::cos(th) * Mat2c::Identity();
  if (th != 0.0) u -= I * std::sin(th) * pauli::from_field(f / (0.5 * f.norm()));
  return std::exp(-I * a * s) * u;
}

/// Superoperator ρ ↦ e^{−isH} ρ e^{isH}.
inline Tetradic conjugation(const Mat2c& h, double s) {
  const Mat2c u = unitary(h, s);
  return kron(u.conjugate(), u);
}

inline bool is_dephasing_coupling(const Mat2c& c) {
  return (c - pauli::z()).cwiseAbs().maxCoeff() <= 1e-12;
}

/// Rotating-frame drive field R(−ωt)·h_d(t).
inline Vec3 rotating_drive_field(const DriveSpec& d, double t) {
  return so3::rot_z(-d.frequency * t) * d.field(t);
}

}  // namespace detail

/// K¹ = −i⟨L(t)⟩: rotation generated by the mean Hamiltonian. The rotating
/// frame co-rotates with the drive frequency, r′ = exp(−ωt L_z) r.
inline TLGenerator k1_generator(const SystemSpec& sys, const DriveSpec& drive, Frame frame) {
  drive.validate();
  const Vec3 h0(0, 0, sys.omega);
  if (frame == Frame::lab)
    return {1, frame, [h0, drive](double t) { return BlochAffine{so3::hat(h0 + drive.field(t)), Vec3::Zero()}; }};
  const Vec3 h0r(0, 0, sys.omega - drive.frequency);
  if (drive.is_monochromatic()) {
    const Mat3 m = so3::hat(h0r + detail::rotating_drive_field(drive, 0.0));
    return {1, frame, [m](double) { return BlochAffine{m, Vec3::Zero()}; }};
  }
  return {1, frame, [h0r, drive](double t) {
            return BlochAffine{so3::hat(h0r + detail::rotating_drive_field(drive, t)), Vec3::Zero()};
          }};
}

/// Second-order dissipator for σ_z dephasing. The drive drops out, and the
/// rotation about z leaves diag(1,1,0) invariant, so both frames agree:
/// M₂(t) = −4 ∫₀ᵗ ⟨η(0)η(t′)⟩dt′ · diag(1,1,0) = −g(1 − e^{−t/τ}) diag(1,1,0).
inline TLGenerator k2_generator(const SystemSpec& sys, const OUNoiseParams& noise, Frame frame) {
  noise.validate();
  if (!detail::is_dephasing_coupling(sys.noise_coupling))
    throw InvalidArgument("k2_generator: closed form requires sigma_z noise coupling");
  return {2, frame, [noise](double t) {
            BlochAffine a;
            const double rate = 4.0 * integrated_autocorrelation(noise, t);
            a.M(0, 0) = a.M(1, 1) = -rate;
            return a;
          }};
}

/// Second cumulant in tetradic form, built from the full perturbation
/// L(t) = L_d(t) + η(t)S with S = [coupling, ·]:
///   K²(t) = −∫₀ᵗ dt′ (⟨L(t) E(t′) L(t−t′) E(t′)⁻¹⟩ − ⟨L(t)⟩ E(t′) ⟨L(t−t′)⟩ E(t′)⁻¹),
/// E(s) = e^{−isL₀}. The Gaussian average over (η(t), η(t−t′)) uses the
/// two-point Gauss–Hermite rule per variable, exact for these second moments.
/// An empty `drive` gives the drive-free generator.
inline Tetradic k2_tetradic(const Mat2c& h0, const std::function<Mat2c(double)>& drive, const Mat2c& coupling,
                            const OUNoiseParams& noise, double t, const quad::Options& qopt = {}) {
  noise.validate();
  const Tetradic s = commutator_superop(coupling);
  const double var = noise.variance();
  auto ld = [&](double x) -> Tetradic { return drive ? commutator_superop(drive(x)) : Tetradic::Zero(); };
  auto integrand = [&](double tp) -> Tetradic {
    const Tetradic e = detail::conjugation(h0, tp);
    const Tetradic einv = detail::conjugation(h0, -tp);
    const Tetradic a = ld(t), b = ld(t - tp);
    const double rho = var > 0 ? autocorrelation(noise, tp) / var : 0.0;
    const double sd = std::sqrt(var);
    Tetradic moment = Tetradic::Zero();
    for (int i : {-1, 1})
      for (int j : {-1, 1}) {
        const double e1 = sd * i;
        const double e2 = sd * (rho * i + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * j);
        moment += 0.25 * (a + e1 * s) * e * (b + e2 * s) * einv;
      }
    return -(moment - a * e * b * einv);
  };
  if (t == 0.0) return Tetradic::Zero();
  return quad::integrate(integrand, 0.0, t, qopt).value;
}

/// Third cumulant in tetradic form for Gaussian noise:
///   K³(t) = i ∫₀ᵗdt′ ∫₀^{t−t′}dt″ C(t′+t″) [S E(t′) L_d(t−t′) E(t″) S E(t′+t″)⁻¹
///                                        − S E(t′+t″) S E(t″)⁻¹ L_d(t−t′) E(t′)⁻¹].
/// When S commutes with L₀ the t″ integral is done analytically,
/// ∫₀^{t−t′} C(t′+t″)dt″ = τ[C(t′) − C(t)]; otherwise both integrals are
/// adaptive.
inline Tetradic k3_tetradic(const Mat2c& h0, const std::function<Mat2c(double)>& drive, const Mat2c& coupling,
                            const OUNoiseParams& noise, double t, const quad::Options& qopt = {}) {
  noise.validate();
  if (t == 0.0 || !drive) return Tetradic::Zero();
  const Tetradic s = commutator_superop(coupling);
  const Tetradic l0 = commutator_superop(h0);
  const double scale = std::max({1.0, s.cwiseAbs().maxCoeff(), l0.cwiseAbs().maxCoeff()});
  const bool commuting = (s * l0 - l0 * s).cwiseAbs().maxCoeff() <= 1e-14 * scale * scale;
  auto ld = [&](double x) -> Tetradic { return commutator_superop(drive(x)); };

  if (commuting) {
    const Tetradic s2 = s * s;
    const double c_t = autocorrelation(noise, t);
    auto integrand = [&](double tp) -> Tetradic {
      const double w = noise.tau * (autocorrelation(noise, tp) - c_t);
      const Tetradic rot = detail::conjugation(h0, tp) * ld(t - tp) * detail::conjugation(h0, -tp);
      return (I * w) * (s * rot * s - s2 * rot);
    };
    return quad::integrate(integrand, 0.0, t, qopt).value;
  }

  quad::Options inner = qopt;
  inner.abs_tol = qopt.abs_tol / std::max(1.0, t);
  auto outer = [&](double tp) -> Tetradic {
    const Tetradic e1 = detail::conjugation(h0, tp), e1inv = detail::conjugation(h0, -tp);
    const Tetradic l = ld(t - tp);
    auto f = [&](double tpp) -> Tetradic {
      const double c = autocorrelation(noise, tp + tpp);
      const Tetradic e2 = detail::conjugation(h0, tpp), e2inv = detail::conjugation(h0, -tpp);
      const Tetradic e12 = detail::conjugation(h0, tp + tpp), e12inv = detail::conjugation(h0, -(tp + tpp));
      return (I * c) * (s * e1 * l * e2 * s * e12inv - s * e12 * s * e2inv * l * e1inv);
    };
    if (t - tp <= 0.0) return Tetradic::Zero();
    return quad::integrate(f, 0.0, t - tp, inner).value;
  };
  return quad::integrate(outer, 0.0, t, qopt).value;
}

/// K³ by generic tetradic quadrature, converted to Bloch form.
inline TLGenerator k3_generator_general(const SystemSpec& sys, const DriveSpec& drive, const OUNoiseParams& noise,
                                        Frame frame, const quad::Options& qopt = {}) {
  noise.validate();
  drive.validate();
  Mat2c h0 = sys.hamiltonian();
  std::function<Mat2c(double)> hd = [drive](double t) { return drive.hamiltonian(t); };
  if (frame == Frame::rotating) {
    h0 = 0.5 * (sys.omega - drive.frequency) * pauli::z();
    hd = [drive](double t) { return pauli::from_field(detail::rotating_drive_field(drive, t)); };
  }
  if (frame == Frame::rotating && (std::abs(sys.noise_coupling(0, 1)) > 0.0 || std::abs(sys.noise_coupling(1, 0)) > 0.0))
    throw InvalidArgument("k3_generator_general: rotating frame requires noise commuting with sigma_z");
  const Mat2c coupling = sys.noise_coupling;
  return {3, frame, [=](double t) { return to_bloch(k3_tetradic(h0, hd, coupling, noise, t, qopt)); }};
}

/// Same as above for an arbitrary drive Hamiltonian (e.g. a longitudinal
/// drive), lab frame only.
inline TLGenerator k3_generator_general(const Mat2c& h0, std::function<Mat2c(double)> drive, const Mat2c& coupling,
                                        const OUNoiseParams& noise, const quad::Options& qopt = {}) {
  return {3, Frame::lab,
          [=](double t) { return to_bloch(k3_tetradic(h0, drive, coupling, noise, t, qopt)); }};
}

namespace detail {

/// (x, y) of the only nonzero column of the lab-frame M₃ as a complex
/// number x + iy, for a monochromatic drive:
///   4D e^{i(ωt+φ−π/2)} ∫₀ᵗ W(t′) e^{iΔt′} dt′,  W(t′) = (g/4)(e^{−t′/τ} − e^{−t/τ}).
inline cplx k3_column_lab(double omega, const DriveSpec& d, const OUNoiseParams& n, double t) {
  const double delta = omega - d.frequency;
  const cplx lam(-1.0 / n.tau, delta);
  const cplx j = 0.25 * n.g * (phi1(lam, t) - std::exp(-t / n.tau) * phi1(cplx(0.0, delta), t));
  return 4.0 * d.amplitude * std::exp(I * (d.frequency * t + d.phase - 0.5 * std::numbers::pi)) * j;
}

/// General envelope: 8 ∫₀ᵗ W(t′) e^{iΩt′} (−i f*(t−t′)) dt′.
inline cplx k3_column_lab_quadrature(double omega, const DriveSpec& d, const OUNoiseParams& n, double t,
                                     const quad::Options& qopt) {
  const double ct = std::exp(-t / n.tau);
  auto f = [&](double tp) -> cplx {
    const double w = 0.25 * n.g * (std::exp(-tp / n.tau) - ct);
    return 8.0 * w * std::exp(I * omega * tp) * (-I * std::conj(d.f(t - tp)));
  };
  return quad::integrate(f, 0.0, t, qopt).value;
}

}  // namespace detail

/// Specialized third-order kernel for σ_z dephasing with a transverse drive.
/// Only the third column of M₃ is nonzero, in rows 1–2. In the rotating
/// frame with Δ = 0 it reduces to (gD/τ) I(t) (sin φ, −cos φ) with
/// I(t) = τ²(1 − e^{−t/τ}) − τ t e^{−t/τ}.
inline TLGenerator k3_dephasing_bloch(const SystemSpec& sys, const DriveSpec& drive, const OUNoiseParams& noise,
                                      Frame frame, const quad::Options& qopt = {}) {
  noise.validate();
  drive.validate();
  if (!detail::is_dephasing_coupling(sys.noise_coupling))
    throw InvalidArgument("k3_dephasing_bloch: requires sigma_z noise coupling");
  const double omega = sys.omega;
  auto column = [=](double t) -> cplx {
    if (drive.is_monochromatic()) return detail::k3_column_lab(omega, drive, noise, t);
    return detail::k3_column_lab_quadrature(omega, drive, noise, t, qopt);
  };
  return {3, frame, [=](double t) {
            cplx c = column(t);
            if (frame == Frame::rotating) c *= std::exp(-I * drive.frequency * t);
            BlochAffine a;
            a.M(0, 2) = c.real();
            a.M(1, 2) = c.imag();
            return a;
          }};
}

/// I(t) = ∫₀ᵗ∫₀^{t−t′} e^{−(t′+t″)/τ} dt″ dt′.
inline double k3_memory_integral(double tau, double t) {
  return -tau * tau * std::expm1(-t / tau) - tau * t * std::exp(-t / tau);
}

/// Validity heuristic of the third-order truncation: warns when the drive
/// strength δ = D/2 exceeds 0.3 Ω.
inline std::optional<std::string> validity_warning(const SystemSpec& sys, const DriveSpec& drive) {
  const double ratio = 0.5 * drive.amplitude / sys.omega;
  if (ratio > 0.3)
    return "drive strength delta/omega = " + std::to_string(ratio) +
           " exceeds 0.3; higher cumulant orders may not be negligible";
  return std::nullopt;
}

}  // namespace tclq
