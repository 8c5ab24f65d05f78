#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "tclq/core/pauli.hpp"
#include "tclq/core/types.hpp"
#include "tclq/error.hpp"

namespace tclq {

enum class Frame { lab, rotating };

inline const char* to_string(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }

inline Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "rotating" || s == "rot") return Frame::rotating;
  throw InvalidArgument("unknown frame '" + s + "'");
}

/// Qubit with H₀ = Ω/2 σ_z and dephasing noise coupled through σ_z.
struct SystemSpec {
  double omega = 1.0;
  Mat2c noise_coupling = pauli::z();

  Mat2c hamiltonian() const { return 0.5 * omega * pauli::z(); }
};

/// Transverse drive H_d(t) = f(t)σ₊ + f*(t)σ₋. Without an envelope,
/// f(t) = (D/2) e^{−i(ωt+φ)}.
struct DriveSpec {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  std::function<cplx(double)> envelope;

  static DriveSpec monochromatic(double d, double w, double phi) { return {d, w, phi, {}}; }
  static DriveSpec general(std::function<cplx(double)> f) { return {0.0, 0.0, 0.0, std::move(f)}; }

  bool is_monochromatic() const { return !envelope; }

  cplx f(double t) const {
    if (envelope) return envelope(t);
    return 0.5 * amplitude * std::exp(-I * (frequency * t + phase));
  }

  Mat2c hamiltonian(double t) const {
    const cplx v = f(t);
    return v * pauli::plus() + std::conj(v) * pauli::minus();
  }

  /// Bloch field h with H_d = ½ h·σ.
  Vec3 field(double t) const {
    const cplx v = f(t);
    return {2.0 * v.real(), -2.0 * v.imag(), 0.0};
  }

  void validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw InvalidArgument("drive amplitude must be finite and >= 0");
    if (!std::isfinite(frequency) || !std::isfinite(phase)) throw InvalidArgument("drive frequency and phase must be finite");
  }
};

/// Detuning Δ = Ω − ω of a monochromatic drive.
inline double detuning(const SystemSpec& sys, const DriveSpec& drive) { return sys.omega - drive.frequency; }

}  // namespace tclq
