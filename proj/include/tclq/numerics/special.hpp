#pragma once

#include <cmath>
#include <complex>

namespace tclq {

/// e^z − 1 without cancellation for small |z|.
inline std::complex<double> expm1(std::complex<double> z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// φ₁(z, t) = (e^{zt} − 1)/z = ∫₀ᵗ e^{zs} ds, continuous at z = 0.
inline std::complex<double> phi1(std::complex<double> z, double t) {
  const std::complex<double> w = z * t;
  if (std::abs(w) < 1e-6) return t * (1.0 + w * (0.5 + w / 6.0));
  return expm1(w) / z;
}

/// φ₂(z, t) = ∫₀ᵗ s e^{zs} ds = (t e^{zt} − φ₁(z,t))/z, continuous at z = 0.
inline std::complex<double> phi2(std::complex<double> z, double t) {
  const std::complex<double> w = z * t;
  if (std::abs(w) < 1e-3) {
    // t²·Σ w^k/(k!(k+2))
    std::complex<double> term = 1.0, sum = 0.5;
    for (int k = 1; k < 12; ++k) {
      term *= w / static_cast<double>(k);
      sum += term / static_cast<double>(k + 2);
    }
    return t * t * sum;
  }
  return (t * std::exp(w) - phi1(z, t)) / z;
}

}  // namespace tclq
