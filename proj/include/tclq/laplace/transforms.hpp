#pragma once

#include <cmath>
#include <complex>

#include "tclq/error.hpp"
#include "tclq/laplace/rational.hpp"

namespace tclq {

/// Rotating-frame parameters of the dephasing benchmark (Ω = 1 units).
struct LaplaceParams {
  double delta = 0.0;
  double drive = 0.0;
  double phase = 0.0;
  double g = 0.0;
  double tau = 0.0;
};

namespace detail {
inline std::complex<double> checked_ratio(std::complex<double> n, std::complex<double> d) {
  if (std::abs(d) < 1e-300) throw SingularError("Laplace transform evaluated at a pole");
  return n / d;
}
}  // namespace detail

/// R_z(s) of the exact non-local equation with OU memory, for r(0) = ẑ:
///   [Δ² + (s + g/(1+sτ))²] / [Δ²s + (τs²+s+g)(τs(D²+s²) + s(s+g) + D²)/(1+sτ)²].
inline std::complex<double> rz_nt(std::complex<double> s, double delta, double d, double g, double tau) {
  const auto one = 1.0 + s * tau;
  const auto a = s + g / one;
  const auto num = delta * delta + a * a;
  const auto den = delta * delta * s +
                   (tau * s * s + s + g) * (tau * s * (d * d + s * s) + s * (s + g) + d * d) / (one * one);
  return detail::checked_ratio(num, den);
}

/// Memoryless limit: [Δ² + (s+g)²] / [Δ²s + (s+g)(D² + s(s+g))].
inline std::complex<double> rz_tl2(std::complex<double> s, double delta, double d, double g) {
  const auto num = delta * delta + (s + g) * (s + g);
  const auto den = delta * delta * s + (s + g) * (d * d + s * (s + g));
  return detail::checked_ratio(num, den);
}

/// Transform of the third-order time-local equation with its memory kernel
/// replaced by the saturated value:
///   [Δ² + (s+g)²] / {Δ²s + (s+g)[D² + s(s+g)] + gD²τ(s+g)/(1+Δ²τ²)}.
/// Independent of the drive phase; equals rz_tl2 at τ = 0.
inline std::complex<double> rz_tl3(std::complex<double> s, double delta, double d, double g, double tau) {
  const auto num = delta * delta + (s + g) * (s + g);
  const auto den = delta * delta * s + (s + g) * (d * d + s * (s + g)) +
                   g * d * d * tau * (s + g) / (1.0 + delta * delta * tau * tau);
  return detail::checked_ratio(num, den);
}

/// Cleared polynomial forms of the three transforms.
inline RationalFunction rz_nt_rational(double delta, double d, double g, double tau) {
  const RealPolynomial one{1.0, tau};
  const RealPolynomial quad{g, 1.0, tau};  // τs² + s + g
  const RealPolynomial inner{d * d, g + tau * d * d, 1.0, tau};  // τs(D²+s²) + s(s+g) + D²
  const RealPolynomial s{0.0, 1.0};
  RationalFunction rf;
  rf.num = (one * one) * (delta * delta) + quad * quad;
  rf.den = s * (one * one) * (delta * delta) + quad * inner;
  return rf;
}

inline RationalFunction rz_tl2_rational(double delta, double d, double g) {
  const RealPolynomial sg{g, 1.0};
  const RealPolynomial s{0.0, 1.0};
  RationalFunction rf;
  rf.num = RealPolynomial::constant(delta * delta) + sg * sg;
  rf.den = s * (delta * delta) + sg * (RealPolynomial::constant(d * d) + s * sg);
  return rf;
}

inline RationalFunction rz_tl3_rational(double delta, double d, double g, double tau) {
  const double k = 1.0 + delta * delta * tau * tau;
  const RealPolynomial sg{g, 1.0};
  const RealPolynomial s{0.0, 1.0};
  RationalFunction rf;
  rf.num = (RealPolynomial::constant(delta * delta) + sg * sg) * k;
  rf.den = (s * (delta * delta) + sg * (RealPolynomial::constant(d * d) + s * sg)) * k + sg * (g * d * d * tau);
  return rf;
}

}  // namespace tclq
