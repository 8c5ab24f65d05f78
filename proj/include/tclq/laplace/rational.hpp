#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "tclq/error.hpp"
#include "tclq/numerics/polynomial.hpp"

namespace tclq {

/// N(s)/D(s) with real coefficients.
struct RationalFunction {
  RealPolynomial num;
  RealPolynomial den;

  std::complex<double> operator()(std::complex<double> s) const {
    const auto d = den(s);
    if (std::abs(d) < 1e-300) throw SingularError("rational function evaluated at a pole");
    return num(s) / d;
  }
};

/// r(t) = Σ_k Σ_j a_{kj} t^j/j! e^{p_k t}. Simple poles carry one
/// coefficient; a pole of multiplicity m carries m.
struct PoleResidueForm {
  struct Pole {
    std::complex<double> p;
    std::vector<std::complex<double>> coeffs;
  };
  std::vector<Pole> poles;
  /// Largest relative mismatch between Σ a/(s−p)^{j+1} and the original
  /// rational function over the verification points.
  double reconstruction_error = 0.0;
  bool ill_conditioned = false;

  std::complex<double> evaluate_complex(double t) const {
    std::complex<double> acc = 0.0;
    for (const auto& pl : poles) {
      std::complex<double> poly = 0.0;
      double fact = 1.0, tp = 1.0;
      for (std::size_t j = 0; j < pl.coeffs.size(); ++j) {
        if (j > 0) {
          fact *= static_cast<double>(j);
          tp *= t;
        }
        poly += pl.coeffs[j] * (tp / fact);
      }
      acc += poly * std::exp(pl.p * t);
    }
    return acc;
  }

  double operator()(double t) const { return evaluate_complex(t).real(); }

  std::vector<double> evaluate(const std::vector<double>& grid) const {
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) out.push_back((*this)(t));
    return out;
  }

  /// Laplace transform of the exponential sum.
  std::complex<double> transform(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (const auto& pl : poles) {
      const std::complex<double> inv = 1.0 / (s - pl.p);
      std::complex<double> pw = inv;
      for (const auto& a : pl.coeffs) {
        acc += a * pw;
        pw *= inv;
      }
    }
    return acc;
  }
};

struct InversionOptions {
  /// Roots closer than cluster_radius · max(1, |z|) are merged into one
  /// multiple pole.
  double cluster_radius = 1e-8;
  int check_points = 20;
  double check_tol = 1e-8;
  std::uint64_t check_seed = 20240607;
};

namespace detail {

inline PoleResidueForm invert_clustered(const RationalFunction& rf, const std::vector<std::complex<double>>& z,
                                        double radius, const InversionOptions& opt) {
  using C = std::complex<double>;
  PoleResidueForm out;
  // Group nearby roots.
  std::vector<bool> taken(z.size(), false);
  std::vector<std::pair<C, int>> clusters;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (taken[i]) continue;
    taken[i] = true;
    C sum = z[i];
    int m = 1;
    const double rad = radius * std::max(1.0, std::abs(z[i]));
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (!taken[j] && std::abs(z[j] - z[i]) <= rad) {
        taken[j] = true;
        sum += z[j];
        ++m;
      }
    C center = sum / static_cast<double>(m);
    if (m > 1) {
      // A root of multiplicity m is a simple root of the (m−1)-th
      // derivative; polish the centroid there.
      auto d = rf.den;
      for (int k = 1; k < m; ++k) d = d.derivative();
      const auto dd = d.derivative();
      for (int it = 0; it < 5; ++it) {
        const C slope = dd(center);
        if (std::abs(slope) == 0.0) break;
        const C next = center - d(center) / slope;
        if (!(std::abs(next - center) <= rad)) break;
        center = next;
      }
    }
    clusters.emplace_back(center, m);
  }

  const double lead = rf.den.leading();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto [p, m] = clusters[c];
    // Q(s) = D(s)/(s − p)^m from the other clusters.
    ComplexPolynomial q = ComplexPolynomial::constant(lead);
    for (std::size_t o = 0; o < clusters.size(); ++o) {
      if (o == c) continue;
      for (int k = 0; k < clusters[o].second; ++k) q = q * ComplexPolynomial::linear_factor(clusters[o].first);
    }
    PoleResidueForm::Pole pole{p, {}};
    if (m == 1) {
      pole.coeffs.push_back(rf.num(p) / q(p));
    } else {
      // Taylor coefficients of N/Q about p by series division.
      const auto nt = rf.num.taylor_at(p);
      const auto qt = q.taylor_at(p);
      std::vector<C> ratio(static_cast<std::size_t>(m), 0.0);
      for (int k = 0; k < m; ++k) {
        C v = k < static_cast<int>(nt.size()) ? nt[static_cast<std::size_t>(k)] : C(0.0);
        for (int j = 1; j <= k && j < static_cast<int>(qt.size()); ++j)
          v -= qt[static_cast<std::size_t>(j)] * ratio[static_cast<std::size_t>(k - j)];
        ratio[static_cast<std::size_t>(k)] = v / qt[0];
      }
      // Coefficient of (s−p)^{−(j+1)} is ratio[m−1−j].
      pole.coeffs.resize(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) pole.coeffs[static_cast<std::size_t>(j)] = ratio[static_cast<std::size_t>(m - 1 - j)];
    }
    out.poles.push_back(std::move(pole));
  }

  // Verification on points spread around the pole cloud.
  double scale = 1e-3;
  for (const auto& [p, m] : clusters) scale = std::max(scale, std::abs(p));
  std::mt19937_64 rng(opt.check_seed);
  std::uniform_real_distribution<double> re(0.2, 2.0), im(-2.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < opt.check_points; ++k) {
    const C s(scale * re(rng), scale * im(rng));
    const C exact = rf(s);
    const C approx = out.transform(s);
    worst = std::max(worst, std::abs(approx - exact) / std::max(std::abs(exact), 1e-300));
  }
  out.reconstruction_error = worst;
  out.ill_conditioned = !(worst <= opt.check_tol);
  return out;
}

}  // namespace detail

/// Partial-fraction inversion of a strictly proper rational function.
/// A root of multiplicity m is only resolved to about eps^{1/m}, so when
/// the reconstruction check fails the roots are regrouped with coarser
/// radii and the best verified form is kept.
inline PoleResidueForm invert_rational(const RationalFunction& rf, const InversionOptions& opt = {}) {
  const int dn = rf.den.degree();
  if (rf.den.is_zero()) throw InvalidArgument("invert_rational: zero denominator");
  if (dn > 8) throw InvalidArgument("invert_rational: denominator degree exceeds 8");
  if (!rf.num.is_zero() && rf.num.degree() >= dn)
    throw InvalidArgument("invert_rational: rational function is not strictly proper");
  if (rf.num.is_zero() || dn == 0) return {};

  const auto z = roots(rf.den);
  auto best = detail::invert_clustered(rf, z, opt.cluster_radius, opt);
  for (double radius : {1e-6, 1e-4, 1e-3}) {
    if (!best.ill_conditioned) break;
    if (radius <= opt.cluster_radius) continue;
    auto next = detail::invert_clustered(rf, z, radius, opt);
    if (next.reconstruction_error < best.reconstruction_error) best = std::move(next);
  }
  return best;
}

/// lim_{s→0} s·F(s), the long-time value of the inverse transform.
inline double final_value(const RationalFunction& rf) {
  const double d0 = rf.den[0];
  if (d0 != 0.0) return 0.0;
  const double d1 = rf.den[1];
  if (d1 == 0.0) throw SingularError("final_value: pole of order > 1 at s = 0");
  return rf.num[0] / d1;
}

}  // namespace tclq
