#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "tclq/error.hpp"

namespace tclq {

/// Stationary Ornstein–Uhlenbeck noise with ⟨η(t)η(t′)⟩ = (g/4τ) e^{−|t−t′|/τ}.
struct OUNoiseParams {
  double g = 0.0;
  double tau = 1.0;

  void validate() const {
    if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidArgument("noise power g must be finite and >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("noise memory time tau must be finite and > 0");
  }
  double variance() const { return g / (4.0 * tau); }
};

inline double autocorrelation(const OUNoiseParams& p, double dt) {
  return p.variance() * std::exp(-std::abs(dt) / p.tau);
}

/// ∫₀ᵗ ⟨η(0)η(t′)⟩ dt′ = (g/4)(1 − e^{−t/τ}).
inline double integrated_autocorrelation(const OUNoiseParams& p, double t) {
  return -0.25 * p.g * std::expm1(-t / p.tau);
}

/// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trajectory k: splitmix64(splitmix64(master) ^ splitmix64(~k)).
/// Depends only on (master, k), so any partition of trajectories over
/// workers draws the same numbers.
inline std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t k) {
  return splitmix64(splitmix64(master) ^ splitmix64(~k));
}

using Rng = std::mt19937_64;
// Ziggurat sampler with a fixed algorithm, so streams match across standard
// libraries (std::normal_distribution is implementation defined).
using Normal = boost::random::normal_distribution<double>;

struct NoisePath {
  std::vector<double> times;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

/// Exact OU discretization on t_k = k·dt, k = 0..⌊T/dt⌋, starting from the
/// stationary distribution.
inline NoisePath sample_ou_path(const OUNoiseParams& p, double dt, double t_max, std::uint64_t seed) {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("sample_ou_path: dt must be > 0");
  if (!(t_max >= dt)) throw InvalidArgument("sample_ou_path: need T >= dt");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
  NoisePath path;
  path.seed = seed;
  path.times.resize(n);
  path.values.resize(n);
  Rng rng(seed);
  Normal normal;
  const double sd = std::sqrt(p.variance());
  const double a = std::exp(-dt / p.tau);
  const double kick = sd * std::sqrt(-std::expm1(-2.0 * dt / p.tau));
  double eta = sd * normal(rng);
  for (std::size_t k = 0; k < n; ++k) {
    path.times[k] = static_cast<double>(k) * dt;
    path.values[k] = eta;
    eta = eta * a + kick * normal(rng);
  }
  return path;
}

/// Joint exact update of η and of its step integral Φ = ∫ η dt over a step
/// of length h. The pair (η_{k+1}, Φ_k) given η_k is Gaussian; the
/// conditional covariance is factored once.
class OUStepper {
 public:
  OUStepper(const OUNoiseParams& p, double h) : sd_(std::sqrt(p.variance())) {
    p.validate();
    if (!(h > 0.0)) throw InvalidArgument("OUStepper: step must be > 0");
    const double x = h / p.tau;
    a_ = std::exp(-x);
    mean_phi_ = -p.tau * std::expm1(-x);
    const double var = p.variance();
    const double v_eta = -var * std::expm1(-2.0 * x);
    // 2x − 3 + 4e^{−x} − e^{−2x}, with its series near 0.
    const double q = x < 1e-3 ? x * x * x * (2.0 / 3.0 - x / 2.0 + 7.0 * x * x / 30.0)
                              : 2.0 * x + 4.0 * std::expm1(-x) - std::expm1(-2.0 * x);
    const double v_phi = var * p.tau * p.tau * q;
    const double cov = var * p.tau * std::expm1(-x) * std::expm1(-x);
    l11_ = std::sqrt(v_eta);
    l21_ = l11_ > 0 ? cov / l11_ : 0.0;
    l22_ = std::sqrt(std::max(v_phi - l21_ * l21_, 0.0));
  }

  double stationary(Rng& rng) { return sd_ * normal_(rng); }

  /// Advances eta by one step and returns the step integral.
  double step(double& eta, Rng& rng) {
    const double z1 = normal_(rng), z2 = normal_(rng);
    const double phi = eta * mean_phi_ + l21_ * z1 + l22_ * z2;
    eta = eta * a_ + l11_ * z1;
    return phi;
  }

 private:
  double sd_;
  double a_ = 0, mean_phi_ = 0, l11_ = 0, l21_ = 0, l22_ = 0;
  Normal normal_;
};

}  // namespace tclq
