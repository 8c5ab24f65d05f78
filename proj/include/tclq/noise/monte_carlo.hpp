#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "tclq/core/pauli.hpp"
#include "tclq/core/so3.hpp"
#include "tclq/core/state.hpp"
#include "tclq/noise/ou.hpp"
#include "tclq/tcl/spec.hpp"

namespace tclq {

struct MonteCarloOptions {
  double dt = 0.02;
  double t_max = 100.0;
  double dt_out = 1.0;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 1;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  BlochVector r0 = BlochVector(0, 0, 1);
};

struct EnsembleResult {
  BlochTrajectory mean;
  std::vector<Vec3> std_error;
  std::size_t n_traj = 0;
  /// max over trajectories and output times of | |r(t)| − |r(0)| |.
  double max_norm_drift = 0.0;
};

namespace detail {

inline constexpr std::size_t kMcBlock = 64;

struct BlockSums {
  std::vector<Vec3> sum, sum_sq;
  double drift = 0.0;
};

}  // namespace detail

/// Noise-averaged Bloch trajectory under H(t) = H₀ + H_d(t) + η(t)·coupling.
/// Each trajectory is stepped by the exact rotation generated by the
/// midpoint deterministic field plus the exact step integral of the OU
/// noise, so every realization is unitary. Trajectories are processed in
/// fixed blocks of 64 whose partial sums are merged in block order, making
/// the result independent of the thread count.
inline EnsembleResult mc_ensemble_average(const Mat2c& h0, const DriveSpec& drive, const Mat2c& coupling,
                                          const OUNoiseParams& noise, const MonteCarloOptions& opt) {
  noise.validate();
  if (opt.n_traj < 1) throw InvalidArgument("mc_ensemble_average: need at least one trajectory");
  if (!is_hermitian(h0) || !is_hermitian(coupling) || !h0.allFinite() || !coupling.allFinite())
    throw InvalidArgument("mc_ensemble_average: H0 and coupling must be Hermitian");
  if (!(opt.dt > 0.0) || !(opt.t_max > 0.0) || !(opt.dt_out > 0.0))
    throw InvalidArgument("mc_ensemble_average: dt, t_max and dt_out must be > 0");
  const double ratio = opt.dt_out / opt.dt;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio)
    throw InvalidArgument("mc_ensemble_average: dt_out must be an integer multiple of dt");
  const auto n_out = static_cast<std::size_t>(std::floor(opt.t_max / opt.dt_out + 1e-9)) + 1;

  const Vec3 f0 = pauli::field(h0);
  const Vec3 fc = pauli::field(coupling);
  const double r0_norm = opt.r0.norm();
  const std::size_t n_blocks = (opt.n_traj + detail::kMcBlock - 1) / detail::kMcBlock;
  std::vector<detail::BlockSums> blocks(n_blocks);

  // Drive field at step midpoints is shared by all trajectories.
  const std::size_t n_steps = (n_out - 1) * stride;
  std::vector<Vec3> det(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k)
    det[k] = (f0 + drive.field((static_cast<double>(k) + 0.5) * opt.dt)) * opt.dt;

  auto run_block = [&](std::size_t b) {
    auto& out = blocks[b];
    out.sum.assign(n_out, Vec3::Zero());
    out.sum_sq.assign(n_out, Vec3::Zero());
    OUStepper ou(noise, opt.dt);
    const std::size_t first = b * detail::kMcBlock;
    const std::size_t last = std::min(opt.n_traj, first + detail::kMcBlock);
    for (std::size_t k = first; k < last; ++k) {
      Rng rng(trajectory_seed(opt.seed, k));
      double eta = ou.stationary(rng);
      Vec3 r = opt.r0;
      out.sum[0] += r;
      out.sum_sq[0] += r.cwiseProduct(r);
      std::size_t step = 0;
      for (std::size_t j = 1; j < n_out; ++j) {
        for (std::size_t s = 0; s < stride; ++s, ++step) {
          const double phi = ou.step(eta, rng);
          r = so3::rotate(det[step] + fc * phi, r);
        }
        out.sum[j] += r;
        out.sum_sq[j] += r.cwiseProduct(r);
        out.drift = std::max(out.drift, std::abs(r.norm() - r0_norm));
      }
    }
  };

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) run_block(b);
      });
  }

  EnsembleResult res;
  res.n_traj = opt.n_traj;
  res.mean.t.resize(n_out);
  res.mean.r.assign(n_out, Vec3::Zero());
  res.std_error.assign(n_out, Vec3::Zero());
  std::vector<Vec3> sq(n_out, Vec3::Zero());
  for (const auto& blk : blocks) {
    for (std::size_t j = 0; j < n_out; ++j) {
      res.mean.r[j] += blk.sum[j];
      sq[j] += blk.sum_sq[j];
    }
    res.max_norm_drift = std::max(res.max_norm_drift, blk.drift);
  }
  const double n = static_cast<double>(opt.n_traj);
  for (std::size_t j = 0; j < n_out; ++j) {
    res.mean.t[j] = static_cast<double>(j) * opt.dt_out;
    res.mean.r[j] /= n;
    if (opt.n_traj > 1) {
      const Vec3 var = ((sq[j] / n - res.mean.r[j].cwiseProduct(res.mean.r[j])) * (n / (n - 1.0))).cwiseMax(0.0);
      res.std_error[j] = (var / n).cwiseSqrt();
    }
  }
  return res;
}

}  // namespace tclq
