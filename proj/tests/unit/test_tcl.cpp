#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tclq/numerics/quadrature.hpp"
#include "tclq/tcl/generators.hpp"
#include "tclq/tcl/propagate.hpp"

using namespace tclq;

namespace {

// Hand-rolled parameter generator.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  Mat2c hermitian(double scale) {
    Mat2c m;
    m << uniform(-1, 1), cplx(uniform(-1, 1), uniform(-1, 1)), 0.0, uniform(-1, 1);
    m(1, 0) = std::conj(m(0, 1));
    return scale * m;
  }
};

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(K1, LabAndRotatingForms) {
  const SystemSpec sys{1.0};
  const auto d = DriveSpec::monochromatic(0.1, 0.9, 0.4);
  const auto lab = k1_generator(sys, d, Frame::lab)(2.0);
  const double arg = 0.9 * 2.0 + 0.4;
  EXPECT_LT(max_abs(lab.M - so3::hat(Vec3(0.1 * std::cos(arg), 0.1 * std::sin(arg), 1.0))), 1e-15);
  const auto rot = k1_generator(sys, d, Frame::rotating)(123.0);
  EXPECT_LT(max_abs(rot.M - so3::hat(Vec3(0.1 * std::cos(0.4), 0.1 * std::sin(0.4), 0.1))), 1e-15);
  EXPECT_EQ(rot.b, Vec3::Zero());
}

TEST(K2, ClosedFormMatchesGaussianAverage) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  const auto gen = k2_generator(sys, n, Frame::lab);
  for (double t : {0.0, 0.05, 0.3, 2.0}) {
    const Tetradic k = k2_tetradic(sys.hamiltonian(), {}, pauli::z(), n, t);
    double residue = 0;
    const auto b = to_bloch(k, &residue);
    EXPECT_LT(max_abs(b.M - gen(t).M), 1e-15) << t;
    EXPECT_LT(b.b.norm(), 1e-16);
    EXPECT_LT(residue, 1e-16);
    EXPECT_NEAR(gen(t).M(0, 0), -n.g * (1 - std::exp(-t / n.tau)), 1e-16);
  }
}

TEST(K2, SameInBothFrames) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  for (double t : {0.1, 1.0})
    EXPECT_EQ(k2_generator(sys, n, Frame::lab)(t).M, k2_generator(sys, n, Frame::rotating)(t).M);
}

// The drive terms cancel out of the second cumulant exactly.
TEST(K2, DriveCancellationRandomTuples) {
  Gen gen(2024);
  for (int i = 0; i < 200; ++i) {
    const Mat2c h0 = 0.5 * gen.uniform(0.2, 2.0) * pauli::z();
    const Mat2c c = (i % 2) ? pauli::z() : gen.hermitian(1.0);
    const OUNoiseParams n{gen.log_uniform(1e-4, 1e-1), gen.log_uniform(0.01, 2.0)};
    const auto d = DriveSpec::monochromatic(gen.uniform(0, 0.5), gen.uniform(0.5, 1.5), gen.uniform(0, 6.28));
    const double t = gen.uniform(0.0, 5.0);
    const Tetradic with = k2_tetradic(h0, [&](double s) { return d.hamiltonian(s); }, c, n, t);
    const Tetradic without = k2_tetradic(h0, {}, c, n, t);
    ASSERT_LE(max_abs(with - without), 1e-12) << "tuple " << i;
  }
}

TEST(K3, ClosedFormMatchesOneDimensionalQuadrature) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  Gen gen(5);
  quad::Options q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  for (int i = 0; i < 30; ++i) {
    const auto d = DriveSpec::monochromatic(gen.uniform(0, 0.1), gen.uniform(0.8, 1.2), gen.uniform(0, 6.28));
    const auto env = DriveSpec::general([d](double s) { return d.f(s); });
    const double t = gen.uniform(0.0, 3.0);
    const cplx closed = detail::k3_column_lab(sys.omega, d, n, t);
    const cplx quad = detail::k3_column_lab_quadrature(sys.omega, env, n, t, q);
    EXPECT_LT(std::abs(closed - quad), 1e-14 * std::max(1.0, std::abs(closed)) + 1e-16) << i;
  }
}

TEST(K3, GeneralTetradicMatchesClosedForm) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  const auto d = DriveSpec::monochromatic(5e-2, 1.0, std::numbers::pi / 4);
  for (Frame f : {Frame::lab, Frame::rotating}) {
    const auto general = k3_generator_general(sys, d, n, f);
    const auto closed = k3_dephasing_bloch(sys, d, n, f);
    for (double t : {0.01, 0.1, 0.5, 3.0}) {
      const auto a = general(t), b = closed(t);
      EXPECT_LT(max_abs(a.M - b.M), 1e-15) << to_string(f) << " t=" << t;
      EXPECT_LT(a.b.norm(), 1e-16);
    }
  }
}

TEST(K3, ResonantRotatingFrameForm) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  const double dd = 5e-2, phi = 0.7;
  const auto k3 = k3_dephasing_bloch(sys, DriveSpec::monochromatic(dd, 1.0, phi), n, Frame::rotating);
  for (double t : {0.05, 0.2, 1.0, 50.0}) {
    const double i_t = k3_memory_integral(n.tau, t);
    const auto m = k3(t).M;
    EXPECT_NEAR(m(0, 2), n.g * dd / n.tau * i_t * std::sin(phi), 1e-15);
    EXPECT_NEAR(m(1, 2), -n.g * dd / n.tau * i_t * std::cos(phi), 1e-15);
    Mat3 rest = m;
    rest(0, 2) = rest(1, 2) = 0.0;
    EXPECT_EQ(max_abs(rest), 0.0);
  }
}

// At φ = π/4 the two entries have equal magnitude and opposite sign.
TEST(K3, QuarterPiPhaseGivesEqualMagnitudes) {
  const auto k3 = k3_dephasing_bloch(SystemSpec{1.0}, DriveSpec::monochromatic(1e-2, 1.0, std::numbers::pi / 4),
                                     OUNoiseParams{4e-3, 0.1}, Frame::rotating);
  for (double t : {0.1, 1.0, 10.0}) {
    const auto m = k3(t).M;
    EXPECT_NEAR(std::abs(m(0, 2)), std::abs(m(1, 2)), 1e-18);
    EXPECT_GT(m(0, 2), 0.0);
    EXPECT_LT(m(1, 2), 0.0);
  }
}

TEST(K3, MemoryIntegral) {
  const double tau = 0.1;
  EXPECT_EQ(k3_memory_integral(tau, 0.0), 0.0);
  EXPECT_NEAR(k3_memory_integral(tau, 100.0), tau * tau, 1e-18);
  for (double t : {0.01, 0.3, 2.0}) {
    const double q = quad::integrate(
                         [&](double tp) {
                           return quad::integrate([&](double tpp) { return std::exp(-(tp + tpp) / tau); }, 0.0, t - tp)
                               .value;
                         },
                         0.0, t)
                         .value;
    EXPECT_NEAR(k3_memory_integral(tau, t), q, 1e-15);
  }
}

TEST(K3, LinearInDriveAmplitude) {
  const SystemSpec sys{1.0};
  const OUNoiseParams n{4e-3, 0.1};
  for (double t : {0.2, 5.0}) {
    const auto a = k3_dephasing_bloch(sys, DriveSpec::monochromatic(0.01, 0.97, 0.3), n, Frame::lab)(t).M;
    const auto b = k3_dephasing_bloch(sys, DriveSpec::monochromatic(0.03, 0.97, 0.3), n, Frame::lab)(t).M;
    EXPECT_LT(max_abs(b - 3.0 * a), 1e-17);
  }
  EXPECT_EQ(max_abs(k3_dephasing_bloch(sys, DriveSpec::monochromatic(0.0, 1.0, 0.0), n, Frame::lab)(1.0).M), 0.0);
}

// σ_z drive with σ_z noise: the third cumulant vanishes.
TEST(K3, CommutingCaseVanishes) {
  Gen gen(77);
  for (int i = 0; i < 50; ++i) {
    const double om = gen.uniform(0.1, 3.0), a = gen.uniform(0, 1), w = gen.uniform(0, 3);
    const Mat2c h0 = 0.5 * om * pauli::z();
    auto drive = [a, w](double s) -> Mat2c { return a * std::cos(w * s) * pauli::z(); };
    const OUNoiseParams n{gen.log_uniform(1e-3, 1.0), gen.log_uniform(0.01, 3.0)};
    const double t = gen.uniform(0.0, 10.0);
    EXPECT_LE(max_abs(k3_tetradic(h0, drive, pauli::z(), n, t)), 1e-12) << i;
  }
}

TEST(K3, NonCommutingNoiseDoesNotVanish) {
  const Mat2c h0 = 0.5 * pauli::z();
  auto drive = [](double s) -> Mat2c { return 0.05 * std::cos(s) * pauli::x(); };
  const Tetradic k = k3_tetradic(h0, drive, pauli::x(), OUNoiseParams{0.1, 1.0}, 2.0);
  EXPECT_GT(max_abs(k), 1e-5) << max_abs(k);
}

TEST(K3, ValidityWarning) {
  EXPECT_FALSE(validity_warning(SystemSpec{1.0}, DriveSpec::monochromatic(0.5, 1.0, 0.0)));
  EXPECT_TRUE(validity_warning(SystemSpec{1.0}, DriveSpec::monochromatic(0.7, 1.0, 0.0)));
}

TEST(Propagate, UnitaryRabiLimit) {
  const SystemSpec sys{1.0};
  const double dd = 0.2;
  const auto grid = ode::uniform_grid(100.0, 0.5);
  const auto traj = propagate({k1_generator(sys, DriveSpec::monochromatic(dd, 1.0, 0.0), Frame::rotating)},
                              BlochVector(0, 0, 1), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(traj.r[k].y(), -std::sin(dd * grid[k]), 1e-8);
    EXPECT_NEAR(traj.r[k].z(), std::cos(dd * grid[k]), 1e-8);
  }
}

TEST(Propagate, LabAndRotatingFramesAgree) {
  const SystemSpec sys{1.0};
  const auto d = DriveSpec::monochromatic(0.05, 0.98, 0.6);
  const OUNoiseParams n{4e-3, 0.1};
  const auto grid = ode::uniform_grid(60.0, 0.25);
  ode::Options o;
  o.rel_tol = 1e-11;
  o.abs_tol = 1e-13;
  const auto lab = propagate({k1_generator(sys, d, Frame::lab), k2_generator(sys, n, Frame::lab),
                              k3_dephasing_bloch(sys, d, n, Frame::lab)},
                             BlochVector(0.3, 0, 0.9), grid, o);
  const auto rot = propagate({k1_generator(sys, d, Frame::rotating), k2_generator(sys, n, Frame::rotating),
                              k3_dephasing_bloch(sys, d, n, Frame::rotating)},
                             BlochVector(0.3, 0, 0.9), grid, o);
  const auto mapped = rotating_frame_map(lab, d.frequency, FrameDirection::to_rotating);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_LT((mapped.r[k] - rot.r[k]).norm(), 1e-8) << grid[k];
}

TEST(Propagate, FrameMapRoundTrip) {
  BlochTrajectory t;
  for (int k = 0; k < 100; ++k) {
    t.t.push_back(0.37 * k);
    t.r.emplace_back(std::sin(k), std::cos(0.5 * k), 0.1 * k / 100.0);
  }
  const auto back = rotating_frame_map(rotating_frame_map(t, 1.3, FrameDirection::to_rotating), 1.3,
                                       FrameDirection::to_lab);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_LT((back.r[k] - t.r[k]).norm(), 1e-14);
    EXPECT_EQ(back.r[k].z(), t.r[k].z());
  }
}

TEST(Propagate, StaysInBlochBallOverLongRuns) {
  const SystemSpec sys{1.0};
  const auto d = DriveSpec::monochromatic(5e-2, 1.0, std::numbers::pi / 4);
  const OUNoiseParams n{4e-3, 0.1};
  const auto grid = ode::uniform_grid(2000.0, 1.0);
  const auto traj = propagate({k1_generator(sys, d, Frame::rotating), k2_generator(sys, n, Frame::rotating),
                               k3_dephasing_bloch(sys, d, n, Frame::rotating)},
                              BlochVector(0, 0, 1), grid);
  for (const auto& r : traj.r) EXPECT_LE(r.norm(), 1.0 + 1e-9);
}

TEST(Propagate, RejectsMixedFrames) {
  const SystemSpec sys{1.0};
  const auto d = DriveSpec::monochromatic(0.1, 1.0, 0.0);
  const auto grid = ode::uniform_grid(1.0, 0.5);
  EXPECT_THROW(propagate({k1_generator(sys, d, Frame::lab), k1_generator(sys, d, Frame::rotating)},
                         BlochVector(0, 0, 1), grid),
               InvalidArgument);
}

TEST(Tabulate, MatchesDirectEvaluation) {
  const SystemSpec sys{1.0};
  const auto gen = k3_dephasing_bloch(sys, DriveSpec::monochromatic(5e-2, 1.0, 0.3), OUNoiseParams{4e-3, 0.1},
                                      Frame::rotating);
  const auto tab = tabulate(gen, 10.0, 0.005);
  const double scale = max_abs(gen(10.0).M);
  for (double t = 0.0013; t < 10.0; t += 0.37) EXPECT_LT(max_abs(tab(t).M - gen(t).M), 1e-6 * scale) << t;
  EXPECT_THROW(tab(10.5), InvalidArgument);
}
