#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>
#include <gtest/gtest.h>

#include "tclq/pseudomode/bath.hpp"
#include "tclq/pseudomode/lindblad.hpp"
#include "tclq/pseudomode/tcl.hpp"

using namespace tclq;

namespace {

const PseudoModeBath kFig5 = PseudoModeBath::single(0.035, 0.75, 0.02, 4);
const DriveSpec kFig5Drive = DriveSpec::monochromatic(0.04, 1.0, 0.0);

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
};

}  // namespace

TEST(Bath, CorrelationFunction) {
  const auto bath = PseudoModeBath::single(0.035, 0.75, 0.02);
  const cplx c0 = bath_correlation(bath, 0.0);
  EXPECT_NEAR(c0.real(), 0.035 * 0.035, 1e-18);
  EXPECT_EQ(c0.imag(), 0.0);
  EXPECT_NEAR(std::abs(bath_correlation(bath, 2.0 / 0.02)), 0.035 * 0.035 * std::exp(-1.0), 1e-18);
  const auto fast = PseudoModeBath::single(0.035, 0.75, 1e4);
  EXPECT_LT(std::abs(bath_correlation(fast, 0.1)), 1e-100);
}

TEST(Bath, MultiModeCouplingsAndValidation) {
  PseudoModeBath b{{{0.5, 0.1, cplx(0.0, 2.0)}, {1.5, 0.3, cplx(0.0, 0.5)}}, 0.1, 2};
  EXPECT_NEAR(b.coupling(0), 0.1 * std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(bath_correlation(b, 0.0).real(), 0.01 * 2.5, 1e-16);
  b.validate();
  auto bad = b;
  bad.modes[0].gamma = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = b;
  bad.modes[1].residue = cplx(1.0, 0.0);
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = b;
  bad.n_max = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(PseudoModeBath{}.validate(), InvalidArgument);
}

TEST(Rates, GammaClosedFormMatchesQuadrature) {
  Gen gen(8);
  quad::Options q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-13;
  for (int i = 0; i < 50; ++i) {
    const double t = gen.uniform(0.0, 400.0);
    EXPECT_LE(std::abs(gamma_rate(kFig5, 1.0, t) - gamma_rate_quadrature(kFig5, 1.0, t, q)), 1e-10) << t;
  }
}

TEST(Rates, GammaLimits) {
  EXPECT_EQ(gamma_rate(kFig5, 1.0, 0.0), cplx(0.0));
  const cplx inf = 0.035 * 0.035 / cplx(0.01, -0.25);
  EXPECT_LT(std::abs(gamma_rate(kFig5, 1.0, 5000.0) - inf), 1e-15);
  EXPECT_GT(inf.real(), 0.0);
}

TEST(Rates, GClosedFormMatchesNestedQuadrature) {
  Gen gen(9);
  for (int i = 0; i < 25; ++i) {
    const double t = gen.uniform(0.0, 200.0);
    const auto d = DriveSpec::monochromatic(0.04, gen.uniform(0.9, 1.1), gen.uniform(0, 6.28));
    EXPECT_LE(std::abs(g_rate_closed(kFig5, 1.0, d, t) - g_rate_quadrature(kFig5, 1.0, d, t)), 1e-9) << t;
  }
}

TEST(Rates, GRegressionFixture) {
  // Nested-quadrature value at t = 50.
  const cplx fixture(0.0003216133295205119, -0.0029760801242734456);
  EXPECT_LT(std::abs(g_rate(kFig5, 1.0, kFig5Drive, 50.0) - fixture), 1e-12);
}

TEST(Rates, GLimits) {
  EXPECT_EQ(g_rate(kFig5, 1.0, kFig5Drive, 0.0), cplx(0.0));
  for (double t : {1.0, 30.0}) EXPECT_EQ(g_rate(kFig5, 1.0, DriveSpec::monochromatic(0.0, 1.0, 0.0), t), cplx(0.0));
  // Linear in the drive.
  const cplx a = g_rate(kFig5, 1.0, DriveSpec::monochromatic(0.01, 1.0, 0.3), 40.0);
  const cplx b = g_rate(kFig5, 1.0, DriveSpec::monochromatic(0.03, 1.0, 0.3), 40.0);
  EXPECT_LT(std::abs(b - 3.0 * a), 1e-17);
  // A general envelope goes through quadrature.
  const auto env = DriveSpec::general([](double t) { return kFig5Drive.f(t); });
  EXPECT_LT(std::abs(g_rate(kFig5, 1.0, env, 20.0) - g_rate(kFig5, 1.0, kFig5Drive, 20.0)), 1e-9);
}

TEST(Rates, AdditiveOverModes) {
  const PseudoModeBath one = PseudoModeBath::single(0.03, 0.8, 0.05);
  const PseudoModeBath two = PseudoModeBath::single(0.02, 1.3, 0.1);
  PseudoModeBath both{{one.modes[0], two.modes[0]}, 1.0, 2};
  both.modes[0].residue = cplx(0.0, 0.03 * 0.03);
  both.modes[1].residue = cplx(0.0, 0.02 * 0.02);
  for (double t : {0.5, 10.0}) {
    EXPECT_LT(std::abs(gamma_rate(both, 1.0, t) - gamma_rate(one, 1.0, t) - gamma_rate(two, 1.0, t)), 1e-16);
    EXPECT_LT(std::abs(g_rate(both, 1.0, kFig5Drive, t) - g_rate(one, 1.0, kFig5Drive, t) -
                       g_rate(two, 1.0, kFig5Drive, t)),
              1e-16);
  }
}

TEST(PseudoModes, DecoupledQubitPrecesses) {
  const auto bath = PseudoModeBath::single(0.0, 0.75, 0.02, 2);
  const auto grid = ode::uniform_grid(20.0, 0.5);
  const auto res = pm_lindblad_propagate(bath, 1.0, DriveSpec::monochromatic(0.0, 1.0, 0.0), BlochVector(1, 0, 0), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(res.reduced.r[k].norm(), 1.0, 1e-9);
    EXPECT_NEAR(res.reduced.r[k].x(), std::cos(grid[k]), 1e-8);
    EXPECT_NEAR(res.reduced.r[k].y(), std::sin(grid[k]), 1e-8);
  }
}

// Undriven, excited qubit, vacuum mode: the dynamics stays in the one-
// excitation sector with amplitudes evolving under
//   H_eff = [[Ω, η], [η, ξ − iΓ/2]].
TEST(PseudoModes, SingleExcitationAnalytic) {
  const double eta = 0.05, xi = 0.9, gam = 0.04, om = 1.0;
  const auto bath = PseudoModeBath::single(eta, xi, gam, 3);
  const auto grid = ode::uniform_grid(200.0, 1.0);
  const auto res = pm_lindblad_propagate(bath, om, DriveSpec::monochromatic(0.0, 1.0, 0.0), BlochVector(0, 0, 1), grid);
  Eigen::Matrix2cd h;
  h << om, eta, eta, cplx(xi, -0.5 * gam);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::Matrix2cd u = (cplx(0, -grid[k]) * h).exp();
    const double pe = std::norm(u(0, 0));
    EXPECT_NEAR(res.reduced.r[k].z(), 2.0 * pe - 1.0, 1e-8) << grid[k];
    EXPECT_NEAR(res.reduced.r[k].x(), 0.0, 1e-9);
  }
}

TEST(PseudoModes, Fig5StateStaysPhysical) {
  const auto grid = ode::uniform_grid(400.0, 0.5);
  const auto res = pm_lindblad_propagate(kFig5, 1.0, kFig5Drive, BlochVector(0, 0, -1), grid);
  EXPECT_LE(res.max_trace_drift, 1e-9);
  EXPECT_GE(res.min_eigenvalue, -1e-8);
  EXPECT_LE(res.max_hermiticity_error, 1e-10);
  for (const auto& r : res.reduced.r) EXPECT_LE(r.norm(), 1.0 + 1e-9);
}

TEST(PseudoModes, TruncationReportsAchievedDelta) {
  const auto grid = ode::uniform_grid(100.0, 0.5);
  auto coarse = kFig5;
  coarse.n_max = 1;
  try {
    pm_truncation_check(coarse, 1.0, kFig5Drive, BlochVector(0, 0, -1), grid, 1e-12);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.achieved(), 1e-12);
  }
  const auto ok = pm_truncation_check(kFig5, 1.0, kFig5Drive, BlochVector(0, 0, -1), grid);
  EXPECT_LT(ok.delta, 1e-6);
  EXPECT_EQ(ok.n_max, 4);
}

// g enters only row 3 of M and rows 1–2 of b.
TEST(QubitTcl, ThirdOrderRateStructure) {
  const cplx f(0.01, -0.02), gamma(3e-3, 1e-3);
  const auto a = qubit_tcl_bloch(1.0, f, gamma, 0.0);
  const auto b = qubit_tcl_bloch(1.0, f, gamma, cplx(0.7, -0.4));
  Mat3 dm = b.M - a.M;
  EXPECT_DOUBLE_EQ(dm(2, 0), -0.8);
  EXPECT_DOUBLE_EQ(dm(2, 1), 1.4);
  dm(2, 0) = dm(2, 1) = 0.0;
  EXPECT_EQ(dm.cwiseAbs().maxCoeff(), 0.0);
  const Vec3 db = b.b - a.b;
  EXPECT_DOUBLE_EQ(db(0), -0.8);
  EXPECT_DOUBLE_EQ(db(1), 1.4);
  EXPECT_EQ(db(2), 0.0);
}

TEST(QubitTcl, FreePrecession) {
  const auto bath = PseudoModeBath::single(0.0, 0.75, 0.02);
  const auto grid = ode::uniform_grid(30.0, 0.5);
  const auto traj = tcl3_bloch_propagate(bath, 1.0, DriveSpec::monochromatic(0.0, 1.0, 0.0), 3, BlochVector(1, 0, 0), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(traj.r[k].x(), std::cos(grid[k]), 1e-8);
    EXPECT_NEAR(traj.r[k].y(), std::sin(grid[k]), 1e-8);
  }
  EXPECT_THROW(tcl3_bloch_propagate(bath, 1.0, kFig5Drive, 4, BlochVector(1, 0, 0), grid), InvalidArgument);
}

// Weak coupling, short times: both orders follow the exact evolution.
TEST(QubitTcl, AgreesWithExactAtShortTimes) {
  const auto grid = ode::uniform_grid(20.0, 0.1);
  const auto exact = pm_lindblad_propagate(kFig5, 1.0, kFig5Drive, BlochVector(0, 0, -1), grid);
  const auto t3 = tcl3_bloch_propagate(kFig5, 1.0, kFig5Drive, 3, BlochVector(0, 0, -1), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_LT((t3.r[k] - exact.reduced.r[k]).norm(), 1e-2) << grid[k];
}

TEST(QubitTcl, GeneralEnvelopeMatchesMonochromatic) {
  const auto grid = ode::uniform_grid(30.0, 0.5);
  const auto env = DriveSpec::general([](double t) { return kFig5Drive.f(t); });
  const auto a = tcl3_bloch_propagate(kFig5, 1.0, kFig5Drive, 3, BlochVector(0, 0, -1), grid);
  const auto b = tcl3_bloch_propagate(kFig5, 1.0, env, 3, BlochVector(0, 0, -1), grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_LT((a.r[k] - b.r[k]).norm(), 1e-7);
}

TEST(Coherence, InteractionPictureRemovesPrecession) {
  BlochTrajectory traj;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.3 * k;
    traj.t.push_back(t);
    traj.r.emplace_back(std::cos(1.7 * t), std::sin(1.7 * t), 0.0);
  }
  for (const auto& c : interaction_picture_coherence(traj, 1.7)) EXPECT_LT(std::abs(c - 0.5), 1e-14);
  const auto raw = interaction_picture_coherence(traj, 0.0);
  EXPECT_LT(std::abs(raw[3] - 0.5 * cplx(traj.r[3].x(), -traj.r[3].y())), 1e-16);
}
