#include <random>

#include <gtest/gtest.h>

#include "tclq/core.hpp"

using namespace tclq;

namespace {

Mat2c random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n;
  Mat2c a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = cplx(n(rng), n(rng));
  return scale * 0.5 * (a + a.adjoint());
}

DensityMatrix random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec3 r(n(rng), n(rng), n(rng));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  r *= std::cbrt(u(rng)) / r.norm();
  return bloch_decode(r);
}

}  // namespace

TEST(Vectorize, IdentityAndProjector) {
  const Vec4c v = vectorize(DensityMatrix::maximally_mixed());
  EXPECT_EQ(v, Vec4c(0.5, 0, 0, 0.5));
  const Vec4c p = vectorize(DensityMatrix::pure(Eigen::Vector2cd(1, 0)));
  EXPECT_EQ(p, Vec4c(1, 0, 0, 0));
}

TEST(Vectorize, ColumnStackingOrder) {
  Mat2c m;
  m << 1.0, 2.0, 3.0, 4.0;
  EXPECT_EQ(vectorize(m), Vec4c(1.0, 3.0, 2.0, 4.0));
}

TEST(Vectorize, RoundTripRandomStates) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto rho = random_state(rng);
    EXPECT_EQ(devectorize(vectorize(rho)), rho.matrix());
  }
}

TEST(Vectorize, RejectsWrongLength) {
  EXPECT_THROW(devectorize(VecXc::Zero(3)), InvalidArgument);
  EXPECT_THROW(devectorize(VecXc::Zero(5)), InvalidArgument);
}

TEST(Commutator, PauliAlgebra) {
  const Mat2c out = tclq::apply(commutator_superop(pauli::z()), Mat2c(0.5 * pauli::x()));
  EXPECT_LT((out - I * pauli::y()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Commutator, IdentityGivesZero) {
  EXPECT_EQ(commutator_superop(Mat2c::Identity()), Tetradic::Zero());
}

TEST(Commutator, BruteForceOverMatrixUnits) {
  const Mat2c h = pauli::x();
  const Tetradic s = commutator_superop(h);
  for (int k = 0; k < 4; ++k) {
    Mat2c e = Mat2c::Zero();
    e(k % 2, k / 2) = 1.0;
    const Vec4c col = vectorize(Mat2c(h * e - e * h));
    EXPECT_LT((s.col(k) - col).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Commutator, RandomHermitianMatchesDefinition) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const Mat2c h = random_hermitian(rng, 3.0);
    const Mat2c rho = random_state(rng).matrix();
    const Vec4c lhs = commutator_superop(h) * vectorize(rho);
    const Vec4c rhs = vectorize(Mat2c(h * rho - rho * h));
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((commutator_superop(h) * vectorize(Mat2c::Identity())).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Commutator, RejectsNonHermitian) {
  Mat2c a;
  a << 0, 1, 0, 0;
  EXPECT_THROW(commutator_superop(a), InvalidArgument);
}

TEST(ExpAction, RotationAboutZ) {
  for (double th : {0.0, 0.3, 1.7, -2.5, 10.0}) {
    const Eigen::VectorXd v = exp_action(so3::Lz(), th, Vec3(1, 0, 0));
    EXPECT_NEAR(v(0), std::cos(th), 1e-15);
    EXPECT_NEAR(v(1), std::sin(th), 1e-15);
    EXPECT_NEAR(v(2), 0.0, 1e-15);
  }
}

TEST(ExpAction, ZeroTimeIsIdentity) {
  Mat3 a = Mat3::Random();
  const Vec3 x(0.3, -1.2, 2.0);
  EXPECT_EQ(Vec3(exp_action(a, 0.0, x)), x);
}

TEST(ExpAction, NilpotentMatchesTaylor) {
  Mat3 n = Mat3::Zero();
  n(0, 1) = 2.0;
  n(1, 2) = -3.0;
  ASSERT_NE((n * n).norm(), 0.0);
  const double t = 0.7;
  const Mat3 exact = Mat3::Identity() + t * n + 0.5 * t * t * n * n;
  const Vec3 x(1.0, 2.0, 3.0);
  EXPECT_LT((Vec3(exp_action(n, t, x)) - exact * x).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ExpAction, NormalMatrixAgainstEigendecomposition) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Mat2c h = random_hermitian(rng, 2.0);
    Eigen::SelfAdjointEigenSolver<Mat2c> es(h);
    const Mat2c exact = es.eigenvectors() * (-I * es.eigenvalues().cast<cplx>()).array().exp().matrix().asDiagonal() *
                        es.eigenvectors().adjoint();
    const auto e = expm(Mat2c(-I * h));
    EXPECT_LT((e - exact).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, exact.norm()));
  }
}

TEST(ExpAction, RejectsNonFinite) {
  Mat3 a = Mat3::Zero();
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(a), InvalidArgument);
  EXPECT_THROW(exp_action(Mat3::Zero(), 1.0, Eigen::Vector2d(1, 0)), InvalidArgument);
}

TEST(ExpAction, UnitaryConjugationPreservesTraceAndHermiticity) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Mat2c h = random_hermitian(rng);
    const Mat2c rho = random_state(rng).matrix();
    const Tetradic gen = -I * commutator_superop(h);
    for (double t : {0.0, 1.0, 17.3, 55.0, 100.0}) {
      const Mat2c out = devectorize(exp_action(gen, t, vectorize(rho)));
      EXPECT_NEAR(std::abs(out.trace() - 1.0), 0.0, 1e-11);
      EXPECT_LT(hermiticity_error(out), 1e-11);
    }
  }
}

TEST(SO3, CommutationAndSquares) {
  using namespace so3;
  EXPECT_EQ(Mat3(Lx() * Ly() - Ly() * Lx()), Lz());
  EXPECT_EQ(Mat3(Ly() * Lz() - Lz() * Ly()), Lx());
  EXPECT_EQ(Mat3(Lz() * Lx() - Lx() * Lz()), Ly());
  EXPECT_EQ(Mat3(Lz() * Lz()), Vec3(-1, -1, 0).asDiagonal().toDenseMatrix());
  for (const Mat3& l : {Lx(), Ly(), Lz()}) EXPECT_EQ(Mat3(l + l.transpose()), Mat3::Zero());
  const Mat3 r = expm(Lz(), 0.8) * expm(Lz(), -0.8);
  EXPECT_LT((r - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SO3, HamiltonianFieldGivesCrossProduct) {
  // H = ½ h·σ drives ṙ = h × r; compare the tetradic generator in Bloch form.
  const Vec3 h(0.3, -1.1, 0.7);
  const BlochAffine a = to_bloch(Tetradic(-I * commutator_superop(pauli::from_field(h))));
  EXPECT_LT((a.M - so3::hat(h)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(a.b.norm(), 1e-15);
}

TEST(Bloch, KnownStates) {
  EXPECT_LT((bloch_encode(DensityMatrix::pure(Eigen::Vector2cd(1, 0))) - Vec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_LT(bloch_encode(DensityMatrix::maximally_mixed()).norm(), 1e-15);
  const double s = std::sqrt(0.5);
  EXPECT_LT((bloch_encode(DensityMatrix::pure(Eigen::Vector2cd(s, s))) - Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST(Bloch, RoundTripAndOutsideFlag) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int k = 0; k < 1000; ++k) {
    Vec3 r(n(rng), n(rng), n(rng));
    r /= (1.0 + r.norm());
    bool outside = true;
    const auto rho = bloch_decode(r, &outside);
    EXPECT_FALSE(outside);
    EXPECT_LT((bloch_encode(rho) - r).cwiseAbs().maxCoeff(), 1e-14);
  }
  bool outside = false;
  bloch_decode(Vec3(0.9, 0.9, 0.0), &outside);
  EXPECT_TRUE(outside);
}

TEST(DensityMatrixType, Validation) {
  Mat2c bad;
  bad << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityMatrix{bad}, InvalidArgument);
  Mat2c bad_trace = Mat2c::Identity();
  EXPECT_THROW(DensityMatrix{bad_trace}, InvalidArgument);
}

TEST(Superop, BlochTetradicRoundTrip) {
  BlochAffine a;
  a.M = Mat3::Random();
  a.b = Vec3::Random();
  const BlochAffine back = to_bloch(to_tetradic(a));
  EXPECT_LT((back.M - a.M).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((back.b - a.b).cwiseAbs().maxCoeff(), 1e-14);
}
