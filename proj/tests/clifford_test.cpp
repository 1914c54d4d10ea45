#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "spinlie/clifford.hpp"

using namespace spinlie;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

template <typename Derived>
double maxAbs(const Eigen::MatrixBase<Derived>& M) {
  return M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
}

std::vector<Signature> signaturesUpTo(int maxDim) {
  std::vector<Signature> out;
  for (int m = 1; m <= maxDim; ++m)
    for (int q = 0; q <= m; ++q) out.push_back({m - q, q});
  return out;
}

MatrixXd randomLoweredAntisym(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  MatrixXd A = MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      A(i, j) = normal(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

}  // namespace

TEST(GammaMatrices, EuclideanPlane) {
  const GammaRep rep = gammaMatrices({2, 0});
  ASSERT_EQ(rep.N, 2);
  ASSERT_EQ(rep.gammas.size(), 2u);
  const MatrixXcd I = MatrixXcd::Identity(2, 2);
  EXPECT_EQ(maxAbs(rep.gammas[0] * rep.gammas[0] - I), 0.0);
  EXPECT_EQ(maxAbs(rep.gammas[1] * rep.gammas[1] - I), 0.0);
  EXPECT_EQ(maxAbs(rep.gammas[0] * rep.gammas[1] + rep.gammas[1] * rep.gammas[0]), 0.0);
}

TEST(GammaMatrices, SquaresAreEtaExactly) {
  for (const Signature& sig : signaturesUpTo(5)) {
    const GammaRep rep = gammaMatrices(sig);
    EXPECT_EQ(rep.N, 1 << (sig.dim() / 2));
    for (int a = 0; a < sig.dim(); ++a)
      EXPECT_EQ(maxAbs(rep.gammas[a] * rep.gammas[a] - sig.eta(a) * MatrixXcd::Identity(rep.N, rep.N)),
                0.0)
          << toString(sig) << " a=" << a;
  }
}

TEST(GammaMatrices, MinkowskiAllSixteenPairs) {
  const GammaRep rep = gammaMatrices({1, 3});
  ASSERT_EQ(rep.N, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const MatrixXcd anti = rep.gammas[a] * rep.gammas[b] + rep.gammas[b] * rep.gammas[a];
      const double expected = a == b ? 2.0 * (a == 0 ? 1.0 : -1.0) : 0.0;
      EXPECT_LE(maxAbs(anti - expected * MatrixXcd::Identity(4, 4)), 1e-12) << a << b;
    }
}

// Independent oracle for the relation: every pair, every signature up to m = 5.
TEST(GammaMatrices, CliffordRelationUpToDimensionFive) {
  for (const Signature& sig : signaturesUpTo(5)) {
    const GammaRep rep = gammaMatrices(sig);
    for (int a = 0; a < sig.dim(); ++a)
      for (int b = 0; b < sig.dim(); ++b) {
        const MatrixXcd anti = rep.gammas[a] * rep.gammas[b] + rep.gammas[b] * rep.gammas[a];
        const double eta = a == b ? (a < sig.p ? 1.0 : -1.0) : 0.0;
        EXPECT_LE(maxAbs(anti - 2.0 * eta * MatrixXcd::Identity(rep.N, rep.N)), 1e-12);
      }
    EXPECT_LE(cliffordResidual(rep), 1e-12);
  }
}

TEST(SpinAlgebraMap, ZeroMapsToZero) {
  const GammaRep rep = gammaMatrices({2, 1});
  EXPECT_EQ(maxAbs(spinAlgebraMap(rep, MatrixXd::Zero(3, 3))), 0.0);
}

TEST(SpinAlgebraMap, PlaneRotationByHand) {
  const GammaRep rep = gammaMatrices({2, 0});
  MatrixXd A(2, 2);
  A << 0, -1, 1, 0;
  // 1/4 (A_01 g0 g1 + A_10 g1 g0) = 1/4 (-g0 g1 - g1 g0 ... ) = -1/2 g0 g1
  const MatrixXcd expected = -0.5 * rep.gammas[0] * rep.gammas[1];
  EXPECT_LE(maxAbs(spinAlgebraMap(rep, A) - expected), 1e-15);
}

TEST(SpinAlgebraMap, RejectsSymmetricInput) {
  const GammaRep rep = gammaMatrices({2, 0});
  EXPECT_THROW(spinAlgebraMap(rep, MatrixXd::Identity(2, 2)), InputError);
  EXPECT_THROW(spinAlgebraMap(rep, MatrixXd::Zero(3, 3)), InputError);
}

TEST(SpinAlgebraMap, MixedIndexInputIsLowered) {
  const Signature sig{1, 2};
  const GammaRep rep = gammaMatrices(sig);
  std::mt19937_64 rng(1);
  const MatrixXd A = randomLoweredAntisym(3, rng);
  EXPECT_LE(maxAbs(spinAlgebraMapMixed(rep, raiseFirst(A, sig)) - spinAlgebraMap(rep, A)), 1e-15);
}

// [sigma(A), sigma(B)] = sigma([A, B]) with the bracket of the mixed-index
// (so(p,q)) matrices, lowered again before mapping.
TEST(SpinAlgebraMap, CommutatorHomomorphism) {
  std::mt19937_64 rng(17);
  for (const Signature& sig : signaturesUpTo(5)) {
    const GammaRep rep = gammaMatrices(sig);
    for (int i = 0; i < 200; ++i) {
      const MatrixXd A = randomLoweredAntisym(sig.dim(), rng), B = randomLoweredAntisym(sig.dim(), rng);
      const MatrixXd Am = raiseFirst(A, sig), Bm = raiseFirst(B, sig);
      const MatrixXd C = lowerFirst(MatrixXd(Am * Bm - Bm * Am), sig);
      const MatrixXcd sA = spinAlgebraMap(rep, A), sB = spinAlgebraMap(rep, B);
      ASSERT_LE(maxAbs(sA * sB - sB * sA - spinAlgebraMap(rep, C)), 1e-10) << toString(sig);
    }
  }
}

TEST(SpinAlgebraMap, Linearity) {
  std::mt19937_64 rng(4);
  const GammaRep rep = gammaMatrices({3, 1});
  for (int i = 0; i < 50; ++i) {
    const MatrixXd A = randomLoweredAntisym(4, rng), B = randomLoweredAntisym(4, rng);
    const double alpha = 0.3 * i - 2.0, beta = 1.7;
    EXPECT_LE(maxAbs(spinAlgebraMap(rep, alpha * A + beta * B) - alpha * spinAlgebraMap(rep, A) -
                     beta * spinAlgebraMap(rep, B)),
              1e-13);
  }
}

TEST(ApplyClifford, Basics) {
  const GammaRep rep = gammaMatrices({2, 0});
  const SpinorValue psi = (SpinorValue(2) << std::complex<double>(1, 2), std::complex<double>(-0.5, 0)).finished();
  EXPECT_EQ(applyClifford(rep, MatrixXcd::Identity(2, 2), psi), psi);
  EXPECT_EQ(applyClifford(rep, MatrixXcd::Zero(2, 2), psi), SpinorValue::Zero(2));
  EXPECT_LE((applyClifford(rep, rep.gammas[0] * rep.gammas[0], psi) - psi).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(applyClifford(rep, MatrixXcd::Identity(3, 3), psi), InputError);
  EXPECT_THROW(applyClifford(rep, MatrixXcd::Identity(2, 2), SpinorValue::Zero(3)), InputError);
}
