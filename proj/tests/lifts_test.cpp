#include <gtest/gtest.h>

#include <random>

#include "spinlie/fixtures.hpp"
#include "spinlie/liederiv.hpp"
#include "spinlie/lifts.hpp"

using namespace spinlie;
using Eigen::MatrixXd;

namespace {

template <typename Derived>
double maxAbs(const Eigen::MatrixBase<Derived>& M) {
  return M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
}

Point pt(double a, double b) { return Eigen::Vector2d(a, b); }

/// e' = e O for a constant O in SO(p,q).
FrameAt rotateFrame(const FrameAt& f, const MatrixXd& O) {
  FrameAt out{f.e * O, O.inverse() * f.eInv, {}};
  for (const auto& d : f.de) out.de.push_back(d * O);
  return out;
}

}  // namespace

TEST(NaturalLift, FlatIsJacobian) {
  const GeometrySpec spec = flatGeometry({1, 2});
  const VectorFieldSpec xi = makeVectorField(spec, "xi", {"x0*x1", "sin(x2)", "x0 - x1^2"});
  const Point x = Eigen::Vector3d(0.3, -0.4, 0.8);
  EXPECT_LE(maxAbs(naturalLiftCoeffs(spec, xi, x) - evalVectorField(xi, x).jacobian), 0.0);
}

TEST(NaturalLift, PlaneRotation) {
  const GeometrySpec spec = flatGeometry({2, 0});
  MatrixXd expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_EQ(naturalLiftCoeffs(spec, makeVectorField(spec, "rot", {"-x1", "x0"}), pt(0.2, 0.9)),
            expected);
}

TEST(NaturalLift, ZeroField) {
  for (const Fixture& f : builtinFixtures()) {
    const VectorFieldSpec zero = makeVectorField(f.spec, "0", std::vector<std::string>(f.spec.dim(), "0"));
    std::mt19937_64 rng(1);
    EXPECT_EQ(maxAbs(naturalLiftCoeffs(f.spec, zero, randomPoint(f.spec, rng))), 0.0) << f.name;
  }
}

// Oracle: the lift coefficients are the components of d/dt (phi_t)^* e_b at
// t = 0 in the frame, i.e. [xi, e_b] = (d xi) e_b - (d e_b) xi expanded in e_a.
TEST(NaturalLift, MatchesBracketWithFrameByFiniteDifferences) {
  const GeometrySpec spec = makeGeometry({2, 0}, {"x0", "x1"}, {"1 + x0^2", "x0*x1", "1 + x1^2"});
  const VectorFieldSpec xi = makeVectorField(spec, "xi", {"x1^2", "sin(x0)"});
  const Point x = pt(0.3, -0.2);
  const FrameAt f = orthonormalFrame(spec, x);
  const double h = 1e-5;
  MatrixXd bracket(2, 2);  // column b: [xi, e_b]
  const VectorJet jet = evalVectorField(xi, x);
  for (int b = 0; b < 2; ++b) {
    Eigen::VectorXd xiDe = Eigen::VectorXd::Zero(2);  // xi^nu d_nu e_b by central differences
    for (int nu = 0; nu < 2; ++nu) {
      Point p = x, q = x;
      p[nu] += h;
      q[nu] -= h;
      xiDe += jet.value[nu] * (orthonormalFrame(spec, p).e.col(b) - orthonormalFrame(spec, q).e.col(b)) / (2 * h);
    }
    bracket.col(b) = jet.jacobian * f.e.col(b) - xiDe;
  }
  EXPECT_LE(maxAbs(naturalLiftCoeffs(f, jet) - f.e.inverse() * bracket), 1e-8);
}

TEST(KosmannSplit, AntisymmetricLiftHasNoVonGoeden) {
  MatrixXd L(3, 3);
  L << 0, 1, -2, -1, 0, 0.5, 2, -0.5, 0;
  const KosmannSplit s = kosmannSplit(L, {3, 0});
  EXPECT_EQ(maxAbs(s.vonGoeden), 0.0);
  EXPECT_EQ(s.kosmann, L);
}

TEST(KosmannSplit, LorentzLoweredAntisymmetric) {
  const Signature sig{1, 1};
  MatrixXd lowered(2, 2);
  lowered << 0, 3, -3, 0;
  const KosmannSplit s = kosmannSplit(raiseFirst(lowered, sig), sig);
  EXPECT_EQ(maxAbs(s.vonGoeden), 0.0);
  EXPECT_EQ(s.kosmann, lowered);
}

TEST(KosmannSplit, PlaneRotation) {
  const GeometrySpec spec = flatGeometry({2, 0});
  const KosmannSplit s =
      kosmannSplit(naturalLiftCoeffs(spec, makeVectorField(spec, "rot", {"-x1", "x0"}), pt(0.1, 0.1)), spec.sig);
  MatrixXd expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_EQ(s.kosmann, expected);
  EXPECT_EQ(maxAbs(s.vonGoeden), 0.0);
}

TEST(KosmannSplit, Dilation) {
  const GeometrySpec spec = flatGeometry({2, 0});
  const KosmannSplit s =
      kosmannSplit(naturalLiftCoeffs(spec, makeVectorField(spec, "dil", {"x0", "0"}), pt(0.4, -0.7)), spec.sig);
  EXPECT_EQ(maxAbs(s.kosmann), 0.0);
  EXPECT_LE(maxAbs(s.vonGoeden - Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()), 1e-16);
}

TEST(KosmannSplit, ReconstructsLoweredCoefficients) {
  std::mt19937_64 rng(3);
  for (const Fixture& f : builtinFixtures())
    for (int i = 0; i < 5; ++i) {
      const Point x = randomPoint(f.spec, rng);
      const MatrixXd L = naturalLiftCoeffs(f.spec, randomVectorField(f.spec, rng), x);
      const KosmannSplit s = kosmannSplit(L, f.spec.sig);
      EXPECT_LE(maxAbs(s.kosmann + s.vonGoeden - lowerFirst(L, f.spec.sig)), 1e-12 * std::max(1.0, maxAbs(L)));
      EXPECT_EQ(s.kosmann, MatrixXd(-s.kosmann.transpose()));
      EXPECT_EQ(s.vonGoeden, MatrixXd(s.vonGoeden.transpose()));
    }
}

TEST(KosmannComponents, FrameComponentsOfXi) {
  const GeometrySpec spec = makeGeometry({2, 0}, {"x0", "x1"}, {"1", "0", "x0^2"});
  const VectorJet jet = evalVectorField(makeVectorField(spec, "xi", {"1", "1"}), pt(2.0, 0.0));
  const InvariantFieldComponents c = kosmannComponents(orthonormalFrame(spec, pt(2.0, 0.0)), spec.sig, jet);
  EXPECT_LE((c.xiFrame - Eigen::Vector2d(1.0, 2.0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(c.vertical, MatrixXd(-c.vertical.transpose()));
}

TEST(KosmannCoordinateMatrix, FlatKillingIsJacobian) {
  for (Signature sig : {Signature{2, 0}, Signature{1, 1}, Signature{1, 3}}) {
    const GeometrySpec spec = flatGeometry(sig);
    std::mt19937_64 rng(2);
    for (const auto& k : flatKillingFields(spec)) {
      const Point x = randomPoint(spec, rng);
      EXPECT_LE(maxAbs(kosmannCoordinateMatrix(spec, k, x) - evalVectorField(k, x).jacobian), 1e-15)
          << k.name;
    }
  }
}

TEST(KosmannCoordinateMatrix, ZeroField) {
  const GeometrySpec spec = makeGeometry({2, 0}, {"x0", "x1"}, {"1", "0", "x0^2"});
  EXPECT_EQ(maxAbs(kosmannCoordinateMatrix(spec, makeVectorField(spec, "0", {"0", "0"}), pt(1.5, 0.0))), 0.0);
}

// g_{rho mu} K^rho_nu + g_{rho nu} K^rho_mu = -xi^rho d_rho g_{mu nu}
TEST(KosmannCoordinateMatrix, CancelsTransportOfTheMetric) {
  std::mt19937_64 rng(21);
  for (const Fixture& f : builtinFixtures())
    for (int i = 0; i < 10; ++i) {
      const Point x = randomPoint(f.spec, rng);
      const VectorFieldSpec xi = randomVectorField(f.spec, rng);
      const VectorJet jet = evalVectorField(xi, x);
      const MetricAt g = metricAt(f.spec, x);
      const MatrixXd K = kosmannCoordinateMatrix(f.spec, xi, x);
      MatrixXd transport = MatrixXd::Zero(f.spec.dim(), f.spec.dim());
      for (int rho = 0; rho < f.spec.dim(); ++rho) transport += jet.value[rho] * g.dg[rho];
      const MatrixXd gK = K.transpose() * g.g;
      EXPECT_LE(maxAbs(gK + gK.transpose() + transport),
                1e-9 * std::max(1.0, maxAbs(transport)))
          << f.name;
    }
}

TEST(KosmannCoordinateMatrix, InvariantUnderConstantFrameRotation) {
  std::mt19937_64 rng(8);
  std::uint64_t seed = 100;
  for (const Fixture& f : builtinFixtures())
    for (int i = 0; i < 5; ++i) {
      const Point x = randomPoint(f.spec, rng);
      const VectorJet jet = evalVectorField(randomVectorField(f.spec, rng), x);
      const FrameAt frame = orthonormalFrame(f.spec, x);
      const MatrixXd O = randomSOElement(f.spec.sig, seed++, 0.5);
      const MatrixXd K = kosmannCoordinateMatrix(frame, f.spec.sig, jet);
      EXPECT_LE(maxAbs(kosmannCoordinateMatrix(rotateFrame(frame, O), f.spec.sig, jet) - K),
                1e-9 * std::max(1.0, maxAbs(K)))
          << f.name;
    }
}

// Killing at a point iff the von Goeden part vanishes there.
TEST(VonGoeden, CharacterizesKillingFields) {
  std::mt19937_64 rng(12);
  for (const Fixture& f : builtinFixtures()) {
    for (int i = 0; i < 5; ++i) {
      const Point x = randomPoint(f.spec, rng);
      const FrameAt frame = orthonormalFrame(f.spec, x);
      for (const auto& k : f.killing) {
        EXPECT_LE(killingResidual(f.spec, k, x), 1e-10) << f.name << " " << k.name;
        EXPECT_LE(maxAbs(kosmannSplit(naturalLiftCoeffs(frame, evalVectorField(k, x)), f.spec.sig).vonGoeden), 1e-9);
      }
      const VectorFieldSpec xi = randomVectorField(f.spec, rng);
      const double vg = maxAbs(kosmannSplit(naturalLiftCoeffs(frame, evalVectorField(xi, x)), f.spec.sig).vonGoeden);
      EXPECT_GT(killingResidual(f.spec, xi, x), 1e-6);
      EXPECT_GT(vg, 1e-6) << f.name;
    }
  }
}

// von Goeden = 1/2 e^T (L_xi g) e: the symmetric part is the metric Lie derivative in the frame.
TEST(VonGoeden, IsHalfTheMetricLieDerivative) {
  std::mt19937_64 rng(31);
  for (const Fixture& f : builtinFixtures()) {
    const Point x = randomPoint(f.spec, rng);
    const VectorFieldSpec xi = randomVectorField(f.spec, rng);
    const FrameAt frame = orthonormalFrame(f.spec, x);
    const MatrixXd D = covariantDerivativeCovector(f.spec, xi, x);
    const MatrixXd expected = 0.5 * frame.e.transpose() * (D + D.transpose()) * frame.e;
    const MatrixXd vg = kosmannSplit(naturalLiftCoeffs(frame, evalVectorField(xi, x)), f.spec.sig).vonGoeden;
    EXPECT_LE(maxAbs(vg - expected), 1e-9 * std::max(1.0, maxAbs(expected))) << f.name;
  }
}
