#include "spinlie/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "spinlie/clifford.hpp"
#include "spinlie/jets.hpp"
#include "spinlie/liederiv.hpp"
#include "spinlie/lifts.hpp"

namespace spinlie {

namespace {

/// Accumulates the worst residual of one property.
class Suite {
 public:
  Suite(std::string module, std::string name, double threshold)
      : result_{std::move(module), std::move(name), 0, 0.0, threshold, true} {}

  void add(double residual) {
    ++result_.samples;
    if (!(residual <= result_.maxResidual)) result_.maxResidual = residual;  // NaN sticks
  }

  /// Runs `body` (which calls add) and records a precondition failure as an
  /// infinite residual.
  template <typename F>
  void sample(F&& body) {
    try {
      body();
    } catch (const PreconditionError&) {
      add(std::numeric_limits<double>::infinity());
    }
  }

  SuiteResult finish() {
    result_.pass = result_.samples == 0 || result_.maxResidual <= result_.threshold;
    return result_;
  }

 private:
  SuiteResult result_;
};

double relative(double diff, double reference) { return diff / std::max(1.0, reference); }

double maxAbs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }
double maxAbs(const Eigen::MatrixXcd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

double spinorGap(const SpinorValue& a, const SpinorValue& b) {
  return relative(maxAbs(Eigen::MatrixXcd(a - b)), maxAbs(Eigen::MatrixXcd(b)));
}

std::vector<Signature> signaturesUpTo(int maxDim) {
  std::vector<Signature> out;
  for (int m = 1; m <= maxDim; ++m)
    for (int q = 0; q <= m; ++q) out.push_back({m - q, q});
  return out;
}

Eigen::MatrixXd randomMatrix(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd M(m, m);
  for (auto& v : M.reshaped()) v = normal(rng);
  return M;
}

Eigen::MatrixXd randomLoweredAntisym(int m, std::mt19937_64& rng) {
  const Eigen::MatrixXd M = randomMatrix(m, rng);
  return M - M.transpose();
}

/// psi1 + c psi2 and f psi, built at the expression level.
SpinorFieldSpec combine(const SpinorFieldSpec& a, double c, const SpinorFieldSpec& b) {
  SpinorFieldSpec out{"combined", {}, {}};
  const auto names = a.re.front().sharedNames();
  const Expression k = Expression::constant(c, names);
  for (std::size_t i = 0; i < a.re.size(); ++i) {
    out.re.push_back(Expression::binary(Expression::Op::Add, a.re[i],
                                        Expression::binary(Expression::Op::Mul, k, b.re[i])));
    out.im.push_back(Expression::binary(Expression::Op::Add, a.im[i],
                                        Expression::binary(Expression::Op::Mul, k, b.im[i])));
  }
  return out;
}

SpinorFieldSpec scale(const Expression& f, const SpinorFieldSpec& a) {
  SpinorFieldSpec out{"scaled", {}, {}};
  for (std::size_t i = 0; i < a.re.size(); ++i) {
    out.re.push_back(Expression::binary(Expression::Op::Mul, f, a.re[i]));
    out.im.push_back(Expression::binary(Expression::Op::Mul, f, a.im[i]));
  }
  return out;
}

/// Central-difference frame derivative for comparison with the dual-number one.
double frameDerivativeGap(const GeometrySpec& spec, const Point& pt, const FrameAt& frame) {
  const double h = 1e-5;
  double worst = 0.0;
  for (int nu = 0; nu < spec.dim(); ++nu) {
    Point plus = pt, minus = pt;
    plus[nu] += h;
    minus[nu] -= h;
    const Eigen::MatrixXd fd =
        (orthonormalFrame(spec, plus).e - orthonormalFrame(spec, minus).e) / (2.0 * h);
    worst = std::max(worst, relative(maxAbs(Eigen::MatrixXd(fd - frame.de[nu])), maxAbs(fd)));
  }
  return worst;
}

/// d_rho g_{mu nu} - Gamma^l_{rho mu} g_{l nu} - Gamma^l_{rho nu} g_{mu l}
double metricCompatibility(const MetricAt& metric, const ChristoffelAt& chr) {
  const auto m = metric.g.rows();
  double worst = 0.0;
  for (Eigen::Index rho = 0; rho < m; ++rho)
    for (Eigen::Index mu = 0; mu < m; ++mu)
      for (Eigen::Index nu = 0; nu < m; ++nu) {
        double v = metric.dg[rho](mu, nu);
        for (Eigen::Index l = 0; l < m; ++l)
          v -= chr.gamma[l](rho, mu) * metric.g(l, nu) + chr.gamma[l](rho, nu) * metric.g(mu, l);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

void liealgSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite recon("liealg", "reconstruction", 1e-12), member("liealg", "membership", 1e-12),
      adInv("liealg", "ad-invariance", 1e-9), ortho("liealg", "trace-orthogonality", 1e-12);
  std::mt19937_64 rng(opt.seed);
  for (const Signature& sig : signaturesUpTo(4)) {
    const int m = sig.dim();
    for (int s = 0; s < opt.samples; ++s) {
      const Eigen::MatrixXd M = randomMatrix(m, rng);
      const auto split = decomposeGL(M, sig);
      recon.add(maxAbs(Eigen::MatrixXd(split.reconstruct() - M)));
      member.add(std::max({maxAbs(Eigen::MatrixXd(etaAdjoint(split.antisym, sig) + split.antisym)),
                           maxAbs(Eigen::MatrixXd(etaAdjoint(split.symTraceless, sig) -
                                                  split.symTraceless)),
                           std::abs(split.symTraceless.trace())}));
      ortho.add(std::max(std::abs((split.antisym * split.symTraceless).trace()),
                         std::abs(split.antisym.trace())));

      const Eigen::MatrixXd O = randomSOElement(sig, rng(), 0.5);
      const Eigen::MatrixXd Oinv = O.inverse();
      const auto moved = decomposeGL(Eigen::MatrixXd(O * M * Oinv), sig);
      const double scaleRef = maxAbs(M) * maxAbs(O) * maxAbs(Oinv);
      adInv.add(relative(
          std::max({maxAbs(Eigen::MatrixXd(moved.antisym - O * split.antisym * Oinv)),
                    maxAbs(Eigen::MatrixXd(moved.symTraceless - O * split.symTraceless * Oinv)),
                    std::abs(moved.traceCoeff - split.traceCoeff)}),
          scaleRef));
    }
  }
  for (Suite* s : {&recon, &member, &adInv, &ortho}) out.push_back(s->finish());
}

void exprSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite ad("expr", "dual-vs-finite-difference", 1e-5), trip("expr", "print-parse-round-trip", 0.0);
  std::mt19937_64 rng(opt.seed + 1);
  const auto names = std::make_shared<const std::vector<std::string>>(
      std::vector<std::string>{"x0", "x1", "x2"});
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int s = 0; s < 5 * opt.samples; ++s) {
    const Expression e = randomExpression(names, rng, 6);
    const Point x = Point::NullaryExpr(3, [&] { return coord(rng); });
    const DualValue d = evalDual(e, x);
    const Eigen::VectorXd fd = fdGradient(e, x, 1e-5);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < fd.size(); ++i)
      worst = std::max(worst, std::abs(d.grad[i] - fd[i]) / (1.0 + std::abs(d.grad[i])));
    ad.add(worst);
    trip.add(structurallyEqual(parse(e.toString(), names), e) ? 0.0 : 1.0);
  }
  out.push_back(ad.finish());
  out.push_back(trip.finish());
}

void geometrySuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite ortho("geometry", "frame-orthonormality", 1e-9),
      compat("geometry", "metric-compatibility", 1e-9),
      deriv("geometry", "frame-derivative-vs-finite-difference", 1e-5),
      anti("geometry", "spin-connection-antisymmetry", 1e-9);
  std::mt19937_64 rng(opt.seed + 2);
  for (const Fixture& f : opt.fixtures) {
    const Eigen::MatrixXd eta = etaMatrix(f.spec.sig);
    for (int s = 0; s < opt.samples; ++s) {
      const Point x = randomPoint(f.spec, rng);
      ortho.sample([&] {
        const LocalGeometry local = localGeometry(f.spec, x);
        ortho.add(maxAbs(Eigen::MatrixXd(local.frame.e.transpose() * local.metric.g * local.frame.e - eta)));
        compat.add(relative(metricCompatibility(local.metric, local.christoffel),
                            maxAbs(local.metric.g)));
        deriv.add(frameDerivativeGap(f.spec, x, local.frame));
        double worst = 0.0;
        for (const auto& w : local.spin.lowered)
          worst = std::max(worst, maxAbs(Eigen::MatrixXd(w + w.transpose())));
        anti.add(worst);
      });
    }
  }
  for (Suite* s : {&ortho, &compat, &deriv, &anti}) out.push_back(s->finish());
}

void cliffordSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite rel("clifford", "anticommutation", 1e-12), hom("clifford", "commutator-homomorphism", 1e-10),
      lin("clifford", "linearity", 1e-12);
  std::mt19937_64 rng(opt.seed + 3);
  for (const Signature& sig : signaturesUpTo(5)) {
    const GammaRep rep = gammaMatrices(sig);
    rel.add(cliffordResidual(rep));
    for (int s = 0; s < opt.samples; ++s) {
      const Eigen::MatrixXd A = randomLoweredAntisym(sig.dim(), rng);
      const Eigen::MatrixXd B = randomLoweredAntisym(sig.dim(), rng);
      const Eigen::MatrixXd Am = raiseFirst(A, sig), Bm = raiseFirst(B, sig);
      const Eigen::MatrixXd C = lowerFirst(Eigen::MatrixXd(Am * Bm - Bm * Am), sig);
      const Eigen::MatrixXcd sA = spinAlgebraMap(rep, A), sB = spinAlgebraMap(rep, B);
      hom.add(relative(maxAbs(Eigen::MatrixXcd(sA * sB - sB * sA - spinAlgebraMap(rep, C))),
                       maxAbs(C)));
      lin.add(relative(maxAbs(Eigen::MatrixXcd(spinAlgebraMap(rep, A + 2.5 * B) - sA - 2.5 * sB)),
                       maxAbs(sA) + maxAbs(sB)));
    }
  }
  for (Suite* s : {&rel, &hom, &lin}) out.push_back(s->finish());
}

void liftSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite recon("lifts", "split-reconstruction", 1e-12),
      goeden("lifts", "von-goeden-is-half-metric-lie-derivative", 1e-9),
      killing("lifts", "killing-iff-von-goeden-vanishes", 0.0),
      equiv("lifts", "frame-rotation-equivariance", 1e-9);
  std::mt19937_64 rng(opt.seed + 4);
  for (const Fixture& f : opt.fixtures) {
    const Signature sig = f.spec.sig;
    const DensityFieldSpec g = metricTensorField(f.spec);
    for (int s = 0; s < opt.samples; ++s) {
      const Point x = randomPoint(f.spec, rng);
      const VectorFieldSpec xi = randomVectorField(f.spec, rng);
      const Eigen::MatrixXd O = randomSOElement(sig, rng(), 0.5);
      recon.sample([&] {
        const FrameAt frame = orthonormalFrame(f.spec, x);
        const VectorJet jet = evalVectorField(xi, x);
        const NaturalLiftCoeffs L = naturalLiftCoeffs(frame, jet);
        const KosmannSplit split = kosmannSplit(L, sig);
        const Eigen::MatrixXd Llow = lowerFirst(L, sig);
        recon.add(relative(maxAbs(Eigen::MatrixXd(split.kosmann + split.vonGoeden - Llow)),
                           maxAbs(Llow)));

        const Eigen::MatrixXd lieG =
            lieTensor(f.spec, xi, g, x).components.reshaped(sig.dim(), sig.dim()).transpose();
        const Eigen::MatrixXd half = 0.5 * frame.e.transpose() * lieG * frame.e;
        goeden.add(relative(maxAbs(Eigen::MatrixXd(split.vonGoeden - half)), maxAbs(half)));

        // Same field in the rotated frame e' = e O: the coordinate matrix is unchanged.
        FrameAt rotated{frame.e * O, O.inverse() * frame.eInv, {}};
        for (const auto& d : frame.de) rotated.de.push_back(d * O);
        const Eigen::MatrixXd K = kosmannCoordinateMatrix(frame, sig, jet);
        equiv.add(relative(maxAbs(Eigen::MatrixXd(kosmannCoordinateMatrix(rotated, sig, jet) - K)),
                           maxAbs(K)));
      });
    }
    // Known Killing fields must have vanishing von Goeden part, random ones not.
    for (int s = 0; s < opt.samples && !f.killing.empty(); ++s) {
      const Point x = randomPoint(f.spec, rng);
      killing.sample([&] {
        const FrameAt frame = orthonormalFrame(f.spec, x);
        for (const auto& k : f.killing) {
          const double vg = maxAbs(kosmannSplit(naturalLiftCoeffs(frame, evalVectorField(k, x)), sig).vonGoeden);
          killing.add(vg <= 1e-10 ? 0.0 : 1.0);
        }
        const VectorFieldSpec xi = randomVectorField(f.spec, rng);
        const double vg = maxAbs(kosmannSplit(naturalLiftCoeffs(frame, evalVectorField(xi, x)), sig).vonGoeden);
        killing.add(vg > 1e-6 ? 0.0 : 1.0);
      });
    }
  }
  for (Suite* s : {&recon, &goeden, &killing, &equiv}) out.push_back(s->finish());
}

void liederivSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite recast("liederiv", "kosmann-equals-covariant-form", 1e-8),
      reductive("liederiv", "reductive-metric-lie-vanishes", 1e-8),
      natural("liederiv", "metric-lie-is-symmetrized-nabla-xi", 1e-9),
      flow("liederiv", "flow-oracle-vs-kosmann", 1e-3),
      lin("liederiv", "linearity-in-spinor", 1e-10), leibniz("liederiv", "leibniz-rule", 1e-8),
      lich("liederiv", "killing-reduces-to-lichnerowicz", 1e-9),
      density("liederiv", "density-flow-oracle", 1e-4);
  std::mt19937_64 rng(opt.seed + 5);
  const int flowSamples = std::min(opt.samples, 3);
  for (const Fixture& f : opt.fixtures) {
    const GeometrySpec& spec = f.spec;
    const GammaRep rep = gammaMatrices(spec.sig);
    const DensityFieldSpec g = metricTensorField(spec);
    const int m = spec.dim();
    for (int s = 0; s < opt.samples; ++s) {
      const Point x = randomPoint(spec, rng);
      const VectorFieldSpec xi = randomVectorField(spec, rng);
      const SpinorFieldSpec psi = randomSpinorField(spec, rng);
      const SpinorFieldSpec chi = randomSpinorField(spec, rng, "chi");
      const Expression fn = randomScalarField(spec, rng);
      recast.sample([&] {
        const LocalGeometry local = localGeometry(spec, x);
        const VectorJet xiJet = evalVectorField(xi, x);
        const SpinorJet psiJet = evalSpinorField(psi, x);
        const SpinorValue kos = lieSpinorKosmann(local, rep, xiJet, psiJet);
        recast.add(spinorGap(kos, lieSpinorCovariant(local, rep, xiJet, psiJet)));

        const Eigen::MatrixXd red = reductiveMetricLie(local, xiJet);
        reductive.add(relative(maxAbs(red), maxAbs(local.metric.g) * (1.0 + maxAbs(xiJet.jacobian))));

        const Eigen::MatrixXd lieG = lieTensor(spec, xi, g, x).components.reshaped(m, m).transpose();
        const Eigen::MatrixXd D = covariantDerivativeCovector(local.metric, local.christoffel, xiJet);
        natural.add(relative(maxAbs(Eigen::MatrixXd(lieG - D - D.transpose())), maxAbs(lieG)));

        const double c = 2.5;
        const SpinorValue sum = lieSpinorKosmann(spec, xi, combine(psi, c, chi), x);
        lin.add(spinorGap(sum, kos + c * lieSpinorKosmann(local, rep, xiJet, evalSpinorField(chi, x))));

        const DualValue fv = evalDual(fn, x);
        const SpinorValue lhs = lieSpinorKosmann(spec, xi, scale(fn, psi), x);
        const SpinorValue rhs = fv.grad.dot(xiJet.value) * psiJet.value + fv.value * kos;
        leibniz.add(spinorGap(lhs, rhs));
      });
      if (s < flowSamples)
        flow.sample([&] {
          flow.add(spinorGap(flowLieSpinorOracle(spec, xi, psi, x), lieSpinorKosmann(spec, xi, psi, x)));
        });
    }
    for (int s = 0; s < opt.samples && !f.killing.empty(); ++s) {
      const Point x = randomPoint(spec, rng);
      const SpinorFieldSpec psi = randomSpinorField(spec, rng);
      lich.sample([&] {
        for (const auto& k : f.killing)
          lich.add(spinorGap(lieSpinorKosmann(spec, k, psi, x), lichnerowicz(spec, k, psi, x)));
      });
    }
    // Densities of a few ranks and weights built from random components.
    const std::vector<std::tuple<int, int, double>> shapes = {
        {0, 0, 1.0}, {1, 0, 0.5}, {0, 2, -1.0}, {1, 1, 2.0}};
    for (int s = 0; s < flowSamples; ++s) {
      const Point x = randomPoint(spec, rng);
      const VectorFieldSpec xi = randomVectorField(spec, rng);
      for (const auto& [up, low, w] : shapes) {
        int count = 1;
        for (int k = 0; k < up + low; ++k) count *= m;
        std::vector<std::string> comps;
        for (int i = 0; i < count; ++i) comps.push_back(randomScalarField(spec, rng).toString());
        const DensityFieldSpec t = makeDensityField(spec, "t", up, low, w, comps);
        density.sample([&] {
          const Eigen::VectorXd exact = lieDensity(spec, xi, t, x).components;
          const Eigen::VectorXd oracle = flowLieDensityOracle(spec, xi, t, x).components;
          density.add(relative(maxAbs(Eigen::MatrixXd(exact - oracle)), maxAbs(Eigen::MatrixXd(exact))));
        });
      }
    }
  }
  for (Suite* s : {&recast, &reductive, &natural, &flow, &lin, &leibniz, &lich, &density})
    out.push_back(s->finish());
}

void jetSuites(const VerifyOptions& opt, std::vector<SuiteResult>& out) {
  Suite axioms("jets", "group-axioms", 1e-8), oracle("jets", "composition-oracle", 1e-6),
      tau("jets", "kernel-action-matches-tau", 0.0),
      vert("jets", "vertical-action-theta-independent", 0.0);
  std::mt19937_64 rng(opt.seed + 6);
  const std::vector<GroupDescriptor> groups = {
      GroupDescriptor::general(2), GroupDescriptor::special(3),
      GroupDescriptor::orthogonal({3, 0}), GroupDescriptor::orthogonal({2, 1})};
  std::normal_distribution<double> normal;
  for (const auto& G : groups) {
    for (int m : {2, 3}) {
      for (int s = 0; s < opt.samples; ++s) {
        const JetGroupElement g1 = randomJetElement(m, G, rng), g2 = randomJetElement(m, G, rng),
                              g3 = randomJetElement(m, G, rng);
        const JetGroupElement e = w11Identity(m, G);
        const double assoc = distance(w11Multiply(w11Multiply(g1, g2), g3),
                                      w11Multiply(g1, w11Multiply(g2, g3)));
        axioms.add(std::max({assoc, distance(w11Multiply(g1, e), g1), distance(w11Multiply(e, g1), g1),
                             distance(w11Multiply(g1, w11Inverse(g1)), e),
                             distance(w11Multiply(w11Inverse(g1), g1), e)}));
        oracle.add(distance(w11Multiply(g1, g2), compositionOracle(g1, g2)));

        const Eigen::VectorXd nu = Eigen::VectorXd::NullaryExpr(m, [&] { return normal(rng); });
        const Eigen::MatrixXd v = G.randomAlgebraElement(rng);
        JetGroupElement kernel = g1;
        kernel.a = Eigen::MatrixXd::Identity(G.n(), G.n());
        tau.add(distance(actionV(kernel, nu, v), actionTau(kernel, nu, v)));
        JetGroupElement flat = g1;
        for (auto& t : flat.theta) t.setZero();
        vert.add(maxAbs(Eigen::MatrixXd(actionVertical(g1, v) - actionVertical(flat, v))));
      }
    }
  }
  for (Suite* s : {&axioms, &oracle, &tau, &vert}) out.push_back(s->finish());
}

}  // namespace

bool VerifySummary::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& r) { return r.pass; });
}

VerifySummary runVerify(const VerifyOptions& options) {
  VerifySummary summary;
  if (options.samples <= 0) return summary;
  VerifyOptions opt = options;
  if (opt.fixtures.empty()) opt.fixtures = builtinFixtures();
  liealgSuites(opt, summary.suites);
  exprSuites(opt, summary.suites);
  geometrySuites(opt, summary.suites);
  cliffordSuites(opt, summary.suites);
  liftSuites(opt, summary.suites);
  liederivSuites(opt, summary.suites);
  jetSuites(opt, summary.suites);
  return summary;
}

}  // namespace spinlie
