#include "spinlie/liederiv.hpp"

#include <cmath>
#include <complex>

namespace spinlie {

namespace {

/// 1/4 sum_{ab} A_{ab} gamma^a gamma^b without an antisymmetry check.
Eigen::MatrixXcd quarterGammaSum(const GammaRep& rep, const Eigen::MatrixXd& A) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rep.N, rep.N);
  for (Eigen::Index a = 0; a < A.rows(); ++a)
    for (Eigen::Index b = 0; b < A.cols(); ++b)
      out += (0.25 * A(a, b)) * rep.gammas[a] * rep.gammas[b];
  return out;
}

Eigen::MatrixXd antisymmetrize(const Eigen::MatrixXd& A) { return 0.5 * (A - A.transpose()); }

/// nabla_a xi_b with frame indices.
Eigen::MatrixXd frameCovariantDerivative(const LocalGeometry& local, const VectorJet& xi) {
  const Eigen::MatrixXd D = covariantDerivativeCovector(local.metric, local.christoffel, xi);
  return local.frame.e.transpose() * D * local.frame.e;
}

void checkShapes(const LocalGeometry& local, const GammaRep& rep, const SpinorJet& psi) {
  if (rep.sig != local.sig) throw InputError("gamma representation signature mismatch");
  if (psi.value.size() != rep.N || psi.grad.rows() != rep.N ||
      psi.grad.cols() != local.x.size())
    throw InputError("spinor field does not match the spinor dimension");
}

struct FlowState {
  Eigen::VectorXd x;
  Eigen::MatrixXcd S;
};

FlowState axpy(const FlowState& s, double h, const FlowState& k) {
  return {s.x + h * k.x, s.S + h * k.S};
}

}  // namespace

TensorJet evalDensityField(const DensityFieldSpec& field, const Point& pt) {
  const auto count = static_cast<Eigen::Index>(field.components.size());
  TensorJet jet{field.upper, field.lower, field.weight, Eigen::VectorXd(count),
                Eigen::MatrixXd(count, pt.size())};
  for (Eigen::Index i = 0; i < count; ++i) {
    const DualValue d = evalDual(field.components[i], pt);
    jet.value[i] = d.value;
    jet.grad.row(i) = d.grad.transpose();
  }
  return jet;
}

DensityFieldSpec metricTensorField(const GeometrySpec& spec) {
  return {"metric", 0, 2, 0.0, spec.metric};
}

TensorValue lieDensity(const VectorJet& xi, const TensorJet& t) {
  const auto m = xi.value.size();
  const int rank = t.upper + t.lower;
  Eigen::Index count = 1;
  for (int k = 0; k < rank; ++k) count *= m;
  if (t.value.size() != count || t.grad.rows() != count || t.grad.cols() != m)
    throw InputError("lieDensity: tensor shape does not match rank and dimension");

  std::vector<Eigen::Index> stride(rank);
  for (int k = rank - 1, s = 1; k >= 0; --k, s *= static_cast<int>(m)) stride[k] = s;

  const double divergence = xi.jacobian.trace();
  TensorValue out{t.upper, t.lower, t.weight, Eigen::VectorXd(count)};
  for (Eigen::Index I = 0; I < count; ++I) {
    double v = t.grad.row(I).dot(xi.value) + t.weight * divergence * t.value[I];
    for (int k = 0; k < rank; ++k) {
      const Eigen::Index digit = (I / stride[k]) % m;
      const Eigen::Index base = I - digit * stride[k];
      for (Eigen::Index rho = 0; rho < m; ++rho) {
        const double comp = t.value[base + rho * stride[k]];
        if (k < t.upper)
          v -= comp * xi.jacobian(digit, rho);
        else
          v += comp * xi.jacobian(rho, digit);
      }
    }
    out.components[I] = v;
  }
  return out;
}

TensorValue lieDensity(const GeometrySpec& spec, const VectorFieldSpec& xi,
                       const DensityFieldSpec& t, const Point& pt) {
  metricAt(spec, pt);  // domain and signature checks
  return lieDensity(evalVectorField(xi, pt), evalDensityField(t, pt));
}

TensorValue lieTensor(const GeometrySpec& spec, const VectorFieldSpec& xi,
                      const DensityFieldSpec& t, const Point& pt) {
  if (t.weight != 0.0)
    throw InputError("lieTensor: '" + t.name + "' has nonzero weight, use lieDensity");
  return lieDensity(spec, xi, t, pt);
}

Eigen::MatrixXcd spinorCovariantDerivative(const LocalGeometry& local, const GammaRep& rep,
                                           const SpinorJet& psi) {
  checkShapes(local, rep, psi);
  Eigen::MatrixXcd out = psi.grad;
  for (Eigen::Index mu = 0; mu < local.x.size(); ++mu)
    out.col(mu) -= quarterGammaSum(rep, local.spin.lowered[mu]) * psi.value;
  return out;
}

SpinorValue lieSpinorGaugeNatural(const LocalGeometry& local, const GammaRep& rep,
                                  const InvariantFieldComponents& comps, const SpinorJet& psi) {
  checkShapes(local, rep, psi);
  const Eigen::VectorXd xiCoord = local.frame.e * comps.xiFrame;
  return psi.grad * xiCoord.cast<std::complex<double>>() +
         applyClifford(rep, spinAlgebraMap(rep, comps.vertical), psi.value);
}

SpinorValue lieSpinorGaugeNatural(const GeometrySpec& spec, const InvariantFieldComponents& comps,
                                  const SpinorFieldSpec& psi, const Point& pt) {
  return lieSpinorGaugeNatural(localGeometry(spec, pt), gammaMatrices(spec.sig), comps,
                               evalSpinorField(psi, pt));
}

SpinorValue lieSpinorKosmann(const LocalGeometry& local, const GammaRep& rep,
                             const VectorJet& xi, const SpinorJet& psi) {
  return lieSpinorGaugeNatural(local, rep, kosmannComponents(local.frame, local.sig, xi), psi);
}

SpinorValue lieSpinorKosmann(const GeometrySpec& spec, const VectorFieldSpec& xi,
                             const SpinorFieldSpec& psi, const Point& pt) {
  return lieSpinorKosmann(localGeometry(spec, pt), gammaMatrices(spec.sig),
                          evalVectorField(xi, pt), evalSpinorField(psi, pt));
}

SpinorValue lieSpinorCovariant(const LocalGeometry& local, const GammaRep& rep,
                               const VectorJet& xi, const SpinorJet& psi) {
  const Eigen::MatrixXcd nabla = spinorCovariantDerivative(local, rep, psi);
  const Eigen::MatrixXd nablaXi = antisymmetrize(frameCovariantDerivative(local, xi));
  return nabla * xi.value.cast<std::complex<double>>() -
         applyClifford(rep, spinAlgebraMap(rep, nablaXi), psi.value);
}

SpinorValue lieSpinorCovariant(const GeometrySpec& spec, const VectorFieldSpec& xi,
                               const SpinorFieldSpec& psi, const Point& pt) {
  return lieSpinorCovariant(localGeometry(spec, pt), gammaMatrices(spec.sig),
                            evalVectorField(xi, pt), evalSpinorField(psi, pt));
}

SpinorValue lichnerowicz(const LocalGeometry& local, const GammaRep& rep, const VectorJet& xi,
                         const SpinorJet& psi) {
  const double residual = killingResidual(local, xi);
  if (residual > kKillingTolerance)
    throw PreconditionError("lichnerowicz: vector field is not Killing at the point", residual);
  const Eigen::MatrixXcd nabla = spinorCovariantDerivative(local, rep, psi);
  return nabla * xi.value.cast<std::complex<double>>() -
         quarterGammaSum(rep, frameCovariantDerivative(local, xi)) * psi.value;
}

SpinorValue lichnerowicz(const GeometrySpec& spec, const VectorFieldSpec& xi,
                         const SpinorFieldSpec& psi, const Point& pt) {
  return lichnerowicz(localGeometry(spec, pt), gammaMatrices(spec.sig), evalVectorField(xi, pt),
                      evalSpinorField(psi, pt));
}

Eigen::MatrixXd reductiveMetricLie(const LocalGeometry& local, const VectorJet& xi) {
  const auto m = local.x.size();
  const Eigen::MatrixXd K = kosmannCoordinateMatrix(local.frame, local.sig, xi);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index rho = 0; rho < m; ++rho) out += xi.value[rho] * local.metric.dg[rho];
  const Eigen::MatrixXd gK = K.transpose() * local.metric.g;  // (nu, mu) -> g_{rho mu} K^rho_nu
  return out + gK + gK.transpose();
}

Eigen::MatrixXd reductiveMetricLie(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                   const Point& pt) {
  return reductiveMetricLie(localGeometry(spec, pt), evalVectorField(xi, pt));
}

double killingResidual(const LocalGeometry& local, const VectorJet& xi) {
  const Eigen::MatrixXd D = covariantDerivativeCovector(local.metric, local.christoffel, xi);
  return (D + D.transpose()).cwiseAbs().maxCoeff();
}

double killingResidual(const GeometrySpec& spec, const VectorFieldSpec& xi, const Point& pt) {
  const MetricAt metric = metricAt(spec, pt);
  const Eigen::MatrixXd D =
      covariantDerivativeCovector(metric, christoffel(metric), evalVectorField(xi, pt));
  return (D + D.transpose()).cwiseAbs().maxCoeff();
}

SpinorValue flowLieSpinorOracle(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                const SpinorFieldSpec& psi, const Point& pt, double dt) {
  if (!(dt > 0.0)) throw InputError("flowLieSpinorOracle: dt must be positive");
  const GammaRep rep = gammaMatrices(spec.sig);

  auto rhs = [&](const FlowState& s) {
    const VectorJet jet = evalVectorField(xi, s.x);
    const FrameAt frame = orthonormalFrame(spec, s.x);
    const Eigen::MatrixXd K = kosmannSplit(naturalLiftCoeffs(frame, jet), spec.sig).kosmann;
    return FlowState{jet.value, -spinAlgebraMap(rep, K) * s.S};
  };
  auto rk4 = [&](const FlowState& s, double h) {
    const FlowState k1 = rhs(s);
    const FlowState k2 = rhs(axpy(s, 0.5 * h, k1));
    const FlowState k3 = rhs(axpy(s, 0.5 * h, k2));
    const FlowState k4 = rhs(axpy(s, h, k3));
    return FlowState{s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                     s.S + h / 6.0 * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S)};
  };
  // Step-doubling RK4 from t = 0 to t = T.
  auto integrate = [&](double T) {
    FlowState s{pt, Eigen::MatrixXcd::Identity(rep.N, rep.N)};
    double t = 0.0;
    double h = T;
    int steps = 0;
    while (std::abs(T - t) > 1e-15 * std::abs(T)) {
      if (std::abs(h) > std::abs(T - t)) h = T - t;
      const FlowState full = rk4(s, h);
      const FlowState half = rk4(rk4(s, 0.5 * h), 0.5 * h);
      const double err = std::max((full.x - half.x).cwiseAbs().maxCoeff(),
                                  (full.S - half.S).cwiseAbs().maxCoeff());
      if (err <= 1e-13 || std::abs(h) < 1e-14) {
        s = half;
        t += h;
      } else {
        h *= 0.5;
      }
      if (++steps > 100000) throw PreconditionError("flowLieSpinorOracle: integrator failure");
    }
    return s;
  };
  auto transported = [&](double T) {
    const FlowState s = integrate(T);
    const SpinorValue value = evalSpinorField(psi, s.x).value;
    return SpinorValue(s.S.partialPivLu().solve(value));
  };
  try {
    return (transported(dt) - transported(-dt)) / (2.0 * dt);
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("flow leaves the chart domain: ") + e.what());
  }
}

TensorValue flowLieDensityOracle(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                 const DensityFieldSpec& t, const Point& pt, double dt) {
  if (!(dt > 0.0)) throw InputError("flowLieDensityOracle: dt must be positive");
  metricAt(spec, pt);
  const auto m = pt.size();
  const int rank = t.upper + t.lower;
  std::vector<Eigen::Index> stride(rank);
  for (int k = rank - 1, s = 1; k >= 0; --k, s *= static_cast<int>(m)) stride[k] = s;

  // State: x and the Jacobian J of the flow, dJ/dt = (d xi)(x) J.
  using State = std::pair<Eigen::VectorXd, Eigen::MatrixXd>;
  auto rhs = [&](const State& s) {
    const VectorJet jet = evalVectorField(xi, s.first);
    return State{jet.value, jet.jacobian * s.second};
  };
  auto step = [&](const State& s, double h) {
    const State k1 = rhs(s);
    const State k2 = rhs({s.first + 0.5 * h * k1.first, s.second + 0.5 * h * k1.second});
    const State k3 = rhs({s.first + 0.5 * h * k2.first, s.second + 0.5 * h * k2.second});
    const State k4 = rhs({s.first + h * k3.first, s.second + h * k3.second});
    return State{s.first + h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first),
                 s.second + h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second)};
  };
  auto pulledBack = [&](double T) {
    constexpr int kSteps = 16;
    State s{pt, Eigen::MatrixXd::Identity(m, m)};
    for (int i = 0; i < kSteps; ++i) s = step(s, T / kSteps);
    const Eigen::MatrixXd& J = s.second;
    const Eigen::MatrixXd Jinv = J.inverse();
    Eigen::VectorXd v = evalDensityField(t, s.first).value;
    for (int k = 0; k < rank; ++k) {
      Eigen::VectorXd next = Eigen::VectorXd::Zero(v.size());
      for (Eigen::Index I = 0; I < v.size(); ++I) {
        const Eigen::Index digit = (I / stride[k]) % m;
        const Eigen::Index base = I - digit * stride[k];
        for (Eigen::Index r = 0; r < m; ++r)
          next[I] += v[base + r * stride[k]] * (k < t.upper ? Jinv(digit, r) : J(r, digit));
      }
      v = next;
    }
    return Eigen::VectorXd(v * std::pow(J.determinant(), t.weight));
  };
  return {t.upper, t.lower, t.weight, (pulledBack(dt) - pulledBack(-dt)) / (2.0 * dt)};
}

Eigen::VectorXd coordinateBracket(const VectorJet& xi, const VectorJet& zeta) {
  return zeta.jacobian * xi.value - xi.jacobian * zeta.value;
}

SpinorJet finiteDifferenceJet(const std::function<SpinorValue(const Point&)>& field,
                              const Point& pt, double h) {
  const SpinorValue value = field(pt);
  SpinorJet jet{value, Eigen::MatrixXcd(value.size(), pt.size())};
  for (Eigen::Index mu = 0; mu < pt.size(); ++mu) {
    Point plus = pt, minus = pt;
    plus[mu] += h;
    minus[mu] -= h;
    jet.grad.col(mu) = (field(plus) - field(minus)) / (2.0 * h);
  }
  return jet;
}

SpinorValue commutatorDefect(const GeometrySpec& spec, const VectorFieldSpec& xi,
                             const VectorFieldSpec& zeta, const SpinorFieldSpec& psi,
                             const Point& pt, double h) {
  if (!(h > 0.0)) throw InputError("commutatorDefect: step must be positive");
  const GammaRep rep = gammaMatrices(spec.sig);
  const LocalGeometry local = localGeometry(spec, pt);
  const VectorJet xiJet = evalVectorField(xi, pt);
  const VectorJet zetaJet = evalVectorField(zeta, pt);

  const SpinorJet lieZeta = finiteDifferenceJet(
      [&](const Point& x) { return lieSpinorKosmann(spec, zeta, psi, x); }, pt, h);
  const SpinorJet lieXi = finiteDifferenceJet(
      [&](const Point& x) { return lieSpinorKosmann(spec, xi, psi, x); }, pt, h);

  auto bracketAt = [&](const Point& x) {
    return coordinateBracket(evalVectorField(xi, x), evalVectorField(zeta, x));
  };
  VectorJet bracket{bracketAt(pt), Eigen::MatrixXd(pt.size(), pt.size())};
  for (Eigen::Index nu = 0; nu < pt.size(); ++nu) {
    Point plus = pt, minus = pt;
    plus[nu] += h;
    minus[nu] -= h;
    bracket.jacobian.col(nu) = (bracketAt(plus) - bracketAt(minus)) / (2.0 * h);
  }

  const SpinorJet psiJet = evalSpinorField(psi, pt);
  return lieSpinorKosmann(local, rep, xiJet, lieZeta) - lieSpinorKosmann(local, rep, zetaJet, lieXi) -
         lieSpinorKosmann(local, rep, bracket, psiJet);
}

}  // namespace spinlie
