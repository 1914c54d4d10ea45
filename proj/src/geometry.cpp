#include "spinlie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace spinlie {

namespace {

template <typename Field>
const Field& findByName(const std::vector<Field>& fields, const std::string& name,
                        const char* kind) {
  for (const auto& f : fields)
    if (f.name == name) return f;
  throw InputError(std::string("unknown ") + kind + " '" + name + "'");
}

std::vector<Expression> parseAll(const GeometrySpec& spec,
                                 const std::vector<std::string>& sources) {
  std::vector<Expression> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(spec.expr(s));
  return out;
}

int intPow(int base, int exp) {
  int r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

ADMatrix metricAD(const GeometrySpec& spec, const ADVector& x) {
  const int m = spec.dim();
  ADMatrix g(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      g(mu, nu) = spec.metricEntry(mu, nu).evaluate<ADScalar>(x);
      g(nu, mu) = g(mu, nu);
    }
  return g;
}

ADScalar inner(const ADMatrix& g, const ADVector& u, const ADVector& v) {
  ADScalar s = 0.0 * u[0];
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) s += u[i] * g(i, j) * v[j];
  return s;
}

constexpr double kBreakdown = 1e-12;

/// Gram-Schmidt over the coordinate basis in the order `perm`; returns false on
/// breakdown. Frame vectors are sorted positive-norm first, stable in `perm`.
bool gramSchmidt(const ADMatrix& g, const ADVector& x, const std::vector<int>& perm,
                 std::vector<ADVector>& frame, std::vector<double>& norms) {
  const int m = static_cast<int>(perm.size());
  std::vector<ADVector> vecs;
  std::vector<double> signs;
  const ADScalar zero = 0.0 * x[0];
  for (int k = 0; k < m; ++k) {
    ADVector v(m);
    for (int i = 0; i < m; ++i) v[i] = zero + (i == perm[k] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      const ADScalar c = signs[j] * inner(g, v, vecs[j]);
      for (int i = 0; i < m; ++i) v[i] -= c * vecs[j][i];
    }
    const ADScalar n = inner(g, v, v);
    if (std::abs(n.value()) < kBreakdown) return false;
    const double sign = n.value() > 0.0 ? 1.0 : -1.0;
    const ADScalar scale = 1.0 / sqrt(sign * n);
    for (int i = 0; i < m; ++i) v[i] *= scale;
    vecs.push_back(v);
    signs.push_back(sign);
  }
  frame.clear();
  norms.clear();
  for (double want : {1.0, -1.0})
    for (int k = 0; k < m; ++k)
      if (signs[k] == want) {
        frame.push_back(vecs[k]);
        norms.push_back(want);
      }
  return true;
}

}  // namespace

const VectorFieldSpec& GeometrySpec::vectorField(const std::string& name) const {
  return findByName(vectors, name, "vector field");
}
const SpinorFieldSpec& GeometrySpec::spinorField(const std::string& name) const {
  return findByName(spinors, name, "spinor field");
}
const DensityFieldSpec& GeometrySpec::densityField(const std::string& name) const {
  return findByName(densities, name, "density field");
}

GeometrySpec makeGeometry(const Signature& sig, std::vector<std::string> coordNames,
                          const std::vector<std::string>& metricUpper) {
  validate(sig);
  const int m = sig.dim();
  if (static_cast<int>(coordNames.size()) != m)
    throw InputError("signature " + toString(sig) + " needs " + std::to_string(m) +
                     " coordinates, got " + std::to_string(coordNames.size()));
  std::set<std::string> seen;
  for (const auto& n : coordNames) {
    if (n.empty() || !seen.insert(n).second)
      throw InputError("duplicate or empty coordinate name '" + n + "'");
    if (n == "pi" || n == "sqrt" || n == "sin" || n == "cos" || n == "exp" || n == "log")
      throw InputError("coordinate name '" + n + "' is reserved");
  }
  if (static_cast<int>(metricUpper.size()) != m * (m + 1) / 2)
    throw InputError("metric needs " + std::to_string(m * (m + 1) / 2) +
                     " upper-triangle entries, got " + std::to_string(metricUpper.size()));

  GeometrySpec spec;
  spec.sig = sig;
  spec.coordNames = std::make_shared<const std::vector<std::string>>(std::move(coordNames));
  spec.metric.resize(m * m);
  spec.domain.assign(m, {-1.0, 1.0});
  std::size_t k = 0;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) {
      spec.metric[mu * m + nu] = spec.expr(metricUpper[k++]);
      spec.metric[nu * m + mu] = spec.metric[mu * m + nu];
    }
  return spec;
}

VectorFieldSpec makeVectorField(const GeometrySpec& spec, std::string name,
                                const std::vector<std::string>& components) {
  if (static_cast<int>(components.size()) != spec.dim())
    throw InputError("vector field '" + name + "' needs " + std::to_string(spec.dim()) +
                     " components");
  return {std::move(name), parseAll(spec, components)};
}

SpinorFieldSpec makeSpinorField(const GeometrySpec& spec, std::string name,
                                const std::vector<std::string>& re,
                                const std::vector<std::string>& im) {
  const auto n = static_cast<std::size_t>(spec.spinorDim());
  if (re.size() != n || im.size() != n)
    throw InputError("spinor field '" + name + "' needs " + std::to_string(n) +
                     " complex components");
  return {std::move(name), parseAll(spec, re), parseAll(spec, im)};
}

DensityFieldSpec makeDensityField(const GeometrySpec& spec, std::string name, int upper,
                                  int lower, double weight,
                                  const std::vector<std::string>& components) {
  if (upper < 0 || lower < 0) throw InputError("negative tensor rank");
  const int count = intPow(spec.dim(), upper + lower);
  if (static_cast<int>(components.size()) != count)
    throw InputError("density field '" + name + "' of rank (" + std::to_string(upper) + "," +
                     std::to_string(lower) + ") needs " + std::to_string(count) +
                     " components, got " + std::to_string(components.size()));
  return {std::move(name), upper, lower, weight, parseAll(spec, components)};
}

void validate(const GeometrySpec& spec) {
  validate(spec.sig);
  const int m = spec.dim();
  if (!spec.coordNames || static_cast<int>(spec.coordNames->size()) != m)
    throw InputError("coordinate count does not match signature");
  if (static_cast<int>(spec.metric.size()) != m * m) throw InputError("metric is not m x m");
  if (static_cast<int>(spec.domain.size()) != m) throw InputError("domain is not m-dimensional");
  std::set<std::string> names;
  auto claim = [&](const std::string& n) {
    if (!names.insert(n).second) throw InputError("duplicate field name '" + n + "'");
  };
  for (const auto& v : spec.vectors) {
    claim(v.name);
    if (static_cast<int>(v.components.size()) != m)
      throw InputError("vector field '" + v.name + "' has wrong component count");
  }
  for (const auto& s : spec.spinors) {
    claim(s.name);
    if (static_cast<int>(s.re.size()) != spec.spinorDim() || s.re.size() != s.im.size())
      throw InputError("spinor field '" + s.name + "' has wrong component count");
  }
  for (const auto& d : spec.densities) {
    claim(d.name);
    if (static_cast<int>(d.components.size()) != intPow(m, d.upper + d.lower))
      throw InputError("density field '" + d.name + "' has wrong component count");
  }
}

VectorJet evalVectorField(const VectorFieldSpec& field, const Point& pt) {
  const auto m = pt.size();
  if (static_cast<Eigen::Index>(field.components.size()) != m)
    throw InputError("vector field '" + field.name + "' does not match the chart dimension");
  VectorJet jet{Eigen::VectorXd(m), Eigen::MatrixXd(m, m)};
  for (Eigen::Index rho = 0; rho < m; ++rho) {
    const DualValue d = evalDual(field.components[rho], pt);
    jet.value[rho] = d.value;
    jet.jacobian.row(rho) = d.grad.transpose();
  }
  return jet;
}

SpinorJet evalSpinorField(const SpinorFieldSpec& field, const Point& pt) {
  const auto n = static_cast<Eigen::Index>(field.re.size());
  SpinorJet jet{Eigen::VectorXcd(n), Eigen::MatrixXcd(n, pt.size())};
  for (Eigen::Index i = 0; i < n; ++i) {
    const DualValue re = evalDual(field.re[i], pt);
    const DualValue im = evalDual(field.im[i], pt);
    jet.value[i] = {re.value, im.value};
    for (Eigen::Index mu = 0; mu < pt.size(); ++mu) jet.grad(i, mu) = {re.grad[mu], im.grad[mu]};
  }
  return jet;
}

MetricAt metricAt(const GeometrySpec& spec, const Point& pt) {
  const int m = spec.dim();
  if (pt.size() != m)
    throw InputError("point has " + std::to_string(pt.size()) + " coordinates, chart has " +
                     std::to_string(m));
  const ADMatrix gAD = metricAD(spec, seedPoint(pt));
  MetricAt out;
  out.g.resize(m, m);
  out.dg.assign(m, Eigen::MatrixXd(m, m));
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      out.g(mu, nu) = gAD(mu, nu).value();
      for (int rho = 0; rho < m; ++rho) out.dg[rho](mu, nu) = gAD(mu, nu).derivatives()[rho];
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.g, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  int plus = 0, minus = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i]) <= 1e-12 * scale)
      throw PreconditionError("singular metric at point", std::abs(lambda[i]));
    (lambda[i] > 0 ? plus : minus)++;
  }
  if (plus != spec.sig.p || minus != spec.sig.q)
    throw PreconditionError("metric has signature (" + std::to_string(plus) + "," +
                            std::to_string(minus) + ") at point, expected " +
                            toString(spec.sig));
  out.gInv = out.g.inverse();
  return out;
}

FrameAt orthonormalFrame(const GeometrySpec& spec, const Point& pt) {
  metricAt(spec, pt);  // signature and regularity checks
  const int m = spec.dim();
  const ADVector x = seedPoint(pt);
  const ADMatrix g = metricAD(spec, x);

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<ADVector> frame;
  std::vector<double> norms;
  bool ok = false;
  do {
    ok = gramSchmidt(g, x, perm, frame, norms);
  } while (!ok && std::next_permutation(perm.begin(), perm.end()));
  if (!ok) throw PreconditionError("Gram-Schmidt breaks down under every coordinate order");

  FrameAt out;
  out.e.resize(m, m);
  out.de.assign(m, Eigen::MatrixXd(m, m));
  for (int a = 0; a < m; ++a)
    for (int mu = 0; mu < m; ++mu) {
      out.e(mu, a) = frame[a][mu].value();
      const Eigen::VectorXd& d = frame[a][mu].derivatives();
      for (int nu = 0; nu < m; ++nu) out.de[nu](mu, a) = d.size() ? d[nu] : 0.0;
    }
  out.eInv = out.e.inverse();
  return out;
}

ChristoffelAt christoffel(const MetricAt& metric) {
  const auto m = metric.g.rows();
  ChristoffelAt out;
  out.gamma.assign(m, Eigen::MatrixXd::Zero(m, m));
  for (Eigen::Index rho = 0; rho < m; ++rho)
    for (Eigen::Index mu = 0; mu < m; ++mu)
      for (Eigen::Index nu = mu; nu < m; ++nu) {
        double s = 0.0;
        for (Eigen::Index sigma = 0; sigma < m; ++sigma)
          s += metric.gInv(rho, sigma) *
               (metric.dg[mu](sigma, nu) + metric.dg[nu](sigma, mu) - metric.dg[sigma](mu, nu));
        out.gamma[rho](mu, nu) = 0.5 * s;
        out.gamma[rho](nu, mu) = 0.5 * s;
      }
  return out;
}

ChristoffelAt christoffel(const GeometrySpec& spec, const Point& pt) {
  return christoffel(metricAt(spec, pt));
}

SpinConnectionAt spinConnection(const FrameAt& frame, const ChristoffelAt& gamma,
                                const Signature& sig) {
  const auto m = frame.e.rows();
  SpinConnectionAt out;
  out.mixed.resize(m);
  out.lowered.resize(m);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    // Gamma_mu as a matrix (rho, sigma) -> Gamma^rho_{mu sigma}
    Eigen::MatrixXd gammaMu(m, m);
    for (Eigen::Index rho = 0; rho < m; ++rho) gammaMu.row(rho) = gamma.gamma[rho].row(mu);
    out.mixed[mu] = frame.eInv * (frame.de[mu] + gammaMu * frame.e);
    out.lowered[mu] = lowerFirst(out.mixed[mu], sig);
  }
  return out;
}

SpinConnectionAt spinConnection(const GeometrySpec& spec, const Point& pt) {
  return spinConnection(orthonormalFrame(spec, pt), christoffel(spec, pt), spec.sig);
}

Eigen::MatrixXd covariantDerivativeCovector(const MetricAt& metric, const ChristoffelAt& gamma,
                                            const VectorJet& xi) {
  const auto m = metric.g.rows();
  const Eigen::VectorXd lowered = metric.g * xi.value;
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index mu = 0; mu < m; ++mu) {
    // d_mu xi_nu = d_mu g_{nu l} xi^l + g_{nu l} d_mu xi^l
    const Eigen::VectorXd dLowered = metric.dg[mu] * xi.value + metric.g * xi.jacobian.col(mu);
    for (Eigen::Index nu = 0; nu < m; ++nu) {
      double s = dLowered[nu];
      for (Eigen::Index rho = 0; rho < m; ++rho) s -= gamma.gamma[rho](mu, nu) * lowered[rho];
      out(mu, nu) = s;
    }
  }
  return out;
}

Eigen::MatrixXd covariantDerivativeCovector(const GeometrySpec& spec,
                                            const VectorFieldSpec& xi, const Point& pt) {
  const MetricAt metric = metricAt(spec, pt);
  return covariantDerivativeCovector(metric, christoffel(metric), evalVectorField(xi, pt));
}

LocalGeometry localGeometry(const GeometrySpec& spec, const Point& pt) {
  LocalGeometry local;
  local.x = pt;
  local.sig = spec.sig;
  local.metric = metricAt(spec, pt);
  local.frame = orthonormalFrame(spec, pt);
  local.christoffel = christoffel(local.metric);
  local.spin = spinConnection(local.frame, local.christoffel, spec.sig);
  return local;
}

}  // namespace spinlie
