#include "spinlie/jets.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <charconv>
#include <cmath>

namespace spinlie {

namespace {

void requireSquare(const Eigen::MatrixXd& M, Eigen::Index n, const char* what) {
  if (M.rows() != n || M.cols() != n)
    throw InputError(std::string(what) + " must be " + std::to_string(n) + "x" +
                     std::to_string(n));
}

void checkCompatible(const JetGroupElement& g1, const JetGroupElement& g2) {
  if (g1.alpha.rows() != g2.alpha.rows() || g1.a.rows() != g2.a.rows() ||
      g1.theta.size() != g2.theta.size())
    throw InputError("jet group elements have different shapes");
}

Eigen::MatrixXd inverseOf(const Eigen::MatrixXd& M, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw PreconditionError(std::string(what) + " is singular");
  return lu.inverse();
}

/// theta_j nu^j
Eigen::MatrixXd contract(const std::vector<Eigen::MatrixXd>& theta, const Eigen::VectorXd& nu) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(theta.front().rows(), theta.front().cols());
  for (std::size_t j = 0; j < theta.size(); ++j) out += nu[static_cast<Eigen::Index>(j)] * theta[j];
  return out;
}

int parseInt(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

GroupDescriptor GroupDescriptor::general(int n) {
  if (n < 1) throw InputError("group size must be positive");
  return {Kind::General, n, Signature{n, 0}};
}

GroupDescriptor GroupDescriptor::special(int n) {
  if (n < 1) throw InputError("group size must be positive");
  return {Kind::Special, n, Signature{n, 0}};
}

GroupDescriptor GroupDescriptor::orthogonal(const Signature& sig) {
  validate(sig);
  return {Kind::Orthogonal, sig.dim(), sig};
}

GroupDescriptor GroupDescriptor::parse(std::string_view name) {
  const auto open = name.find('(');
  if (open == std::string_view::npos || name.back() != ')')
    throw InputError("unknown group '" + std::string(name) + "'");
  const std::string_view head = name.substr(0, open);
  const std::string_view args = name.substr(open + 1, name.size() - open - 2);
  const auto comma = args.find(',');
  if (head == "SO" && comma != std::string_view::npos)
    return orthogonal({parseInt(args.substr(0, comma)), parseInt(args.substr(comma + 1))});
  if (comma != std::string_view::npos) throw InputError("unknown group '" + std::string(name) + "'");
  const int n = parseInt(args);
  if (head == "GL") return general(n);
  if (head == "SL") return special(n);
  if (head == "SO") return orthogonal({n, 0});
  throw InputError("unknown group '" + std::string(name) + "'");
}

std::string GroupDescriptor::name() const {
  switch (kind_) {
    case Kind::General:
      return "GL(" + std::to_string(n_) + ")";
    case Kind::Special:
      return "SL(" + std::to_string(n_) + ")";
    case Kind::Orthogonal:
      return sig_.q == 0 ? "SO(" + std::to_string(n_) + ")"
                         : "SO(" + std::to_string(sig_.p) + "," + std::to_string(sig_.q) + ")";
  }
  return {};
}

bool GroupDescriptor::contains(const Eigen::MatrixXd& a, double tol) const {
  if (a.rows() != n_ || a.cols() != n_) return false;
  const double det = a.determinant();
  switch (kind_) {
    case Kind::General:
      return std::abs(det) > tol;
    case Kind::Special:
      return std::abs(det - 1.0) <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
    case Kind::Orthogonal: {
      const Eigen::MatrixXd defect =
          etaAdjoint(a, sig_) * a - Eigen::MatrixXd::Identity(n_, n_);
      return std::abs(det - 1.0) <= 1e3 * tol &&
             defect.cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.squaredNorm());
    }
  }
  return false;
}

bool GroupDescriptor::algebraContains(const Eigen::MatrixXd& v, double tol) const {
  if (v.rows() != n_ || v.cols() != n_) return false;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  switch (kind_) {
    case Kind::General:
      return true;
    case Kind::Special:
      return std::abs(v.trace()) <= tol * scale;
    case Kind::Orthogonal:
      return (v + etaAdjoint(v, sig_)).cwiseAbs().maxCoeff() <= tol * scale;
  }
  return false;
}

Eigen::MatrixXd GroupDescriptor::randomAlgebraElement(std::mt19937_64& rng, double scale) const {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd v(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) v(i, j) = normal(rng);
  switch (kind_) {
    case Kind::General:
      return v;
    case Kind::Special:
      return v - v.trace() / n_ * Eigen::MatrixXd::Identity(n_, n_);
    case Kind::Orthogonal:
      return decomposeGL(v, sig_).antisym;
  }
  return v;
}

Eigen::MatrixXd GroupDescriptor::randomElement(std::mt19937_64& rng, double scale) const {
  return randomAlgebraElement(rng, scale).exp();
}

void validate(const JetGroupElement& g, const GroupDescriptor& desc) {
  const int m = g.m();
  if (m < 1) throw InputError("jet element has empty alpha");
  requireSquare(g.alpha, m, "alpha");
  requireSquare(g.a, desc.n(), "a");
  if (static_cast<int>(g.theta.size()) != m)
    throw InputError("theta needs " + std::to_string(m) + " Lie algebra elements");
  for (const auto& t : g.theta) requireSquare(t, desc.n(), "theta component");
  if (std::abs(g.alpha.determinant()) < 1e-12) throw PreconditionError("alpha is singular");
  if (!desc.contains(g.a)) throw PreconditionError("a is not an element of " + desc.name());
  for (const auto& t : g.theta)
    if (!desc.algebraContains(t))
      throw PreconditionError("theta component is not in the Lie algebra of " + desc.name());
}

JetGroupElement w11Identity(int m, const GroupDescriptor& desc) {
  if (m < 1) throw InputError("base dimension must be positive");
  return {Eigen::MatrixXd::Identity(m, m), Eigen::MatrixXd::Identity(desc.n(), desc.n()),
          std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(desc.n(), desc.n()))};
}

JetGroupElement w11Multiply(const JetGroupElement& g1, const JetGroupElement& g2) {
  checkCompatible(g1, g2);
  const int m = g1.m();
  const Eigen::MatrixXd bInv = inverseOf(g2.a, "a");
  JetGroupElement out{g1.alpha * g2.alpha, g1.a * g2.a, {}};
  out.theta.reserve(m);
  for (int l = 0; l < m; ++l) {
    const Eigen::MatrixXd pulled = contract(g1.theta, g2.alpha.col(l));  // theta_k B^k_l
    out.theta.push_back(bInv * pulled * g2.a + g2.theta[l]);
  }
  return out;
}

JetGroupElement w11Inverse(const JetGroupElement& g) {
  const int m = g.m();
  const Eigen::MatrixXd alphaInv = inverseOf(g.alpha, "alpha");
  const Eigen::MatrixXd aInv = inverseOf(g.a, "a");
  JetGroupElement out{alphaInv, aInv, {}};
  out.theta.reserve(m);
  for (int l = 0; l < m; ++l)
    out.theta.push_back(-g.a * contract(g.theta, alphaInv.col(l)) * aInv);
  return out;
}

VerticalPair actionV(const JetGroupElement& g, const Eigen::VectorXd& nu, const Eigen::MatrixXd& v) {
  if (nu.size() != g.m()) throw InputError("actionV: nu has wrong dimension");
  requireSquare(v, g.a.rows(), "v");
  return {g.alpha * nu, adjointAction(g.a, Eigen::MatrixXd(v + contract(g.theta, nu)))};
}

Eigen::MatrixXd actionVertical(const JetGroupElement& g, const Eigen::MatrixXd& v) {
  requireSquare(v, g.a.rows(), "v");
  return adjointAction(g.a, v);
}

VerticalPair actionTau(const JetGroupElement& g, const Eigen::VectorXd& nu, const Eigen::MatrixXd& v) {
  const auto n = g.a.rows();
  const double off = (g.a - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (off > 1e-12) throw PreconditionError("actionTau: element is not in the kernel (a != I)", off);
  if (nu.size() != g.m()) throw InputError("actionTau: nu has wrong dimension");
  requireSquare(v, n, "v");
  return {g.alpha * nu, v + contract(g.theta, nu)};
}

JetGroupElement randomJetElement(int m, const GroupDescriptor& desc, std::mt19937_64& rng) {
  JetGroupElement g;
  g.alpha = GroupDescriptor::general(m).randomElement(rng);
  g.a = desc.randomElement(rng);
  for (int l = 0; l < m; ++l) g.theta.push_back(desc.randomAlgebraElement(rng));
  return g;
}

JetGroupElement compositionOracle(const JetGroupElement& g1, const JetGroupElement& g2, double h) {
  checkCompatible(g1, g2);
  const int m = g1.m();
  auto alpha = [](const JetGroupElement& g, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return g.alpha * x;
  };
  auto groupMap = [](const JetGroupElement& g, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return g.a * contract(g.theta, x).exp();
  };
  // (alpha o beta)(x) and c(x) = a(beta(x)) b(x)
  auto composedFrame = [&](const Eigen::VectorXd& x) { return alpha(g1, alpha(g2, x)); };
  auto composedGroup = [&](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(groupMap(g1, alpha(g2, x)) * groupMap(g2, x));
  };

  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(m);
  JetGroupElement out;
  out.alpha.resize(m, m);
  out.a = composedGroup(origin);
  const Eigen::MatrixXd cInv = inverseOf(out.a, "a");
  for (int l = 0; l < m; ++l) {
    const Eigen::VectorXd step = h * Eigen::VectorXd::Unit(m, l);
    out.alpha.col(l) = (composedFrame(step) - composedFrame(-step)) / (2.0 * h);
    out.theta.push_back(cInv * (composedGroup(step) - composedGroup(-step)) / (2.0 * h));
  }
  return out;
}

double distance(const JetGroupElement& g1, const JetGroupElement& g2) {
  checkCompatible(g1, g2);
  double d = std::max((g1.alpha - g2.alpha).cwiseAbs().maxCoeff(),
                      (g1.a - g2.a).cwiseAbs().maxCoeff());
  for (std::size_t l = 0; l < g1.theta.size(); ++l)
    d = std::max(d, (g1.theta[l] - g2.theta[l]).cwiseAbs().maxCoeff());
  return d;
}

double distance(const VerticalPair& x, const VerticalPair& y) {
  return std::max((x.nu - y.nu).cwiseAbs().maxCoeff(), (x.v - y.v).cwiseAbs().maxCoeff());
}

}  // namespace spinlie
