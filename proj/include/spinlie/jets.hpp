#ifndef SPINLIE_JETS_HPP
#define SPINLIE_JETS_HPP

#include <Eigen/Dense>

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "spinlie/liealg.hpp"

namespace spinlie {

/// Matrix group G in GL(n) with membership tests for G and Lie(G).
class GroupDescriptor {
 public:
  enum class Kind { General, Special, Orthogonal };

  static GroupDescriptor general(int n);
  static GroupDescriptor special(int n);
  static GroupDescriptor orthogonal(const Signature& sig);
  /// "GL(n)", "SL(n)", "SO(n)" or "SO(p,q)".
  static GroupDescriptor parse(std::string_view name);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  std::string name() const;

  bool contains(const Eigen::MatrixXd& a, double tol = 1e-10) const;
  bool algebraContains(const Eigen::MatrixXd& v, double tol = 1e-10) const;

  Eigen::MatrixXd randomAlgebraElement(std::mt19937_64& rng, double scale = 0.5) const;
  Eigen::MatrixXd randomElement(std::mt19937_64& rng, double scale = 0.5) const;

 private:
  GroupDescriptor(Kind kind, int n, Signature sig) : kind_(kind), n_(n), sig_(sig) {}

  Kind kind_;
  int n_;
  Signature sig_;
};

/// Element (j0 alpha, j0 a) of W^{1,1}_m G: alpha in GL(m), a = f(0) in G and
/// theta_l = d_l (a^{-1} f(x))|_0 in Lie(G).
struct JetGroupElement {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd a;
  std::vector<Eigen::MatrixXd> theta;

  int m() const { return static_cast<int>(alpha.rows()); }
};

/// Throws InputError on shape errors, PreconditionError when alpha or a is
/// singular or a component leaves G / Lie(G).
void validate(const JetGroupElement& g, const GroupDescriptor& desc);

JetGroupElement w11Identity(int m, const GroupDescriptor& desc);

/// (A, a, theta)(B, b, phi) = (AB, ab, Ad_{b^{-1}}(theta_k B^k_l) + phi_l).
JetGroupElement w11Multiply(const JetGroupElement& g1, const JetGroupElement& g2);
JetGroupElement w11Inverse(const JetGroupElement& g);

/// Element of R^m + Lie(G).
struct VerticalPair {
  Eigen::VectorXd nu;
  Eigen::MatrixXd v;
};

/// (alpha nu, Ad_a(v + theta_j nu^j)).
VerticalPair actionV(const JetGroupElement& g, const Eigen::VectorXd& nu, const Eigen::MatrixXd& v);
/// Ad_a(v); the jet coordinates theta do not enter.
Eigen::MatrixXd actionVertical(const JetGroupElement& g, const Eigen::MatrixXd& v);
/// (alpha nu, v + theta_j nu^j) on the kernel subgroup a = I; PreconditionError otherwise.
VerticalPair actionTau(const JetGroupElement& g, const Eigen::VectorXd& nu, const Eigen::MatrixXd& v);

JetGroupElement randomJetElement(int m, const GroupDescriptor& desc, std::mt19937_64& rng);

/// Composes the representatives alpha(x) = A x, a(x) = a0 exp(x^l theta_l) of
/// both factors explicitly and reads off the product jet by central differences.
JetGroupElement compositionOracle(const JetGroupElement& g1, const JetGroupElement& g2,
                                  double h = 1e-5);

/// Max-norm distance over all components.
double distance(const JetGroupElement& g1, const JetGroupElement& g2);
double distance(const VerticalPair& x, const VerticalPair& y);

}  // namespace spinlie

#endif  // SPINLIE_JETS_HPP
