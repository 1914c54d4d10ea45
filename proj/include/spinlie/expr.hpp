#ifndef SPINLIE_EXPR_HPP
#define SPINLIE_EXPR_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinlie/errors.hpp"

namespace spinlie {

/// Forward-mode carrier: value plus gradient in the chart coordinates.
using ADScalar = Eigen::AutoDiffScalar<Eigen::VectorXd>;
using ADVector = Eigen::Matrix<ADScalar, Eigen::Dynamic, 1>;
using ADMatrix = Eigen::Matrix<ADScalar, Eigen::Dynamic, Eigen::Dynamic>;

using Point = Eigen::VectorXd;

struct DualValue {
  double value = 0.0;
  Eigen::VectorXd grad;  ///< d/dx^mu, one entry per chart coordinate
};

/// Seeds x as independent variables: x[mu] carries the unit gradient e_mu.
ADVector seedPoint(const Point& x);

inline double valueOf(double x) { return x; }
inline double valueOf(const ADScalar& x) { return x.value(); }

/// Immutable scalar expression over chart coordinates.
class Expression {
 public:
  enum class Op { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Sin, Cos, Exp, Log };

  struct Node {
    Op op = Op::Constant;
    double value = 0.0;  // Constant
    int index = 0;       // Variable: coordinate index; Pow: exponent
    std::shared_ptr<const Node> lhs, rhs;
  };

  Expression() = default;

  static Expression constant(double value, std::shared_ptr<const std::vector<std::string>> names);
  static Expression variable(int index, std::shared_ptr<const std::vector<std::string>> names);
  static Expression unary(Op op, const Expression& arg);
  static Expression binary(Op op, const Expression& lhs, const Expression& rhs);
  static Expression power(const Expression& base, int exponent);

  bool empty() const { return root_ == nullptr; }
  int dim() const { return names_ ? static_cast<int>(names_->size()) : 0; }
  const Node& root() const { return *root_; }
  const std::vector<std::string>& coordNames() const { return *names_; }
  std::shared_ptr<const std::vector<std::string>> sharedNames() const { return names_; }

  /// Evaluates at x; Scalar is double or ADScalar.
  template <typename Scalar>
  Scalar evaluate(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
    checkDim(static_cast<int>(x.size()));
    return eval<Scalar>(*root_, x);
  }

  /// Fully parenthesized source text that parses back to the same tree.
  std::string toString() const;

  friend bool structurallyEqual(const Expression& a, const Expression& b);

 private:
  Expression(std::shared_ptr<const Node> root,
             std::shared_ptr<const std::vector<std::string>> names)
      : root_(std::move(root)), names_(std::move(names)) {}

  void checkDim(int n) const;
  std::string nodeString(const Node& node) const;
  [[noreturn]] void domainError(const Node& node, const std::string& what) const;

  template <typename Scalar>
  Scalar eval(const Node& node, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const;

  std::shared_ptr<const Node> root_;
  std::shared_ptr<const std::vector<std::string>> names_;
};

bool structurallyEqual(const Expression& a, const Expression& b);

/// Parses `source` with the given coordinate names. Grammar: + - * / with the
/// usual precedence, unary minus binding looser than `^`, integer exponents
/// only, functions sqrt sin cos exp log, the constant `pi`.
Expression parse(std::string_view source, std::span<const std::string> coordNames);
Expression parse(std::string_view source,
                 std::shared_ptr<const std::vector<std::string>> coordNames);

double evalValue(const Expression& e, const Point& pt);
DualValue evalDual(const Expression& e, const Point& pt);
/// Central differences (e(pt + h e_mu) - e(pt - h e_mu)) / 2h.
Eigen::VectorXd fdGradient(const Expression& e, const Point& pt, double h);

// ---------------------------------------------------------------------------

namespace detail {

template <typename Scalar>
Scalar intPow(const Scalar& base, int n) {
  Scalar result = Scalar(1.0) + 0.0 * base;
  Scalar factor = base;
  unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
  while (k) {
    if (k & 1u) result = result * factor;
    k >>= 1u;
    if (k) factor = factor * factor;
  }
  return n < 0 ? Scalar(1.0) / result : result;
}

}  // namespace detail

template <typename Scalar>
Scalar Expression::eval(const Node& node,
                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (node.op) {
    case Op::Constant:
      // Multiplying by x[0] keeps AD derivative vectors sized consistently.
      return Scalar(node.value) + 0.0 * x[0];
    case Op::Variable:
      return x[node.index];
    case Op::Add:
      return eval<Scalar>(*node.lhs, x) + eval<Scalar>(*node.rhs, x);
    case Op::Sub:
      return eval<Scalar>(*node.lhs, x) - eval<Scalar>(*node.rhs, x);
    case Op::Mul:
      return eval<Scalar>(*node.lhs, x) * eval<Scalar>(*node.rhs, x);
    case Op::Div: {
      const Scalar den = eval<Scalar>(*node.rhs, x);
      if (valueOf(den) == 0.0) domainError(node, "division by zero");
      return eval<Scalar>(*node.lhs, x) / den;
    }
    case Op::Neg:
      return -eval<Scalar>(*node.lhs, x);
    case Op::Pow: {
      const Scalar base = eval<Scalar>(*node.lhs, x);
      if (node.index < 0 && valueOf(base) == 0.0)
        domainError(node, "negative power of zero");
      return detail::intPow(base, node.index);
    }
    case Op::Sqrt: {
      const Scalar arg = eval<Scalar>(*node.lhs, x);
      if (valueOf(arg) < 0.0) domainError(node, "sqrt of negative value");
      return sqrt(arg);
    }
    case Op::Sin:
      return sin(eval<Scalar>(*node.lhs, x));
    case Op::Cos:
      return cos(eval<Scalar>(*node.lhs, x));
    case Op::Exp:
      return exp(eval<Scalar>(*node.lhs, x));
    case Op::Log: {
      const Scalar arg = eval<Scalar>(*node.lhs, x);
      if (valueOf(arg) <= 0.0) domainError(node, "log of non-positive value");
      return log(arg);
    }
  }
  return Scalar(0.0);
}

}  // namespace spinlie

#endif  // SPINLIE_EXPR_HPP
