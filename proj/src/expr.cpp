#include "spinlie/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>

namespace spinlie {

namespace {

using Op = Expression::Op;
using Names = std::shared_ptr<const std::vector<std::string>>;

class Parser {
 public:
  Parser(std::string_view src, Names names) : src_(src), names_(std::move(names)) {}

  Expression parseAll() {
    skipSpace();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expression e = parseSum();
    skipSpace();
    if (pos_ != src_.size())
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skipSpace() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skipSpace();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    if (pos_ >= src_.size()) throw ParseError(what + ", found end of input", pos_);
    throw ParseError(what + ", found '" + std::string(1, src_[pos_]) + "'", pos_);
  }

  Expression parseSum() {
    Expression lhs = parseProduct();
    for (;;) {
      if (accept('+'))
        lhs = Expression::binary(Op::Add, lhs, parseProduct());
      else if (accept('-'))
        lhs = Expression::binary(Op::Sub, lhs, parseProduct());
      else
        return lhs;
    }
  }

  Expression parseProduct() {
    Expression lhs = parseUnary();
    for (;;) {
      if (accept('*'))
        lhs = Expression::binary(Op::Mul, lhs, parseUnary());
      else if (accept('/'))
        lhs = Expression::binary(Op::Div, lhs, parseUnary());
      else
        return lhs;
    }
  }

  Expression parseUnary() {
    if (accept('-')) return Expression::unary(Op::Neg, parseUnary());
    return parsePower();
  }

  Expression parsePower() {
    Expression base = parsePrimary();
    if (!accept('^')) return base;
    skipSpace();
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    skipSpace();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      throw ParseError("exponent must be an integer", start);
    int exponent = 0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, exponent);
    if (ec != std::errc() || exponent > 64) throw ParseError("exponent out of range", start);
    return Expression::power(base, negative ? -exponent : exponent);
  }

  Expression parsePrimary() {
    skipSpace();
    if (pos_ >= src_.size()) fail("expected operand");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parseSum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parseIdentifier();
    fail("expected operand");
  }

  Expression parseNumber() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent in number", start);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError("malformed number", start);
    return Expression::constant(value, names_);
  }

  Expression parseIdentifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < names_->size(); ++i)
      if ((*names_)[i] == name) return Expression::variable(static_cast<int>(i), names_);

    static constexpr std::pair<std::string_view, Op> kFunctions[] = {
        {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"log", Op::Log}};
    for (const auto& [fname, op] : kFunctions) {
      if (name != fname) continue;
      if (!accept('(')) fail("expected '(' after " + name);
      Expression arg = parseSum();
      if (!accept(')')) fail("expected ')'");
      return Expression::unary(op, arg);
    }
    if (name == "pi") return Expression::constant(std::numbers::pi, names_);
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  Names names_;
  std::size_t pos_ = 0;
};

std::string formatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool nodesEqual(const Expression::Node& a, const Expression::Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Constant:
      return a.value == b.value;
    case Op::Variable:
      return a.index == b.index;
    case Op::Pow:
      return a.index == b.index && nodesEqual(*a.lhs, *b.lhs);
    default:
      break;
  }
  if (!nodesEqual(*a.lhs, *b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  return !a.rhs || nodesEqual(*a.rhs, *b.rhs);
}

}  // namespace

Expression Expression::constant(double value, Names names) {
  auto node = std::make_shared<Node>();
  node->op = Op::Constant;
  node->value = value;
  return Expression(std::move(node), std::move(names));
}

Expression Expression::variable(int index, Names names) {
  if (!names || index < 0 || index >= static_cast<int>(names->size()))
    throw InputError("variable index out of range");
  auto node = std::make_shared<Node>();
  node->op = Op::Variable;
  node->index = index;
  return Expression(std::move(node), std::move(names));
}

Expression Expression::unary(Op op, const Expression& arg) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = arg.root_;
  return Expression(std::move(node), arg.names_);
}

Expression Expression::binary(Op op, const Expression& lhs, const Expression& rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = lhs.root_;
  node->rhs = rhs.root_;
  return Expression(std::move(node), lhs.names_);
}

Expression Expression::power(const Expression& base, int exponent) {
  auto node = std::make_shared<Node>();
  node->op = Op::Pow;
  node->index = exponent;
  node->lhs = base.root_;
  return Expression(std::move(node), base.names_);
}

void Expression::checkDim(int n) const {
  if (!root_) throw InputError("evaluating an empty expression");
  if (n != dim())
    throw InputError("point has " + std::to_string(n) + " coordinates, expression expects " +
                     std::to_string(dim()));
}

std::string Expression::nodeString(const Node& node) const {
  switch (node.op) {
    case Op::Constant:
      return formatNumber(node.value);
    case Op::Variable:
      return (*names_)[node.index];
    case Op::Add:
      return "(" + nodeString(*node.lhs) + " + " + nodeString(*node.rhs) + ")";
    case Op::Sub:
      return "(" + nodeString(*node.lhs) + " - " + nodeString(*node.rhs) + ")";
    case Op::Mul:
      return "(" + nodeString(*node.lhs) + " * " + nodeString(*node.rhs) + ")";
    case Op::Div:
      return "(" + nodeString(*node.lhs) + " / " + nodeString(*node.rhs) + ")";
    case Op::Neg:
      return "(-" + nodeString(*node.lhs) + ")";
    case Op::Pow:
      return "(" + nodeString(*node.lhs) + "^" + std::to_string(node.index) + ")";
    case Op::Sqrt:
      return "sqrt(" + nodeString(*node.lhs) + ")";
    case Op::Sin:
      return "sin(" + nodeString(*node.lhs) + ")";
    case Op::Cos:
      return "cos(" + nodeString(*node.lhs) + ")";
    case Op::Exp:
      return "exp(" + nodeString(*node.lhs) + ")";
    case Op::Log:
      return "log(" + nodeString(*node.lhs) + ")";
  }
  return {};
}

std::string Expression::toString() const { return root_ ? nodeString(*root_) : std::string(); }

void Expression::domainError(const Node& node, const std::string& what) const {
  throw DomainError(what + " in " + nodeString(node));
}

bool structurallyEqual(const Expression& a, const Expression& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return a.dim() == b.dim() && nodesEqual(*a.root_, *b.root_);
}

Expression parse(std::string_view source, std::span<const std::string> coordNames) {
  return parse(source, std::make_shared<const std::vector<std::string>>(coordNames.begin(),
                                                                        coordNames.end()));
}

Expression parse(std::string_view source, Names coordNames) {
  if (!coordNames || coordNames->empty()) throw InputError("no coordinates declared");
  return Parser(source, std::move(coordNames)).parseAll();
}

ADVector seedPoint(const Point& x) {
  const auto m = x.size();
  ADVector out(m);
  for (Eigen::Index i = 0; i < m; ++i)
    out[i] = ADScalar(x[i], Eigen::VectorXd::Unit(m, i));
  return out;
}

double evalValue(const Expression& e, const Point& pt) { return e.evaluate<double>(pt); }

DualValue evalDual(const Expression& e, const Point& pt) {
  const ADScalar r = e.evaluate<ADScalar>(seedPoint(pt));
  DualValue out{r.value(), r.derivatives()};
  if (out.grad.size() != pt.size()) out.grad = Eigen::VectorXd::Zero(pt.size());
  return out;
}

Eigen::VectorXd fdGradient(const Expression& e, const Point& pt, double h) {
  if (!(h > 0.0)) throw InputError("fdGradient: step must be positive");
  Eigen::VectorXd grad(pt.size());
  for (Eigen::Index mu = 0; mu < pt.size(); ++mu) {
    Point plus = pt, minus = pt;
    plus[mu] += h;
    minus[mu] -= h;
    grad[mu] = (evalValue(e, plus) - evalValue(e, minus)) / (2.0 * h);
  }
  return grad;
}

}  // namespace spinlie
