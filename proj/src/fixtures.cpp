#include "spinlie/fixtures.hpp"

#include <cstdio>
#include <numbers>

namespace spinlie {

namespace {

std::vector<std::string> coordinateNames(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "(c)" so that negative coefficients stay valid operands.
std::string coeff(double v) { return "(" + num(v) + ")"; }

std::string randomComponentSource(const std::vector<std::string>& x, std::mt19937_64& rng) {
  const int m = static_cast<int>(x.size());
  std::normal_distribution<double> normal(0.0, 0.5);
  std::uniform_int_distribution<int> pick(0, m - 1);
  std::string s = num(normal(rng));
  for (int i = 0; i < m; ++i) s += " + " + coeff(normal(rng)) + "*" + x[i];
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) s += " + " + coeff(0.5 * normal(rng)) + "*" + x[i] + "*" + x[j];
  s += " + " + coeff(normal(rng)) + "*sin(" + x[pick(rng)] + ")";
  return s;
}

GeometrySpec withDomain(GeometrySpec spec, std::vector<std::pair<double, double>> domain) {
  spec.domain = std::move(domain);
  return spec;
}

}  // namespace

GeometrySpec flatGeometry(const Signature& sig) {
  const int m = sig.dim();
  std::vector<std::string> upper;
  for (int mu = 0; mu < m; ++mu)
    for (int nu = mu; nu < m; ++nu) upper.push_back(mu != nu ? "0" : sig.eta(mu) > 0 ? "1" : "-1");
  return makeGeometry(sig, coordinateNames(m), upper);
}

std::vector<Fixture> builtinFixtures() {
  std::vector<Fixture> out;
  for (Signature sig : {Signature{2, 0}, Signature{1, 1}, Signature{3, 0}, Signature{2, 1},
                        Signature{4, 0}, Signature{1, 3}})
  {
    GeometrySpec flat = flatGeometry(sig);
    auto killing = flatKillingFields(flat);
    out.push_back({"flat" + toString(sig), std::move(flat), std::move(killing)});
  }

  out.push_back({"polar", withDomain(makeGeometry({2, 0}, coordinateNames(2), {"1", "0", "x0^2"}),
                                     {{1.0, 2.0}, {0.0, 2.0 * std::numbers::pi}}), {}});
  out.push_back({"conformal(2,0)",
                 makeGeometry({2, 0}, coordinateNames(2), {"exp(2*x0)", "0", "exp(2*x0)"}), {}});
  out.push_back({"conformal(1,1)",
                 makeGeometry({1, 1}, coordinateNames(2), {"exp(2*x0)", "0", "-exp(2*x0)"}), {}});
  out.push_back({"skew(2,0)", makeGeometry({2, 0}, coordinateNames(2),
                                           {"1 + x0^2", "x0*x1", "1 + x1^2"}), {}});
  out.push_back({"skew(1,1)", makeGeometry({1, 1}, coordinateNames(2),
                                           {"1 + x1^2/4", "x0/3", "-1"}), {}});
  out.push_back({"schwarzschild",
                 withDomain(makeGeometry({1, 3}, coordinateNames(4),
                                         {"1 - 2/x1", "0", "0", "0",           //
                                          "-1/(1 - 2/x1)", "0", "0",           //
                                          "-x1^2", "0",                        //
                                          "-x1^2*sin(x2)^2"}),
                            {{-1.0, 1.0}, {3.0, 6.0}, {0.5, 2.6}, {-1.0, 1.0}}),
                 {}});
  // d/dx1 generates the rotations of the polar and the translations of the
  // conformal charts; d/dx0 and d/dx3 the time translation and the axial
  // rotation of the Schwarzschild chart.
  auto coordinateField = [](const GeometrySpec& spec, int mu) {
    std::vector<std::string> comps(spec.dim(), "0");
    comps[mu] = "1";
    return makeVectorField(spec, "d" + std::to_string(mu), comps);
  };
  for (auto& f : out) {
    if (f.name == "polar" || f.name.starts_with("conformal"))
      f.killing.push_back(coordinateField(f.spec, 1));
    if (f.name == "schwarzschild") {
      f.killing.push_back(coordinateField(f.spec, 0));
      f.killing.push_back(coordinateField(f.spec, 3));
    }
  }
  return out;
}

std::vector<VectorFieldSpec> flatKillingFields(const GeometrySpec& spec) {
  const int m = spec.dim();
  std::vector<VectorFieldSpec> out;
  for (int a = 0; a < m; ++a) {
    std::vector<std::string> comps(m, "0");
    comps[a] = "1";
    out.push_back(makeVectorField(spec, "translation" + std::to_string(a), comps));
  }
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      std::vector<std::string> comps(m, "0");
      const std::string xa = (*spec.coordNames)[a], xb = (*spec.coordNames)[b];
      comps[a] = spec.sig.eta(b) > 0 ? xb : "-" + xb;
      comps[b] = spec.sig.eta(a) > 0 ? "-" + xa : xa;
      const bool boost = spec.sig.eta(a) != spec.sig.eta(b);
      out.push_back(makeVectorField(
          spec, (boost ? "boost" : "rotation") + std::to_string(a) + std::to_string(b), comps));
    }
  return out;
}

Point randomPoint(const GeometrySpec& spec, std::mt19937_64& rng) {
  Point x(spec.dim());
  for (int mu = 0; mu < spec.dim(); ++mu) {
    std::uniform_real_distribution<double> u(spec.domain[mu].first, spec.domain[mu].second);
    x[mu] = u(rng);
  }
  return x;
}

VectorFieldSpec randomVectorField(const GeometrySpec& spec, std::mt19937_64& rng,
                                  std::string name) {
  std::vector<std::string> comps;
  for (int mu = 0; mu < spec.dim(); ++mu) comps.push_back(randomComponentSource(*spec.coordNames, rng));
  return makeVectorField(spec, std::move(name), comps);
}

SpinorFieldSpec randomSpinorField(const GeometrySpec& spec, std::mt19937_64& rng,
                                  std::string name) {
  std::vector<std::string> re, im;
  for (int i = 0; i < spec.spinorDim(); ++i) {
    re.push_back(randomComponentSource(*spec.coordNames, rng));
    im.push_back(randomComponentSource(*spec.coordNames, rng));
  }
  return makeSpinorField(spec, std::move(name), re, im);
}

Expression randomScalarField(const GeometrySpec& spec, std::mt19937_64& rng) {
  return spec.expr(randomComponentSource(*spec.coordNames, rng));
}

Expression randomExpression(std::shared_ptr<const std::vector<std::string>> names,
                            std::mt19937_64& rng, int depth) {
  using Op = Expression::Op;
  const int m = static_cast<int>(names->size());
  std::uniform_int_distribution<int> coin(0, 1);
  if (depth <= 0 || std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    if (coin(rng)) return Expression::variable(std::uniform_int_distribution<int>(0, m - 1)(rng), names);
    return Expression::constant(std::uniform_real_distribution<double>(0.1, 2.0)(rng), names);
  }
  auto sub = [&] { return randomExpression(names, rng, depth - 1); };
  const auto one = Expression::constant(1.0, names);
  auto atLeastOne = [&](const Expression& e) {  // 1 + e^2
    return Expression::binary(Op::Add, one, Expression::power(e, 2));
  };
  switch (std::uniform_int_distribution<int>(0, 10)(rng)) {
    case 0:
      return Expression::binary(Op::Add, sub(), sub());
    case 1:
      return Expression::binary(Op::Sub, sub(), sub());
    case 2:
      return Expression::binary(Op::Mul, sub(), sub());
    case 3:
      return Expression::binary(Op::Div, sub(), atLeastOne(sub()));
    case 4:
      return Expression::unary(Op::Neg, sub());
    case 5:  // bounded bases keep deep trees finite
      if (coin(rng))
        return Expression::power(Expression::unary(Op::Sin, sub()),
                                 std::uniform_int_distribution<int>(1, 3)(rng));
      return Expression::power(atLeastOne(sub()), -std::uniform_int_distribution<int>(1, 2)(rng));
    case 6:
      return Expression::unary(Op::Sqrt, atLeastOne(sub()));
    case 7:
      return Expression::unary(Op::Sin, sub());
    case 8:
      return Expression::unary(Op::Cos, sub());
    case 9:
      return Expression::unary(Op::Exp, Expression::unary(Op::Sin, sub()));
    default:
      return Expression::unary(Op::Log, atLeastOne(sub()));
  }
}

}  // namespace spinlie
