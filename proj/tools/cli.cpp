#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "spinlie/clifford.hpp"
#include "spinlie/geometry_file.hpp"
#include "spinlie/jets.hpp"
#include "spinlie/liederiv.hpp"
#include "spinlie/lifts.hpp"
#include "spinlie/verify.hpp"

namespace spinlie::cli {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- formatting

/// Snaps to the 1e-12 grid so reports are byte-stable; -0 prints as 0.
json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  double r = std::round(v * 1e12) / 1e12;
  if (r == 0.0) r = 0.0;
  return r;
}

json toJson(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json toJson(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) out.push_back(toJson(Eigen::VectorXd(M.row(i).transpose())));
  return out;
}

json toJson(const SpinorValue& psi) {
  return json{{"re", toJson(Eigen::VectorXd(psi.real()))}, {"im", toJson(Eigen::VectorXd(psi.imag()))}};
}

double maxAbs(const Eigen::MatrixXd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }
double maxAbs(const SpinorValue& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// ------------------------------------------------------------------- parsing

double parseReal(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw InputError("not a real number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

Eigen::VectorXd parseVector(std::string_view s) {
  const auto parts = split(s, ',');
  Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parseReal(parts[i]);
  return v;
}

/// "a,b;c,d" -> [[a, b], [c, d]]
Eigen::MatrixXd parseMatrix(std::string_view s) {
  const auto rows = split(s, ';');
  std::vector<Eigen::VectorXd> parsed;
  for (const auto r : rows) parsed.push_back(parseVector(r));
  const auto cols = parsed.front().size();
  Eigen::MatrixXd M(static_cast<Eigen::Index>(parsed.size()), cols);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != cols)
      throw InputError("matrix row " + std::to_string(i + 1) + " has " +
                       std::to_string(parsed[i].size()) + " entries, expected " + std::to_string(cols));
    M.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return M;
}

Signature parseSignature(std::string_view s) {
  const Eigen::VectorXd v = parseVector(s);
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
    throw InputError("signature must be two integers p,q");
  const Signature sig{static_cast<int>(v[0]), static_cast<int>(v[1])};
  validate(sig);
  return sig;
}

Eigen::MatrixXd matrixFromJson(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw InputError(std::string(what) + " must be a nested array of rows");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.front().size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != j.front().size())
      throw InputError(std::string(what) + " has ragged rows");
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number()) throw InputError(std::string(what) + " has a non-numeric entry");
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return M;
}

json parseJson(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

/// {"alpha": rows, "a": rows, "theta": [rows...]} or the word "identity".
JetGroupElement parseJetElement(const std::string& text, int dim, const GroupDescriptor& G) {
  if (text == "identity") {
    if (dim < 1) throw InputError("'identity' needs --dim");
    return w11Identity(dim, G);
  }
  const json j = parseJson(text, "jet element");
  if (!j.is_object() || !j.contains("alpha") || !j.contains("a"))
    throw InputError("jet element needs keys alpha and a");
  JetGroupElement g;
  g.alpha = matrixFromJson(j.at("alpha"), "alpha");
  g.a = matrixFromJson(j.at("a"), "a");
  if (j.contains("theta")) {
    if (!j.at("theta").is_array()) throw InputError("theta must be an array of matrices");
    for (const auto& t : j.at("theta")) g.theta.push_back(matrixFromJson(t, "theta"));
  } else {
    g.theta.assign(static_cast<std::size_t>(g.alpha.rows()), Eigen::MatrixXd::Zero(G.n(), G.n()));
  }
  validate(g, G);
  return g;
}

json toJson(const JetGroupElement& g) {
  json theta = json::array();
  for (const auto& t : g.theta) theta.push_back(toJson(t));
  return json{{"alpha", toJson(g.alpha)}, {"a", toJson(g.a)}, {"theta", theta}};
}

json toJson(const VerticalPair& p) { return json{{"nu", toJson(p.nu)}, {"v", toJson(p.v)}}; }

// ------------------------------------------------------------------ commands

struct Args {
  std::vector<std::string> raw;
  // decompose
  std::string matrix, signature;
  // lie
  std::string file, object, field, point, flavour, frameComponents, vertical;
  bool crossCheck = false;
  // verify
  std::uint64_t seed = 1;
  int samples = 10;
  // jet
  std::string group, op, g1, g2, nu, v;
  int dim = 0;
  bool oracle = false;
};

json echo(const std::string& command, const Args& a) {
  json cmd = json::array();
  cmd.push_back(command);
  for (const auto& s : a.raw) cmd.push_back(s);
  return cmd;
}

int cmdDecompose(const Args& a, json& report) {
  const Signature sig = parseSignature(a.signature);
  const Eigen::MatrixXd M = parseMatrix(a.matrix);
  if (M.rows() != sig.dim() || M.cols() != sig.dim())
    throw InputError("matrix is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                     ", signature " + toString(sig) + " needs " + std::to_string(sig.dim()) + "x" +
                     std::to_string(sig.dim()));
  const auto split = decomposeGL(M, sig);
  const double residual = maxAbs(Eigen::MatrixXd(split.reconstruct() - M));
  report["inputs"] = {{"matrix", toJson(M)}, {"signature", {sig.p, sig.q}}};
  report["outputs"] = {{"antisymmetric", toJson(split.antisym)},
                       {"symmetric_traceless", toJson(split.symTraceless)},
                       {"trace_coefficient", number(split.traceCoeff)}};
  report["residuals"] = {{"reconstruction", number(residual)}};
  report["pass"] = residual <= 1e-12;
  return report["pass"].get<bool>() ? kOk : kVerificationFailed;
}

Point parsePoint(const GeometrySpec& spec, const std::string& text) {
  const Point x = parseVector(text);
  if (x.size() != spec.dim())
    throw InputError("point has " + std::to_string(x.size()) + " coordinates, chart has " +
                     std::to_string(spec.dim()));
  for (int mu = 0; mu < spec.dim(); ++mu)
    if (x[mu] < spec.domain[mu].first || x[mu] > spec.domain[mu].second)
      throw PreconditionError("point lies outside the chart domain in coordinate " +
                              (*spec.coordNames)[mu]);
  return x;
}

/// Name lookups fail with a precondition error: the file parsed, but does not
/// provide what was asked for.
template <typename F>
decltype(auto) lookup(F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw PreconditionError(e.what());
  }
}

json tensorJson(const TensorValue& t) {
  return json{{"upper", t.upper}, {"lower", t.lower}, {"weight", number(t.weight)},
              {"components", toJson(t.components)}};
}

int cmdLie(const Args& a, json& report) {
  const GeometrySpec spec = loadGeometry(a.file);
  const Point x = parsePoint(spec, a.point);
  report["inputs"] = {{"file", a.file},   {"signature", {spec.sig.p, spec.sig.q}},
                      {"object", a.object}, {"field", a.field},
                      {"point", toJson(x)}, {"flavour", a.flavour}};
  const std::string& fl = a.flavour;
  const bool needsField = fl != "spinor-gauge";
  if (needsField && a.field.empty()) throw InputError("--field is required for flavour " + fl);
  auto xi = [&]() -> const VectorFieldSpec& {
    return lookup([&]() -> const VectorFieldSpec& { return spec.vectorField(a.field); });
  };
  auto psi = [&]() -> const SpinorFieldSpec& {
    return lookup([&]() -> const SpinorFieldSpec& { return spec.spinorField(a.object); });
  };
  json residuals = json::object();
  bool pass = true;
  auto crossCheck = [&](const char* name, double residual, double threshold) {
    residuals[name] = number(residual);
    pass = pass && residual <= threshold;
  };
  auto relGap = [](const SpinorValue& u, const SpinorValue& w) {
    return maxAbs(SpinorValue(u - w)) / std::max(1.0, maxAbs(w));
  };

  if (fl == "natural" || fl == "density") {
    const DensityFieldSpec t = a.object == "metric"
                                   ? metricTensorField(spec)
                                   : lookup([&] { return spec.densityField(a.object); });
    const TensorValue value = fl == "natural" ? lieTensor(spec, xi(), t, x) : lieDensity(spec, xi(), t, x);
    report["outputs"] = {{"lie_derivative", tensorJson(value)}};
    if (a.crossCheck) {
      const TensorValue oracle = flowLieDensityOracle(spec, xi(), t, x);
      crossCheck("flow_oracle", maxAbs(Eigen::MatrixXd(value.components - oracle.components)) /
                                    std::max(1.0, maxAbs(Eigen::MatrixXd(value.components))),
                 1e-4);
    }
  } else if (fl == "spinor-kosmann" || fl == "spinor-covariant") {
    const SpinorValue kos = lieSpinorKosmann(spec, xi(), psi(), x);
    const SpinorValue cov = lieSpinorCovariant(spec, xi(), psi(), x);
    report["outputs"] = {{"lie_derivative", toJson(fl == "spinor-kosmann" ? kos : cov)}};
    if (a.crossCheck) crossCheck("kosmann_vs_covariant", relGap(kos, cov), 1e-8);
  } else if (fl == "spinor-gauge") {
    if (a.frameComponents.empty() || a.vertical.empty())
      throw InputError("spinor-gauge needs --frame-components and --vertical");
    InvariantFieldComponents comps{parseVector(a.frameComponents), parseMatrix(a.vertical)};
    if (comps.xiFrame.size() != spec.dim() || comps.vertical.rows() != spec.dim() ||
        comps.vertical.cols() != spec.dim())
      throw InputError("frame components and vertical part must match the chart dimension");
    report["inputs"]["frame_components"] = toJson(comps.xiFrame);
    report["inputs"]["vertical"] = toJson(comps.vertical);
    report["outputs"] = {{"lie_derivative", toJson(lieSpinorGaugeNatural(spec, comps, psi(), x))}};
  } else if (fl == "lichnerowicz") {
    const SpinorValue lich = lichnerowicz(spec, xi(), psi(), x);
    report["outputs"] = {{"lie_derivative", toJson(lich)}};
    if (a.crossCheck) crossCheck("lichnerowicz_vs_kosmann", relGap(lich, lieSpinorKosmann(spec, xi(), psi(), x)), 1e-9);
  } else if (fl == "reductive-metric") {
    const Eigen::MatrixXd value = reductiveMetricLie(spec, xi(), x);
    report["outputs"] = {{"lie_derivative", toJson(value)}};
    crossCheck("max_abs", maxAbs(value), 1e-8);
  } else if (fl == "flow-oracle") {
    const SpinorValue flow = flowLieSpinorOracle(spec, xi(), psi(), x);
    report["outputs"] = {{"lie_derivative", toJson(flow)}};
    if (a.crossCheck) crossCheck("flow_vs_kosmann", relGap(flow, lieSpinorKosmann(spec, xi(), psi(), x)), 1e-3);
  } else {
    throw InputError("unknown flavour '" + fl + "'");
  }
  if (!residuals.empty()) report["residuals"] = residuals;
  report["pass"] = pass;
  return pass ? kOk : kVerificationFailed;
}

int cmdVerify(const Args& a, json& report) {
  VerifyOptions opt;
  opt.seed = a.seed;
  opt.samples = a.samples;
  if (a.samples < 0) throw InputError("--samples must be non-negative");
  if (!a.file.empty()) opt.fixtures.push_back({a.file, loadGeometry(a.file), {}});
  report["inputs"] = {{"file", a.file.empty() ? json("builtin") : json(a.file)},
                      {"seed", a.seed},
                      {"samples", a.samples}};
  const VerifySummary summary = runVerify(opt);
  json suites = json::array();
  for (const auto& s : summary.suites)
    suites.push_back({{"module", s.module},
                      {"suite", s.name},
                      {"samples", s.samples},
                      {"max_residual", number(s.maxResidual)},
                      {"threshold", s.threshold},
                      {"pass", s.pass}});
  report["suites"] = suites;
  report["pass"] = summary.pass();
  return summary.pass() ? kOk : kVerificationFailed;
}

int cmdJet(const Args& a, json& report) {
  const GroupDescriptor G = GroupDescriptor::parse(a.group);
  const JetGroupElement g1 = parseJetElement(a.g1, a.dim, G);
  report["inputs"] = {{"group", G.name()}, {"op", a.op}, {"g1", toJson(g1)}};
  json residuals = json::object();
  bool pass = true;
  auto pairArgs = [&]() {
    if (a.nu.empty() || a.v.empty()) throw InputError("--op " + a.op + " needs --nu and --v");
    const Eigen::VectorXd nu = parseVector(a.nu);
    const Eigen::MatrixXd v = matrixFromJson(parseJson(a.v, "--v"), "v");
    if (nu.size() != g1.m()) throw InputError("nu must have " + std::to_string(g1.m()) + " entries");
    if (v.rows() != G.n() || v.cols() != G.n())
      throw InputError("v must be " + std::to_string(G.n()) + "x" + std::to_string(G.n()));
    if (!G.algebraContains(v)) throw PreconditionError("v is not in the Lie algebra of " + G.name());
    report["inputs"]["nu"] = toJson(nu);
    report["inputs"]["v"] = toJson(v);
    return std::pair{nu, v};
  };
  if (a.op == "mul") {
    if (a.g2.empty()) throw InputError("--op mul needs --g2");
    const JetGroupElement g2 = parseJetElement(a.g2, a.dim, G);
    report["inputs"]["g2"] = toJson(g2);
    const JetGroupElement prod = w11Multiply(g1, g2);
    report["outputs"] = {{"product", toJson(prod)}};
    if (a.oracle) {
      const double r = distance(prod, compositionOracle(g1, g2));
      residuals["oracle"] = number(r);
      pass = r <= 1e-6;
    }
  } else if (a.op == "inv") {
    const JetGroupElement inv = w11Inverse(g1);
    report["outputs"] = {{"inverse", toJson(inv)}};
    if (a.oracle) {
      const double r = distance(w11Multiply(g1, inv), w11Identity(g1.m(), G));
      residuals["identity"] = number(r);
      pass = r <= 1e-8;
    }
  } else if (a.op == "act-v") {
    const auto [nu, v] = pairArgs();
    report["outputs"] = {{"image", toJson(actionV(g1, nu, v))}};
  } else if (a.op == "act-vert") {
    const auto [nu, v] = pairArgs();
    (void)nu;
    report["outputs"] = {{"image", toJson(actionVertical(g1, v))}};
  } else if (a.op == "act-tau") {
    const auto [nu, v] = pairArgs();
    report["outputs"] = {{"image", toJson(actionTau(g1, nu, v))}};
  } else {
    throw InputError("unknown op '" + a.op + "'");
  }
  if (!residuals.empty()) report["residuals"] = residuals;
  report["pass"] = pass;
  return pass ? kOk : kVerificationFailed;
}

void emit(std::ostream& out, const json& report) { out << report.dump(2) << '\n'; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie derivatives of spinors on reductive G-structures"};
  app.require_subcommand(1);
  Args a;

  auto* decompose = app.add_subcommand("decompose", "split a matrix into so(p,q) + V + R I");
  decompose->add_option("--matrix", a.matrix, "rows separated by ';', entries by ','")->required();
  decompose->add_option("--signature", a.signature, "p,q")->required();

  auto* lie = app.add_subcommand("lie", "Lie derivative of a field at a point");
  lie->add_option("--file", a.file, "geometry file")->required();
  lie->add_option("--object", a.object, "spinor, tensor or density field name ('metric' for g)");
  lie->add_option("--field", a.field, "vector field name");
  lie->add_option("--point", a.point, "comma-separated coordinates")->required();
  lie->add_option("--flavour", a.flavour)
      ->required()
      ->check(CLI::IsMember({"natural", "density", "spinor-kosmann", "spinor-covariant",
                             "spinor-gauge", "lichnerowicz", "reductive-metric", "flow-oracle"}));
  lie->add_option("--frame-components", a.frameComponents, "xi^a for spinor-gauge");
  lie->add_option("--vertical", a.vertical, "antisymmetric Xi_ab for spinor-gauge, rows ';'");
  lie->add_flag("--cross-check", a.crossCheck, "append the residual against the paired formula");

  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--file", a.file, "geometry file (default: builtin fixtures)");
  verify->add_option("--seed", a.seed);
  verify->add_option("--samples", a.samples);

  auto* jet = app.add_subcommand("jet", "operations in the jet group W^{1,1}_m G");
  jet->add_option("--group", a.group, "GL(n), SL(n), SO(n) or SO(p,q)")->required();
  jet->add_option("--op", a.op)->required()->check(
      CLI::IsMember({"mul", "inv", "act-v", "act-vert", "act-tau"}));
  jet->add_option("--g1", a.g1, "JSON {alpha, a, theta} or 'identity'")->required();
  jet->add_option("--g2", a.g2);
  jet->add_option("--dim", a.dim, "m, for 'identity'");
  jet->add_option("--nu", a.nu, "comma-separated vector");
  jet->add_option("--v", a.v, "JSON matrix in Lie(G)");
  jet->add_flag("--oracle", a.oracle, "compare with explicit composition of representatives");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  a.raw.assign(args.begin() + 1, args.end());
  json report;
  report["command"] = echo(command, a);
  auto fail = [&](const char* kind, const std::exception& e, int code, const double* residual) {
    json error{{"kind", kind}, {"message", e.what()}};
    if (residual) error["residual"] = number(*residual);
    report["error"] = error;
    report["pass"] = false;
    emit(out, report);
    err << "error: " << e.what() << '\n';
    return code;
  };
  try {
    int code = kOk;
    if (command == "decompose") code = cmdDecompose(a, report);
    else if (command == "lie") code = cmdLie(a, report);
    else if (command == "verify") code = cmdVerify(a, report);
    else code = cmdJet(a, report);
    emit(out, report);
    return code;
  } catch (const InputError& e) {
    return fail("input", e, kInputError, nullptr);
  } catch (const PreconditionError& e) {
    const double r = e.residual();
    return fail("precondition", e, kPrecondition, r != 0.0 ? &r : nullptr);
  }
}

}  // namespace spinlie::cli
