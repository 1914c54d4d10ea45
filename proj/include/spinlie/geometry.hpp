#ifndef SPINLIE_GEOMETRY_HPP
#define SPINLIE_GEOMETRY_HPP

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "spinlie/expr.hpp"
#include "spinlie/liealg.hpp"

namespace spinlie {

/// Three-index array stored as m slices; the slice index is documented per field.
using Rank3 = std::vector<Eigen::MatrixXd>;

struct VectorFieldSpec {
  std::string name;
  std::vector<Expression> components;  ///< xi^mu
};

/// Complex spinor components, psi_i = re_i + i im_i.
struct SpinorFieldSpec {
  std::string name;
  std::vector<Expression> re;
  std::vector<Expression> im;
};

/// Tensor density of rank (upper, lower) and weight w. Components are stored
/// row-major over (upper indices..., lower indices...).
struct DensityFieldSpec {
  std::string name;
  int upper = 0;
  int lower = 0;
  double weight = 0.0;
  std::vector<Expression> components;
};

/// One chart: signature, coordinates, metric and named fields.
struct GeometrySpec {
  Signature sig;
  std::shared_ptr<const std::vector<std::string>> coordNames;
  std::vector<Expression> metric;                 ///< m*m row-major, g_{mu nu} == g_{nu mu}
  std::vector<std::pair<double, double>> domain;  ///< sampling box per coordinate
  std::vector<VectorFieldSpec> vectors;
  std::vector<SpinorFieldSpec> spinors;
  std::vector<DensityFieldSpec> densities;

  int dim() const { return sig.dim(); }
  int spinorDim() const { return 1 << (dim() / 2); }
  const Expression& metricEntry(int mu, int nu) const { return metric[mu * dim() + nu]; }

  const VectorFieldSpec& vectorField(const std::string& name) const;
  const SpinorFieldSpec& spinorField(const std::string& name) const;
  const DensityFieldSpec& densityField(const std::string& name) const;

  /// Parses an expression against this chart's coordinates.
  Expression expr(std::string_view source) const { return parse(source, coordNames); }
};

/// Builds a spec from the upper triangle (row by row, diagonal included)
/// of metric source strings. Throws InputError on malformed input.
GeometrySpec makeGeometry(const Signature& sig, std::vector<std::string> coordNames,
                          const std::vector<std::string>& metricUpper);

VectorFieldSpec makeVectorField(const GeometrySpec& spec, std::string name,
                                const std::vector<std::string>& components);
SpinorFieldSpec makeSpinorField(const GeometrySpec& spec, std::string name,
                                const std::vector<std::string>& re,
                                const std::vector<std::string>& im);
DensityFieldSpec makeDensityField(const GeometrySpec& spec, std::string name, int upper,
                                  int lower, double weight,
                                  const std::vector<std::string>& components);

/// Throws InputError if field shapes disagree with the chart.
void validate(const GeometrySpec& spec);

/// Value and first derivatives of a vector field at a point.
struct VectorJet {
  Eigen::VectorXd value;     ///< xi^rho
  Eigen::MatrixXd jacobian;  ///< (rho, nu) -> d_nu xi^rho
};

/// Value and first derivatives of a spinor field at a point.
struct SpinorJet {
  Eigen::VectorXcd value;  ///< psi_i
  Eigen::MatrixXcd grad;   ///< (i, mu) -> d_mu psi_i
};

VectorJet evalVectorField(const VectorFieldSpec& field, const Point& pt);
SpinorJet evalSpinorField(const SpinorFieldSpec& field, const Point& pt);

struct MetricAt {
  Eigen::MatrixXd g;
  Eigen::MatrixXd gInv;
  Rank3 dg;  ///< dg[rho](mu, nu) = d_rho g_{mu nu}
};

/// Orthonormal frame e_a = e_a^mu d_mu. Column a of `e` is the frame vector e_a.
struct FrameAt {
  Eigen::MatrixXd e;     ///< (mu, a) -> e_a^mu
  Eigen::MatrixXd eInv;  ///< (a, mu) -> dual coframe e~^a_mu
  Rank3 de;              ///< de[nu](mu, a) = d_nu e_a^mu
};

struct ChristoffelAt {
  Rank3 gamma;  ///< gamma[rho](mu, nu) = Gamma^rho_{mu nu}
};

struct SpinConnectionAt {
  Rank3 mixed;    ///< mixed[mu](a, b) = omega_mu^a_b = e~^a_rho (d_mu e_b^rho + Gamma^rho_{mu s} e_b^s)
  Rank3 lowered;  ///< lowered[mu](a, b) = eta_{ac} omega_mu^c_b, antisymmetric in (a, b)
};

/// Throws PreconditionError for singular metrics or a signature other than spec.sig.
MetricAt metricAt(const GeometrySpec& spec, const Point& pt);

/// Signature-ordered Gram-Schmidt frame with derivatives carried by dual numbers.
FrameAt orthonormalFrame(const GeometrySpec& spec, const Point& pt);

ChristoffelAt christoffel(const MetricAt& metric);
ChristoffelAt christoffel(const GeometrySpec& spec, const Point& pt);

SpinConnectionAt spinConnection(const FrameAt& frame, const ChristoffelAt& gamma,
                                const Signature& sig);
SpinConnectionAt spinConnection(const GeometrySpec& spec, const Point& pt);

/// (mu, nu) -> nabla_mu xi_nu of the lowered field.
Eigen::MatrixXd covariantDerivativeCovector(const MetricAt& metric, const ChristoffelAt& gamma,
                                            const VectorJet& xi);
Eigen::MatrixXd covariantDerivativeCovector(const GeometrySpec& spec,
                                            const VectorFieldSpec& xi, const Point& pt);

/// Everything pointwise that the Lie-derivative formulas consume.
struct LocalGeometry {
  Point x;
  Signature sig;
  MetricAt metric;
  FrameAt frame;
  ChristoffelAt christoffel;
  SpinConnectionAt spin;
};

LocalGeometry localGeometry(const GeometrySpec& spec, const Point& pt);

}  // namespace spinlie

#endif  // SPINLIE_GEOMETRY_HPP
