#ifndef SPINLIE_LIEDERIV_HPP
#define SPINLIE_LIEDERIV_HPP

#include <Eigen/Dense>

#include <functional>

#include "spinlie/clifford.hpp"
#include "spinlie/geometry.hpp"
#include "spinlie/lifts.hpp"

namespace spinlie {

/// Components of a tensor density at a point, row-major over (upper..., lower...).
struct TensorValue {
  int upper = 0;
  int lower = 0;
  double weight = 0.0;
  Eigen::VectorXd components;
};

/// Value and first derivatives of every component of a tensor density.
struct TensorJet {
  int upper = 0;
  int lower = 0;
  double weight = 0.0;
  Eigen::VectorXd value;
  Eigen::MatrixXd grad;  ///< (component, mu)
};

TensorJet evalDensityField(const DensityFieldSpec& field, const Point& pt);

/// The metric as a (0,2) tensor field of weight 0.
DensityFieldSpec metricTensorField(const GeometrySpec& spec);

/// xi^rho d_rho T - sum_upper T^{..rho..} d_rho xi^i + sum_lower T_{..rho..} d_j xi^rho
/// + w (d_rho xi^rho) T.
TensorValue lieDensity(const VectorJet& xi, const TensorJet& t);
TensorValue lieDensity(const GeometrySpec& spec, const VectorFieldSpec& xi,
                       const DensityFieldSpec& t, const Point& pt);
/// Natural Lie derivative of a weight-zero tensor; InputError for w != 0.
TensorValue lieTensor(const GeometrySpec& spec, const VectorFieldSpec& xi,
                      const DensityFieldSpec& t, const Point& pt);

/// (i, mu) -> nabla_mu psi_i = d_mu psi_i - 1/4 omega_{mu ab} gamma^a gamma^b psi.
Eigen::MatrixXcd spinorCovariantDerivative(const LocalGeometry& local, const GammaRep& rep,
                                           const SpinorJet& psi);

/// xi^a e_a psi + 1/4 Xi_{ab} gamma^a gamma^b psi.
SpinorValue lieSpinorGaugeNatural(const LocalGeometry& local, const GammaRep& rep,
                                  const InvariantFieldComponents& comps, const SpinorJet& psi);
SpinorValue lieSpinorGaugeNatural(const GeometrySpec& spec, const InvariantFieldComponents& comps,
                                  const SpinorFieldSpec& psi, const Point& pt);

/// Gauge-natural derivative along the Kosmann lift of xi.
SpinorValue lieSpinorKosmann(const LocalGeometry& local, const GammaRep& rep,
                             const VectorJet& xi, const SpinorJet& psi);
SpinorValue lieSpinorKosmann(const GeometrySpec& spec, const VectorFieldSpec& xi,
                             const SpinorFieldSpec& psi, const Point& pt);

/// xi^a nabla_a psi - 1/4 nabla_[a xi_b] gamma^a gamma^b psi.
SpinorValue lieSpinorCovariant(const LocalGeometry& local, const GammaRep& rep,
                               const VectorJet& xi, const SpinorJet& psi);
SpinorValue lieSpinorCovariant(const GeometrySpec& spec, const VectorFieldSpec& xi,
                               const SpinorFieldSpec& psi, const Point& pt);

/// xi^a nabla_a psi - 1/4 nabla_a xi_b gamma^a gamma^b psi. Throws
/// PreconditionError (carrying the residual) unless killingResidual <= 1e-8.
SpinorValue lichnerowicz(const LocalGeometry& local, const GammaRep& rep, const VectorJet& xi,
                         const SpinorJet& psi);
SpinorValue lichnerowicz(const GeometrySpec& spec, const VectorFieldSpec& xi,
                         const SpinorFieldSpec& psi, const Point& pt);

inline constexpr double kKillingTolerance = 1e-8;

/// xi^rho d_rho g_{mu nu} + g_{rho mu} (xi_K)^rho_nu + g_{rho nu} (xi_K)^rho_mu.
Eigen::MatrixXd reductiveMetricLie(const LocalGeometry& local, const VectorJet& xi);
Eigen::MatrixXd reductiveMetricLie(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                   const Point& pt);

/// max |nabla_mu xi_nu + nabla_nu xi_mu|.
double killingResidual(const LocalGeometry& local, const VectorJet& xi);
double killingResidual(const GeometrySpec& spec, const VectorFieldSpec& xi, const Point& pt);

/// Integrates the base flow of xi with the spin transport dS/dt = -sigma(K(x(t))) S
/// and returns the central difference of S(t)^{-1} psi(phi_t(pt)) at t = 0.
SpinorValue flowLieSpinorOracle(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                const SpinorFieldSpec& psi, const Point& pt, double dt = 1e-4);

/// L_xi L_zeta psi - L_zeta L_xi psi - L_[xi,zeta] psi for the Kosmann derivative;
/// outer derivatives by central differences with step h.
SpinorValue commutatorDefect(const GeometrySpec& spec, const VectorFieldSpec& xi,
                             const VectorFieldSpec& zeta, const SpinorFieldSpec& psi,
                             const Point& pt, double h = 1e-4);

/// d/dt of the pulled-back density (J^{-1})..T(phi_t)..J det(J)^w at t = 0, with
/// the flow and its Jacobian J integrated by RK4 and a central difference in t.
TensorValue flowLieDensityOracle(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                 const DensityFieldSpec& t, const Point& pt, double dt = 1e-4);
/// Coordinate bracket [xi, zeta]^mu = xi^nu d_nu zeta^mu - zeta^nu d_nu xi^mu.
Eigen::VectorXd coordinateBracket(const VectorJet& xi, const VectorJet& zeta);

/// Spinor jet of a pointwise spinor map, derivatives by central differences.
SpinorJet finiteDifferenceJet(const std::function<SpinorValue(const Point&)>& field,
                              const Point& pt, double h);

}  // namespace spinlie

#endif  // SPINLIE_LIEDERIV_HPP
