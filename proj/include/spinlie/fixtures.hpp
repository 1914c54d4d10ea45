#ifndef SPINLIE_FIXTURES_HPP
#define SPINLIE_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "spinlie/geometry.hpp"

namespace spinlie {

struct Fixture {
  std::string name;
  GeometrySpec spec;
  std::vector<VectorFieldSpec> killing;  ///< known Killing fields of spec, possibly empty
};

/// Flat eta in coordinates x0..x{m-1} on [-1, 1]^m.
GeometrySpec flatGeometry(const Signature& sig);

/// The builtin charts, each with the Killing fields we know in closed form: flat (p,q) for m in {2,3,4}; the polar metric
/// diag(1, x0^2) on x0 in [1,2]; conformally flat e^{2 x0} eta in 2D for both
/// signatures; two non-diagonal 2D metrics; and the (1,3) Schwarzschild-like
/// diag(f, -1/f, -r^2, -r^2 sin^2(theta)), f = 1 - 2/r, sampled on r in [3, 6].
std::vector<Fixture> builtinFixtures();

/// Translations plus the generators eta_bb x^b d_a - eta_aa x^a d_b (a < b)
/// of rotations and boosts. `spec` must be flat.
std::vector<VectorFieldSpec> flatKillingFields(const GeometrySpec& spec);

/// Uniform sample from spec.domain.
Point randomPoint(const GeometrySpec& spec, std::mt19937_64& rng);

/// Quadratic polynomial plus a sine term in every component.
VectorFieldSpec randomVectorField(const GeometrySpec& spec, std::mt19937_64& rng,
                                  std::string name = "xi");
SpinorFieldSpec randomSpinorField(const GeometrySpec& spec, std::mt19937_64& rng,
                                  std::string name = "psi");
/// Random scalar field of the same form as one vector component.
Expression randomScalarField(const GeometrySpec& spec, std::mt19937_64& rng);

/// Random expression tree of the given maximum depth whose every operation is
/// defined for all real inputs (log, sqrt and / only see arguments >= 1).
Expression randomExpression(std::shared_ptr<const std::vector<std::string>> names,
                            std::mt19937_64& rng, int depth);

}  // namespace spinlie

#endif  // SPINLIE_FIXTURES_HPP
