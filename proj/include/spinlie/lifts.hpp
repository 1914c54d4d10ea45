#ifndef SPINLIE_LIFTS_HPP
#define SPINLIE_LIFTS_HPP

#include <Eigen/Dense>

#include "spinlie/geometry.hpp"

namespace spinlie {

/// (a, b) -> (L xi)^a_b = e~^a_rho (d_nu xi^rho e_b^nu - xi^nu d_nu e_b^rho)
using NaturalLiftCoeffs = Eigen::MatrixXd;

/// Both matrices carry lowered frame indices (L xi)_{ab} = eta_{ac} (L xi)^c_b.
struct KosmannSplit {
  Eigen::MatrixXd kosmann;     ///< antisymmetric part (L xi)_{[ab]}
  Eigen::MatrixXd vonGoeden;   ///< symmetric part (L xi)_{(ab)}
};

/// SO(p,q)-invariant vector field xi^a e_a + vertical_{ab} A^{ab} on the frame bundle.
struct InvariantFieldComponents {
  Eigen::VectorXd xiFrame;   ///< xi^a
  Eigen::MatrixXd vertical;  ///< Xi_{ab}, antisymmetric
};

NaturalLiftCoeffs naturalLiftCoeffs(const FrameAt& frame, const VectorJet& xi);
NaturalLiftCoeffs naturalLiftCoeffs(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                    const Point& pt);

/// Splits the lowered coefficients through decomposeGL: the so(p,q) part is the
/// Kosmann part, the eta-symmetric traceless plus trace parts form the von Goeden part.
KosmannSplit kosmannSplit(const NaturalLiftCoeffs& lift, const Signature& sig);

/// Kosmann lift written as a frame-bundle vector field: (xi^a, (L xi)_{[ab]}).
InvariantFieldComponents kosmannComponents(const FrameAt& frame, const Signature& sig,
                                           const VectorJet& xi);

/// (rho, nu) -> (xi_K)^rho_nu: vertical part of the Kosmann lift in natural
/// frame-bundle coordinates, pushed to coordinate indices by the frame. It is
/// d_nu xi^rho with the von Goeden part e eta^{-1} (L xi)_{(ab)} e~ removed.
Eigen::MatrixXd kosmannCoordinateMatrix(const FrameAt& frame, const Signature& sig,
                                        const VectorJet& xi);
Eigen::MatrixXd kosmannCoordinateMatrix(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                        const Point& pt);

}  // namespace spinlie

#endif  // SPINLIE_LIFTS_HPP
