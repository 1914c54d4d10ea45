#include "spinlie/lifts.hpp"

namespace spinlie {

NaturalLiftCoeffs naturalLiftCoeffs(const FrameAt& frame, const VectorJet& xi) {
  const auto m = frame.e.rows();
  if (xi.value.size() != m) throw InputError("naturalLiftCoeffs: dimension mismatch");
  Eigen::MatrixXd transport = Eigen::MatrixXd::Zero(m, m);  // xi^nu d_nu e_b^rho
  for (Eigen::Index nu = 0; nu < m; ++nu) transport += xi.value[nu] * frame.de[nu];
  return frame.eInv * (xi.jacobian * frame.e - transport);
}

NaturalLiftCoeffs naturalLiftCoeffs(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                    const Point& pt) {
  return naturalLiftCoeffs(orthonormalFrame(spec, pt), evalVectorField(xi, pt));
}

KosmannSplit kosmannSplit(const NaturalLiftCoeffs& lift, const Signature& sig) {
  const ReductiveSplit<double> split = decomposeGL(lift, sig);
  const auto m = lift.rows();
  KosmannSplit out;
  out.kosmann = lowerFirst(split.antisym, sig);
  out.vonGoeden = lowerFirst(
      split.symTraceless + split.traceCoeff * Eigen::MatrixXd::Identity(m, m), sig);
  // Exact (anti)symmetry; the projections above agree to rounding.
  out.kosmann = 0.5 * (out.kosmann - out.kosmann.transpose()).eval();
  out.vonGoeden = 0.5 * (out.vonGoeden + out.vonGoeden.transpose()).eval();
  return out;
}

InvariantFieldComponents kosmannComponents(const FrameAt& frame, const Signature& sig,
                                           const VectorJet& xi) {
  return {frame.eInv * xi.value, kosmannSplit(naturalLiftCoeffs(frame, xi), sig).kosmann};
}

Eigen::MatrixXd kosmannCoordinateMatrix(const FrameAt& frame, const Signature& sig,
                                        const VectorJet& xi) {
  const auto m = frame.e.rows();
  const KosmannSplit split = kosmannSplit(naturalLiftCoeffs(frame, xi), sig);
  // Tangent of the section along xi plus the Kosmann vertical part, both as
  // u^rho_b components, then contracted with the coframe.
  Eigen::MatrixXd transport = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index nu = 0; nu < m; ++nu) transport += xi.value[nu] * frame.de[nu];
  return (transport + frame.e * raiseFirst(split.kosmann, sig)) * frame.eInv;
}

Eigen::MatrixXd kosmannCoordinateMatrix(const GeometrySpec& spec, const VectorFieldSpec& xi,
                                        const Point& pt) {
  return kosmannCoordinateMatrix(orthonormalFrame(spec, pt), spec.sig, evalVectorField(xi, pt));
}

}  // namespace spinlie
