#include "spinlie/liealg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

namespace spinlie {

void validate(const Signature& sig) {
  if (sig.p < 0 || sig.q < 0 || sig.dim() < 1)
    throw InputError("invalid signature " + toString(sig));
}

std::string toString(const Signature& sig) {
  return "(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")";
}

Eigen::MatrixXd etaMatrix(const Signature& sig) {
  validate(sig);
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(sig.dim(), sig.dim());
  for (int a = 0; a < sig.dim(); ++a) eta(a, a) = sig.eta(a);
  return eta;
}

Eigen::MatrixXd expAntisym(const Eigen::MatrixXd& A, const Signature& sig) {
  const Eigen::MatrixXd defect = A + etaAdjoint(A, sig);
  if (defect.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw InputError("expAntisym: generator is not eta-antisymmetric");
  return A.exp();
}

Eigen::MatrixXd randomAntisym(const Signature& sig, std::uint64_t seed,
                              double scale) {
  validate(sig);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  const int m = sig.dim();
  // Lowered generator is antisymmetric; raising the first index with eta
  // gives an eta-antisymmetric mixed matrix.
  Eigen::MatrixXd lowered = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      lowered(i, j) = normal(rng);
      lowered(j, i) = -lowered(i, j);
    }
  return raiseFirst(lowered, sig);
}

Eigen::MatrixXd randomSOElement(const Signature& sig, std::uint64_t seed,
                                double scale) {
  return expAntisym(randomAntisym(sig, seed, scale), sig);
}

}  // namespace spinlie
