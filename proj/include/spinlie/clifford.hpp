#ifndef SPINLIE_CLIFFORD_HPP
#define SPINLIE_CLIFFORD_HPP

#include <Eigen/Dense>

#include <vector>

#include "spinlie/liealg.hpp"

namespace spinlie {

using SpinorValue = Eigen::VectorXcd;

/// Gamma matrices gamma^a of Cl(p,q) on C^N, N = 2^floor(m/2), with
/// gamma^a gamma^b + gamma^b gamma^a = 2 eta^{ab} I.
struct GammaRep {
  Signature sig;
  int N = 1;
  std::vector<Eigen::MatrixXcd> gammas;  ///< upper index, gamma^a

  /// gamma_a = eta_{ab} gamma^b
  Eigen::MatrixXcd lowered(int a) const { return sig.eta(a) * gammas[a]; }
};

/// Jordan-Wigner ladder of Pauli matrices; the last q gammas carry a factor i.
GammaRep gammaMatrices(const Signature& sig);

/// sigma(A) = 1/4 sum_{a,b} A_{ab} gamma^a gamma^b for A with both indices down.
/// Throws InputError unless A is antisymmetric to 1e-10.
Eigen::MatrixXcd spinAlgebraMap(const GammaRep& rep, const Eigen::MatrixXd& lowered);

/// sigma applied to a mixed-index eta-antisymmetric matrix A^a_b.
Eigen::MatrixXcd spinAlgebraMapMixed(const GammaRep& rep, const Eigen::MatrixXd& mixed);

SpinorValue applyClifford(const GammaRep& rep, const Eigen::MatrixXcd& M, const SpinorValue& psi);

/// max_{a,b} |gamma^a gamma^b + gamma^b gamma^a - 2 eta^{ab} I|
double cliffordResidual(const GammaRep& rep);

}  // namespace spinlie

#endif  // SPINLIE_CLIFFORD_HPP
