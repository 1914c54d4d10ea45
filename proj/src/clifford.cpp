#include "spinlie/clifford.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <complex>

#include "spinlie/errors.hpp"

namespace spinlie {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd pauli(int k) {
  Eigen::MatrixXcd s(2, 2);
  switch (k) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, cd(0, -1), cd(0, 1), 0;
      break;
    default:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

/// Tensor product of `k` two-dimensional factors, factor j chosen by `pick`.
template <typename Pick>
Eigen::MatrixXcd ladder(int k, Pick pick) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < k; ++j) {
    const Eigen::MatrixXcd next = Eigen::kroneckerProduct(out, pick(j)).eval();
    out = next;
  }
  return out;
}

}  // namespace

GammaRep gammaMatrices(const Signature& sig) {
  validate(sig);
  const int m = sig.dim();
  const int k = m / 2;
  GammaRep rep;
  rep.sig = sig;
  rep.N = 1 << k;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  // Euclidean generators: sigma3^{(j)} (x) sigma_{1,2} (x) I^{(k-j-1)}, plus
  // the chirality-like sigma3^{(k)} when m is odd.
  for (int j = 0; j < k; ++j)
    for (int s : {1, 2})
      rep.gammas.push_back(ladder(k, [&](int i) -> Eigen::MatrixXcd {
        return i < j ? pauli(3) : i == j ? pauli(s) : id2;
      }));
  if (m % 2 == 1) rep.gammas.push_back(ladder(k, [&](int) { return pauli(3); }));
  for (int a = sig.p; a < m; ++a) rep.gammas[a] *= cd(0, 1);
  return rep;
}

Eigen::MatrixXcd spinAlgebraMap(const GammaRep& rep, const Eigen::MatrixXd& lowered) {
  const int m = rep.sig.dim();
  if (lowered.rows() != m || lowered.cols() != m)
    throw InputError("spinAlgebraMap: generator shape does not match signature");
  const double defect = (lowered + lowered.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-10 * std::max(1.0, lowered.cwiseAbs().maxCoeff()))
    throw InputError("spinAlgebraMap: generator is not antisymmetric");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rep.N, rep.N);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (lowered(a, b) != 0.0) out += (0.25 * lowered(a, b)) * rep.gammas[a] * rep.gammas[b];
  return out;
}

Eigen::MatrixXcd spinAlgebraMapMixed(const GammaRep& rep, const Eigen::MatrixXd& mixed) {
  return spinAlgebraMap(rep, lowerFirst(mixed, rep.sig));
}

SpinorValue applyClifford(const GammaRep& rep, const Eigen::MatrixXcd& M, const SpinorValue& psi) {
  if (M.rows() != rep.N || M.cols() != rep.N || psi.size() != rep.N)
    throw InputError("applyClifford: shape mismatch");
  return M * psi;
}

double cliffordResidual(const GammaRep& rep) {
  const int m = rep.sig.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.N, rep.N);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const double eta = a == b ? rep.sig.eta(a) : 0.0;
      const Eigen::MatrixXcd r =
          rep.gammas[a] * rep.gammas[b] + rep.gammas[b] * rep.gammas[a] - 2.0 * eta * id;
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace spinlie
