#ifndef SPINLIE_LIEALG_HPP
#define SPINLIE_LIEALG_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "spinlie/errors.hpp"

namespace spinlie {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Metric signature (p, q): p plus signs followed by q minus signs.
struct Signature {
  int p = 0;
  int q = 0;

  int dim() const { return p + q; }
  /// Diagonal entry of eta at index a.
  double eta(int a) const { return a < p ? 1.0 : -1.0; }
  bool operator==(const Signature&) const = default;
};

/// Throws InputError unless p, q >= 0 and p + q >= 1.
void validate(const Signature& sig);
std::string toString(const Signature& sig);

/// diag(+1 x p, -1 x q).
Eigen::MatrixXd etaMatrix(const Signature& sig);

/// eta * M^T * eta, the adjoint of M with respect to eta.
template <typename Derived>
MatrixX<typename Derived::Scalar> etaAdjoint(const Eigen::MatrixBase<Derived>& M,
                                             const Signature& sig) {
  const int m = sig.dim();
  if (M.rows() != m || M.cols() != m)
    throw InputError("etaAdjoint: matrix is " + std::to_string(M.rows()) + "x" +
                     std::to_string(M.cols()) + ", signature needs " +
                     std::to_string(m) + "x" + std::to_string(m));
  MatrixX<typename Derived::Scalar> out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = sig.eta(i) * sig.eta(j) * M(j, i);
  return out;
}

/// Lowers the first index with eta: (eta M)_{ab} = eta_{ac} M^c_b.
template <typename Derived>
MatrixX<typename Derived::Scalar> lowerFirst(const Eigen::MatrixBase<Derived>& M,
                                             const Signature& sig) {
  MatrixX<typename Derived::Scalar> out = M;
  for (int a = 0; a < M.rows(); ++a) out.row(a) *= sig.eta(a);
  return out;
}

/// Inverse of lowerFirst (eta is its own inverse).
template <typename Derived>
MatrixX<typename Derived::Scalar> raiseFirst(const Eigen::MatrixBase<Derived>& M,
                                             const Signature& sig) {
  return lowerFirst(M, sig);
}

/// gl(m) = so(p,q) + V + R*I.
template <typename Scalar>
struct ReductiveSplit {
  MatrixX<Scalar> antisym;       ///< eta-antisymmetric part, in so(p,q)
  MatrixX<Scalar> symTraceless;  ///< eta-symmetric traceless part, in V
  Scalar traceCoeff{};           ///< c with c*I the pure-trace part

  MatrixX<Scalar> reconstruct() const {
    const auto m = antisym.rows();
    return antisym + symTraceless +
           traceCoeff * MatrixX<Scalar>::Identity(m, m);
  }
};

template <typename Derived>
ReductiveSplit<typename Derived::Scalar> decomposeGL(
    const Eigen::MatrixBase<Derived>& M, const Signature& sig) {
  using Scalar = typename Derived::Scalar;
  const int m = sig.dim();
  ReductiveSplit<Scalar> split;
  split.traceCoeff = M.trace() / Scalar(m);
  const MatrixX<Scalar> U =
      M - split.traceCoeff * MatrixX<Scalar>::Identity(m, m);
  const MatrixX<Scalar> Ut = etaAdjoint(U, sig);
  split.antisym = (U - Ut) / Scalar(2);
  split.symTraceless = (U + Ut) / Scalar(2);
  return split;
}

/// O * M * O^{-1}. Throws PreconditionError if O is singular.
template <typename DerivedO, typename DerivedM>
MatrixX<typename DerivedM::Scalar> adjointAction(
    const Eigen::MatrixBase<DerivedO>& O, const Eigen::MatrixBase<DerivedM>& M) {
  using Scalar = typename DerivedM::Scalar;
  if (O.rows() != O.cols() || O.rows() != M.rows() || M.rows() != M.cols())
    throw InputError("adjointAction: shape mismatch");
  Eigen::FullPivLU<MatrixX<typename DerivedO::Scalar>> lu(O);
  if (!lu.isInvertible())
    throw PreconditionError("adjointAction: group element is singular");
  const MatrixX<Scalar> Ob = O.template cast<Scalar>();
  return Ob * M * lu.inverse().template cast<Scalar>();
}

/// exp(A) for an eta-antisymmetric A; the result lies in SO(p,q).
Eigen::MatrixXd expAntisym(const Eigen::MatrixXd& A, const Signature& sig);

/// Seeded random eta-antisymmetric generator with entries of order `scale`.
Eigen::MatrixXd randomAntisym(const Signature& sig, std::uint64_t seed,
                              double scale = 1.0);

/// exp of a seeded random eta-antisymmetric matrix.
Eigen::MatrixXd randomSOElement(const Signature& sig, std::uint64_t seed,
                                double scale = 1.0);

}  // namespace spinlie

#endif  // SPINLIE_LIEALG_HPP
