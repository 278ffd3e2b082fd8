#pragma once

// Dense complex linear-algebra kernel shared by every other module.
//
// Matrices are plain Eigen dense types. Only the indexing semantics matter to
// callers: entry (i, j) is row i, column j, and Kronecker products use the
// convention that the left factor is the most significant index.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fcs/errors.hpp"

namespace fcs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Default absolute comparison tolerance for O(1)-norm matrices.
inline constexpr double kTolerance = 1e-10;

/// Kronecker product: (a⊗b)(i·rows_b + k, j·cols_b + l) = a(i,j)·b(k,l).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker product of a list of factors, left to right.
CMatrix kron_all(const std::vector<CMatrix>& factors);

/// Eigenvalues of a general square matrix, with algebraic multiplicity.
/// Throws DimensionError for non-square input.
std::vector<Complex> eigenvalues(const CMatrix& a);

/// Eigenvalues of a real square matrix (returned as complex).
std::vector<Complex> eigenvalues(const RMatrix& a);

/// Matrix exponential (Padé scaling and squaring).
CMatrix expm(const CMatrix& a);

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
      a.eval());
  return svd.singularValues()(0);
}

/// Max |entry| of a - b; the cheap entrywise distance used in most checks.
template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

/// Commutator [a, b] = ab - ba.
template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b - b * a).eval();
}

/// True if every entry is finite.
template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

/// Sort eigenvalues by (-|λ|, arg λ) so that output is deterministic. Moduli
/// and arguments within `tie` are treated as equal.
void canonical_sort(std::vector<Complex>& values, double tie = 1e-12);

}  // namespace fcs
