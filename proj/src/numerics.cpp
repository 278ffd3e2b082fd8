#include "fcs/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace fcs {

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

std::vector<Complex> eigenvalues(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigenvalues: matrix is not square");
  if (a.size() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw ConsistencyError("eigenvalues: QR iteration failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<Complex> eigenvalues(const RMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigenvalues: matrix is not square");
  if (a.size() == 0) return {};
  Eigen::EigenSolver<RMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw ConsistencyError("eigenvalues: QR iteration failed");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
  if (a.size() == 0) return a;
  return a.exp();
}

void canonical_sort(std::vector<Complex>& values, double tie) {
  std::stable_sort(values.begin(), values.end(), [tie](const Complex& x, const Complex& y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (std::abs(ax - ay) > tie) return ax > ay;
    // Map -π to π so that real negative values sort consistently.
    auto arg = [tie](const Complex& z) {
      double t = std::arg(z);
      if (std::abs(z.imag()) <= tie) t = z.real() < 0 ? M_PI : 0.0;
      return t;
    };
    return arg(x) < arg(y) - tie;
  });
}

}  // namespace fcs
