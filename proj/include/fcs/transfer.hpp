#pragma once

// The transfer operator tau(x) = sum_k v_k x v_k* and its spectral analysis.
//
// Vectorization is row-major throughout: vec(x)[a*n + b] = x(a, b). With this
// convention vec(A x B) = (A ⊗ B^T) vec(x), so the transfer matrix is
// sum_k v_k ⊗ conj(v_k). The right Perron vector is vec(I); the left one is
// vec(rho^T), because trace(rho x) = vec(rho^T) · vec(x).

#include <limits>
#include <vector>

#include "fcs/popescu.hpp"

namespace fcs {

/// Eigenvalues with modulus at least this are peripheral.
inline constexpr double kPeripheralThreshold = 1.0 - 1e-8;

struct TransferOperator {
  int n = 0;
  CMatrix matrix;  // n²×n²
  CMatrix rho;     // invariant state of the generating system
  bool detailed_balance = false;

  /// Applies the matrix to vec(x) and reshapes.
  CMatrix apply(const CMatrix& x) const;
};

struct SpectralReport {
  std::vector<Complex> eigenvalues;  // full spectrum, canonical order
  std::vector<Complex> peripheral;
  std::vector<Complex> deflated;     // spectrum after removing the Perron pair
  double alpha = 0.0;
  double correlation_length = 0.0;   // -1/ln(alpha); 0 for alpha = 0
  bool ergodic = false;
  bool strongly_mixing = false;
  bool detailed_balance = false;
};

CVector vectorize(const CMatrix& x);
CMatrix unvectorize(const CVector& v, int n);

/// tau(x) = sum_k v_k x v_k*.
CMatrix apply_transfer(const PopescuSystem& sys, const CMatrix& x);

TransferOperator build_transfer(const PopescuSystem& sys);

/// Largest |λ| in the spectrum.
double spectral_radius(const TransferOperator& op);

SpectralReport spectral_report(const TransferOperator& op);

/// -1/ln(alpha) with the conventions alpha = 0 -> 0 and alpha >= 1 -> inf.
double correlation_length(double alpha);

/// omega(A ⊗ 1^{k-1} ⊗ B) for k >= 1.
Complex two_point(const PopescuSystem& sys, const CMatrix& a, const CMatrix& b, int k);

struct PairCorrelation {
  int first = 0;   // index into the observable list
  int second = 0;
  std::vector<Complex> connected;  // c_k for k = 1..k_max
  bool in_fit = false;
};

struct DecayCertificate {
  double alpha = 0.0;
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();  // slope of ln|c_k| vs k
  double envelope = 0.0;       // C in |c_k| <= C alpha^k
  double max_violation = 0.0;  // max_k |c_k| - C alpha^k
  bool degenerate = false;     // nothing above the noise floor to fit
  int k_max = 0;
  std::vector<PairCorrelation> pairs;
};

/// Connected correlators c_k = omega(A θ_k(B)) - omega(A) omega(B) for all
/// ordered pairs, a common-slope least-squares fit of ln|c_k| against k,
/// and the exponential envelope. Throws CertificateUnavailable if the
/// transfer operator is not strongly mixing.
DecayCertificate decay_certificate(const PopescuSystem& sys, const std::vector<CMatrix>& observables,
                                   int k_max);

}  // namespace fcs
