#include "fcs/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace fcs {

namespace {

constexpr double kNoiseFloor = 1e-13;

}  // namespace

CVector vectorize(const CMatrix& x) {
  CVector out(x.size());
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) out(a * x.cols() + b) = x(a, b);
  return out;
}

CMatrix unvectorize(const CVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionError("unvectorize: length is not n²");
  CMatrix out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = v(a * n + b);
  return out;
}

CMatrix TransferOperator::apply(const CMatrix& x) const { return unvectorize(matrix * vectorize(x), n); }

CMatrix apply_transfer(const PopescuSystem& sys, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(sys.n(), sys.n());
  for (const auto& vk : sys.v()) out.noalias() += vk * x * vk.adjoint();
  return out;
}

TransferOperator build_transfer(const PopescuSystem& sys) {
  const int n = sys.n();
  TransferOperator op;
  op.n = n;
  op.rho = sys.rho();
  op.matrix = CMatrix::Zero(n * n, n * n);
  for (const auto& vk : sys.v()) op.matrix += kron(vk, CMatrix(vk.conjugate()));

  // Self-adjointness for <<x, y>> = trace(rho x* y) = vec(x)^H G vec(y) with
  // G = I ⊗ rho^T.
  const CMatrix gram = kron(CMatrix(CMatrix::Identity(n, n)), CMatrix(sys.rho().transpose()));
  op.detailed_balance = max_abs_diff(op.matrix.adjoint() * gram, gram * op.matrix) <= 1e-8;
  return op;
}

double spectral_radius(const TransferOperator& op) {
  double r = 0.0;
  for (const auto& z : eigenvalues(op.matrix)) r = std::max(r, std::abs(z));
  return r;
}

double correlation_length(double alpha) {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return std::numeric_limits<double>::infinity();
  return -1.0 / std::log(alpha);
}

SpectralReport spectral_report(const TransferOperator& op) {
  SpectralReport report;
  report.detailed_balance = op.detailed_balance;
  report.eigenvalues = eigenvalues(op.matrix);
  canonical_sort(report.eigenvalues);

  int unit_count = 0;
  for (const auto& z : report.eigenvalues) {
    if (std::abs(z) >= kPeripheralThreshold) report.peripheral.push_back(z);
    if (std::abs(z - Complex(1.0)) < 1e-8) ++unit_count;
  }
  report.ergodic = unit_count == 1;
  report.strongly_mixing = report.ergodic && report.peripheral.size() == 1;

  // Rank-one deflation of the Perron pair: T - vec(I) vec(rho^T)^T.
  const CVector right = vectorize(CMatrix::Identity(op.n, op.n));
  const CVector left = vectorize(op.rho.transpose());
  const CMatrix deflated = op.matrix - right * left.transpose();
  report.deflated = eigenvalues(deflated);
  canonical_sort(report.deflated);

  // Interior spectrum only: any remaining peripheral eigenvalue signals a
  // non-mixing system, which the flags above already record.
  for (const auto& z : report.deflated) {
    const double r = std::abs(z);
    if (r < kPeripheralThreshold) report.alpha = std::max(report.alpha, r);
  }
  report.correlation_length = correlation_length(report.alpha);
  return report;
}

Complex two_point(const PopescuSystem& sys, const CMatrix& a, const CMatrix& b, int k) {
  if (k < 1) throw std::invalid_argument("two_point: separation k must be >= 1");
  CMatrix x = apply_site_map(sys, b, CMatrix::Identity(sys.n(), sys.n()));
  for (int step = 1; step < k; ++step) x = apply_transfer(sys, x);
  return (sys.rho() * apply_site_map(sys, a, x)).trace();
}

DecayCertificate decay_certificate(const PopescuSystem& sys, const std::vector<CMatrix>& observables,
                                   int k_max) {
  if (k_max < 1) throw std::invalid_argument("decay_certificate: k_max must be >= 1");
  const SpectralReport report = spectral_report(build_transfer(sys));
  if (!report.strongly_mixing) {
    throw CertificateUnavailable(
        "decay_certificate: transfer operator has peripheral spectrum beyond the Perron eigenvalue");
  }

  DecayCertificate cert;
  cert.alpha = report.alpha;
  cert.k_max = k_max;
  const int count = static_cast<int>(observables.size());
  const CMatrix identity = CMatrix::Identity(sys.n(), sys.n());

  std::vector<Complex> means;
  for (const auto& obs : observables) means.push_back(product_expectation(sys, {obs}));

  for (int bi = 0; bi < count; ++bi) {
    std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(count));
    CMatrix x = apply_site_map(sys, observables[static_cast<std::size_t>(bi)], identity);
    for (int k = 1; k <= k_max; ++k) {
      if (k > 1) x = apply_transfer(sys, x);
      for (int ai = 0; ai < count; ++ai) {
        const Complex joint = (sys.rho() * apply_site_map(sys, observables[static_cast<std::size_t>(ai)], x)).trace();
        rows[static_cast<std::size_t>(ai)].push_back(joint - means[static_cast<std::size_t>(ai)] *
                                                                 means[static_cast<std::size_t>(bi)]);
      }
    }
    for (int ai = 0; ai < count; ++ai) {
      cert.pairs.push_back(PairCorrelation{ai, bi, std::move(rows[static_cast<std::size_t>(ai)]), false});
    }
  }
  // Report pairs in (A, B) lexicographic order.
  std::sort(cert.pairs.begin(), cert.pairs.end(), [](const PairCorrelation& x, const PairCorrelation& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });

  // Common slope, separate intercept per pair.
  double sxy = 0.0;
  double sxx = 0.0;
  for (auto& pair : cert.pairs) {
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= k_max; ++k) {
      const double mag = std::abs(pair.connected[static_cast<std::size_t>(k - 1)]);
      if (mag > kNoiseFloor) pts.emplace_back(static_cast<double>(k), std::log(mag));
    }
    if (pts.size() < 2) continue;
    pair.in_fit = true;
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
  }
  cert.degenerate = sxx == 0.0;
  if (!cert.degenerate) cert.fitted_rate = sxy / sxx;

  // Envelope C = max_k |c_k| / alpha^k.
  double largest = 0.0;
  for (const auto& pair : cert.pairs)
    for (const auto& c : pair.connected) largest = std::max(largest, std::abs(c));
  if (cert.alpha > 0.0) {
    for (const auto& pair : cert.pairs)
      for (int k = 1; k <= k_max; ++k)
        cert.envelope = std::max(cert.envelope, std::abs(pair.connected[static_cast<std::size_t>(k - 1)]) /
                                                    std::pow(cert.alpha, k));
    cert.max_violation = -std::numeric_limits<double>::infinity();
    for (const auto& pair : cert.pairs)
      for (int k = 1; k <= k_max; ++k)
        cert.max_violation = std::max(cert.max_violation, std::abs(pair.connected[static_cast<std::size_t>(k - 1)]) -
                                                              cert.envelope * std::pow(cert.alpha, k));
  } else {
    // alpha = 0: correlations vanish beyond rounding; the envelope is the
    // largest residual itself.
    cert.envelope = largest;
    cert.max_violation = 0.0;
  }
  return cert;
}

}  // namespace fcs
