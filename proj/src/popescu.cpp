#include "fcs/popescu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fcs {

namespace {

constexpr double kRhoFloor = 1e-12;

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

// Digits of `index` in base d, most significant first.
Word decode(Eigen::Index index, int d, int m) {
  Word w(static_cast<std::size_t>(m));
  for (int pos = m - 1; pos >= 0; --pos) {
    w[static_cast<std::size_t>(pos)] = static_cast<int>(index % d);
    index /= d;
  }
  return w;
}

Eigen::Index encode(const Word& w, int d) {
  Eigen::Index out = 0;
  for (int letter : w) out = out * d + letter;
  return out;
}

CMatrix dual_map(const std::vector<CMatrix>& v, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& vk : v) out.noalias() += vk.adjoint() * x * vk;
  return out;
}

// Matrix of x -> sum_k v_k* x v_k on row-major vectorized x.
CMatrix dual_map_matrix(const std::vector<CMatrix>& v) {
  const auto n = v.front().rows();
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (const auto& vk : v) out += kron(CMatrix(vk.adjoint()), CMatrix(vk.transpose()));
  return out;
}

CMatrix normalize_density(CMatrix x) {
  x = (0.5 * (x + x.adjoint())).eval();
  const Complex tr = x.trace();
  if (std::abs(tr) < 1e-300) throw ConsistencyError("invariant_state: fixed point has zero trace");
  return x / tr.real();
}

// Products v_{w_1}..v_{w_m} for every word of length m, indexed by encode(w).
std::vector<CMatrix> all_word_products(const PopescuSystem& sys, int m) {
  const int d = sys.d();
  const auto count = ipow(d, m);
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    CMatrix prod = CMatrix::Identity(sys.n(), sys.n());
    for (int letter : decode(idx, d, m)) prod = prod * sys.v(letter);
    out.push_back(std::move(prod));
  }
  return out;
}

// Table of trace(rho v_I v_J*) over all word pairs of length m.
CMatrix amplitude_table(const PopescuSystem& sys, int m) {
  const auto words = all_word_products(sys, m);
  const auto count = static_cast<Eigen::Index>(words.size());
  std::vector<CMatrix> left(words.size());
  std::vector<CMatrix> right(words.size());
  for (std::size_t k = 0; k < words.size(); ++k) {
    left[k] = sys.rho() * words[k];
    right[k] = words[k].adjoint();
  }
  CMatrix out(count, count);
  for (Eigen::Index a = 0; a < count; ++a) {
    for (Eigen::Index b = 0; b < count; ++b) {
      // trace(L R) = sum_xy L_xy R_yx
      out(a, b) = left[static_cast<std::size_t>(a)]
                      .cwiseProduct(right[static_cast<std::size_t>(b)].transpose())
                      .sum();
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PopescuSystem

PopescuSystem::PopescuSystem(std::vector<CMatrix> v, CMatrix rho) : v_(std::move(v)), rho_(std::move(rho)) {
  if (v_.empty()) throw DimensionError("PopescuSystem: need at least one v_k");
  const auto n = rho_.rows();
  if (n < 1 || rho_.cols() != n) throw DimensionError("PopescuSystem: rho must be square and nonempty");
  for (const auto& vk : v_) {
    if (vk.rows() != n || vk.cols() != n) throw DimensionError("PopescuSystem: every v_k must be n×n");
    if (!all_finite(vk)) throw ConsistencyError("PopescuSystem: non-finite entry in v_k");
  }
  if (!all_finite(rho_)) throw ConsistencyError("PopescuSystem: non-finite entry in rho");

  if (const double r = popescu_residual(); r > kTolerance) {
    std::ostringstream msg;
    msg << "PopescuSystem: sum_k v_k v_k* deviates from I by " << r;
    throw ConsistencyError(msg.str());
  }
  if (max_abs_diff(rho_, CMatrix(rho_.adjoint())) > kTolerance) {
    throw ConsistencyError("PopescuSystem: rho is not Hermitian");
  }
  if (std::abs(rho_.trace() - Complex(1.0)) > kTolerance) {
    throw ConsistencyError("PopescuSystem: rho does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= kRhoFloor) {
    throw ConsistencyError("PopescuSystem: rho is not faithful (singular or not positive)");
  }
  if (max_abs_diff(dual_map(v_, rho_), rho_) > kTolerance) {
    throw ConsistencyError("PopescuSystem: rho is not invariant under x -> sum_k v_k* x v_k");
  }
}

PopescuSystem PopescuSystem::with_invariant_state(std::vector<CMatrix> v) {
  if (v.empty()) throw DimensionError("PopescuSystem: need at least one v_k");
  CMatrix rho = invariant_state(v);
  return PopescuSystem(std::move(v), std::move(rho));
}

double PopescuSystem::popescu_residual() const {
  CMatrix sum = CMatrix::Zero(n(), n());
  for (const auto& vk : v_) sum.noalias() += vk * vk.adjoint();
  return operator_norm(sum - CMatrix::Identity(n(), n()));
}

double PopescuSystem::dual_residual() const {
  CMatrix sum = CMatrix::Zero(n(), n());
  for (const auto& vk : v_) sum.noalias() += vk.adjoint() * vk;
  return operator_norm(sum - CMatrix::Identity(n(), n()));
}

CMatrix invariant_state(const std::vector<CMatrix>& v) {
  if (v.empty()) throw DimensionError("invariant_state: need at least one v_k");
  const auto n = v.front().rows();
  // Lazy iteration x <- (x + tau*(x))/2 has the same fixed points as tau*
  // but no peripheral phases, so it converges whenever tau* is ergodic.
  CMatrix x = CMatrix::Identity(n, n) / static_cast<double>(n);
  for (int iter = 0; iter < 5000; ++iter) {
    CMatrix next = 0.5 * (x + dual_map(v, x));
    next /= next.trace().real();
    const double step = max_abs_diff(next, x);
    x = std::move(next);
    if (step < 1e-15) return normalize_density(x);
  }
  // Slow mixing: take the eigenvector of the dual map closest to 1.
  Eigen::ComplexEigenSolver<CMatrix> solver(dual_map_matrix(v));
  if (solver.info() != Eigen::Success) throw ConsistencyError("invariant_state: eigensolver failed");
  Eigen::Index best = 0;
  (solver.eigenvalues().array() - Complex(1.0)).abs().minCoeff(&best);
  const CVector vec = solver.eigenvectors().col(best);
  CMatrix rho(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) rho(a, b) = vec(a * n + b);
  // Remove the arbitrary complex phase of the eigenvector.
  const Complex tr = rho.trace();
  rho /= tr;
  return normalize_density(rho);
}

// ---------------------------------------------------------------------------
// Covariant construction

double CovariantSystem::covariance_residual() const {
  const Irrep site = make_irrep(site_spin);
  const int d = base.d();
  double worst = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const CMatrix& s = site.generator(axis);
    const CMatrix& t = aux_rep.generator(axis);
    for (int k = 0; k < d; ++k) {
      CMatrix lhs = CMatrix::Zero(base.n(), base.n());
      for (int j = 0; j < d; ++j) lhs += std::conj(s(k, j)) * base.v(j);
      worst = std::max(worst, operator_norm(lhs - commutator(t, base.v(k))));
    }
  }
  return worst;
}

CovariantSystem build_covariant(Spin s, Spin t) {
  if (!feasible_aux(s, t)) throw FeasibilityError(feasibility_diagnostic(s, t));
  const int d = s.dim();
  const int n = t.dim();
  std::vector<CMatrix> v(static_cast<std::size_t>(d), CMatrix::Zero(n, n));
  for (int k = 0; k < d; ++k) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        // v_k*[a, b] = <s mu(k); t w(a) | t w(b)>; CG values are real.
        v[static_cast<std::size_t>(k)](b, a) =
            cg_coefficient(s, t, t, s.twice_weight(k), t.twice_weight(a), t.twice_weight(b));
      }
    }
  }
  CMatrix rho = CMatrix::Identity(n, n) / static_cast<double>(n);
  return CovariantSystem{PopescuSystem(std::move(v), std::move(rho)), s, t, make_irrep(t)};
}

// ---------------------------------------------------------------------------
// Evaluation

Complex word_amplitude(const PopescuSystem& sys, std::span<const int> i, std::span<const int> j) {
  auto product = [&sys](std::span<const int> word) {
    CMatrix out = CMatrix::Identity(sys.n(), sys.n());
    for (int letter : word) {
      if (letter < 0 || letter >= sys.d()) throw IndexError("word_amplitude: letter out of range");
      out = out * sys.v(letter);
    }
    return out;
  };
  return (sys.rho() * product(i) * product(j).adjoint()).trace();
}

std::optional<int> site_count(int d, Eigen::Index dim) {
  if (d < 1 || dim < 1) return std::nullopt;
  if (d == 1) return dim == 1 ? std::optional<int>(1) : std::nullopt;
  int m = 0;
  Eigen::Index p = 1;
  while (p < dim) {
    p *= d;
    ++m;
  }
  if (p != dim || m < 1) return std::nullopt;
  return m;
}

CMatrix apply_site_map(const PopescuSystem& sys, const CMatrix& x_site, const CMatrix& x) {
  const int d = sys.d();
  if (x_site.rows() != d || x_site.cols() != d) throw DimensionError("apply_site_map: site operator must be d×d");
  CMatrix out = CMatrix::Zero(sys.n(), sys.n());
  for (int i = 0; i < d; ++i) {
    CMatrix row = CMatrix::Zero(sys.n(), sys.n());
    for (int j = 0; j < d; ++j) {
      if (x_site(i, j) != Complex(0.0)) row.noalias() += x_site(i, j) * sys.v(j).adjoint();
    }
    out.noalias() += sys.v(i) * x * row;
  }
  return out;
}

Complex product_expectation(const PopescuSystem& sys, const std::vector<CMatrix>& factors) {
  CMatrix x = CMatrix::Identity(sys.n(), sys.n());
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = apply_site_map(sys, *it, x);
  return (sys.rho() * x).trace();
}

Complex local_expectation(const PopescuSystem& sys, const CMatrix& q) {
  const int d = sys.d();
  const int n = sys.n();
  if (q.rows() != q.cols()) throw DimensionError("local_expectation: observable must be square");
  const auto sites = site_count(d, q.rows());
  if (!sites) throw DimensionError("local_expectation: observable dimension is not a power of d");
  const int m = *sites;

  // Contract the rightmost site first. After absorbing site l the table
  // holds one n×n matrix per pair of (l-1)-letter prefixes.
  std::vector<CMatrix> pair_products(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) pair_products[static_cast<std::size_t>(a * d + b)] = sys.v(a) * sys.v(b).adjoint();

  Eigen::Index prefixes = ipow(d, m - 1);
  std::vector<CMatrix> table(static_cast<std::size_t>(prefixes * prefixes), CMatrix::Zero(n, n));
  for (Eigen::Index pi = 0; pi < prefixes; ++pi) {
    for (Eigen::Index pj = 0; pj < prefixes; ++pj) {
      CMatrix& slot = table[static_cast<std::size_t>(pi * prefixes + pj)];
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          const Complex coeff = q(pi * d + a, pj * d + b);
          if (coeff != Complex(0.0)) slot.noalias() += coeff * pair_products[static_cast<std::size_t>(a * d + b)];
        }
      }
    }
  }
  for (int level = m - 1; level >= 1; --level) {
    const Eigen::Index outer = prefixes / d;
    std::vector<CMatrix> next(static_cast<std::size_t>(outer * outer), CMatrix::Zero(n, n));
    for (Eigen::Index pi = 0; pi < outer; ++pi) {
      for (Eigen::Index pj = 0; pj < outer; ++pj) {
        CMatrix& slot = next[static_cast<std::size_t>(pi * outer + pj)];
        for (int a = 0; a < d; ++a) {
          CMatrix inner = CMatrix::Zero(n, n);
          for (int b = 0; b < d; ++b) {
            inner.noalias() += table[static_cast<std::size_t>((pi * d + a) * prefixes + (pj * d + b))] *
                               sys.v(b).adjoint();
          }
          slot.noalias() += sys.v(a) * inner;
        }
      }
    }
    table = std::move(next);
    prefixes = outer;
  }
  return (sys.rho() * table.front()).trace();
}

Complex brute_force_expectation(const PopescuSystem& sys, const CMatrix& q) {
  const int d = sys.d();
  if (q.rows() > 10000) throw OracleScaleError("brute_force_expectation: d^m exceeds 10^4");
  if (q.rows() != q.cols()) throw DimensionError("brute_force_expectation: observable must be square");
  const auto sites = site_count(d, q.rows());
  if (!sites) throw DimensionError("brute_force_expectation: observable dimension is not a power of d");
  const auto words = all_word_products(sys, *sites);
  Complex total = 0.0;
  for (Eigen::Index a = 0; a < q.rows(); ++a) {
    const CMatrix left = sys.rho() * words[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < q.cols(); ++b) {
      if (q(a, b) == Complex(0.0)) continue;
      total += q(a, b) * (left * words[static_cast<std::size_t>(b)].adjoint()).trace();
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Detailed-balance checks on the state

double state_reflect_check(const PopescuSystem& sys, int m) {
  if (m < 1 || m > 5) throw std::invalid_argument("state_reflect_check: window must satisfy 1 <= m <= 5");
  const int d = sys.d();
  const CMatrix amplitudes = amplitude_table(sys, m);
  const auto count = amplitudes.rows();
  std::vector<Eigen::Index> reversed(static_cast<std::size_t>(count));
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    Word w = decode(idx, d, m);
    std::reverse(w.begin(), w.end());
    reversed[static_cast<std::size_t>(idx)] = encode(w, d);
  }
  double worst = 0.0;
  for (Eigen::Index a = 0; a < count; ++a)
    for (Eigen::Index b = 0; b < count; ++b)
      worst = std::max(worst, std::abs(amplitudes(a, b) - amplitudes(reversed[static_cast<std::size_t>(a)],
                                                                      reversed[static_cast<std::size_t>(b)])));
  return worst;
}

double state_real_check(const PopescuSystem& sys, int m) {
  if (m < 1 || m > 5) throw std::invalid_argument("state_real_check: window must satisfy 1 <= m <= 5");
  const CMatrix amplitudes = amplitude_table(sys, m);
  // Per-site transpose of |I><J| is |J><I|.
  return (amplitudes - amplitudes.transpose()).cwiseAbs().maxCoeff();
}

PopescuSystem conjugate_by(const PopescuSystem& sys, const CMatrix& w) {
  std::vector<CMatrix> v;
  v.reserve(sys.v().size());
  for (const auto& vk : sys.v()) v.push_back(w * vk * w.adjoint());
  return PopescuSystem(std::move(v), w * sys.rho() * w.adjoint());
}

PopescuSystem gauge_rotate(const PopescuSystem& sys, const CMatrix& g) {
  const int d = sys.d();
  if (g.rows() != d || g.cols() != d) throw DimensionError("gauge_rotate: g must be d×d");
  std::vector<CMatrix> v(static_cast<std::size_t>(d), CMatrix::Zero(sys.n(), sys.n()));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(k)] += g(k, j) * sys.v(j);
  return PopescuSystem(std::move(v), sys.rho());
}

}  // namespace fcs
