#include "fcs/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include <Eigen/Eigenvalues>

#include "fcs/transfer.hpp"

namespace fcs {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kTieTolerance = 1e-9;

CMatrix heisenberg_bond(const Irrep& rep) {
  return kron(rep.sx, rep.sx) + kron(rep.sy, rep.sy) + kron(rep.sz, rep.sz);
}

}  // namespace

LocalHamiltonian::LocalHamiltonian(int d, int m, CMatrix h0, std::string label)
    : d_(d), m_(m), h0_(std::move(h0)), label_(std::move(label)) {
  if (d < 1 || m < 1) throw DimensionError("LocalHamiltonian: d and m must be positive");
  const auto sites = site_count(d, h0_.rows());
  if (h0_.rows() != h0_.cols() || (d > 1 && sites != m) || (d == 1 && h0_.rows() != 1)) {
    throw DimensionError("LocalHamiltonian: h0 must be d^m × d^m");
  }
  if (!all_finite(h0_)) throw ConsistencyError("LocalHamiltonian: non-finite entry in h0");
  if (max_abs_diff(h0_, CMatrix(h0_.adjoint())) > kHermitianTolerance) {
    throw ConsistencyError("LocalHamiltonian: h0 is not Hermitian");
  }
}

CMatrix reflect_sites(const CMatrix& q, int d, int m) {
  const Eigen::Index dim = q.rows();
  std::vector<Eigen::Index> rev(static_cast<std::size_t>(dim));
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index rest = idx;
    Eigen::Index out = 0;
    for (int site = 0; site < m; ++site) {
      out = out * d + rest % d;
      rest /= d;
    }
    rev[static_cast<std::size_t>(idx)] = out;
  }
  CMatrix out(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b)
      out(rev[static_cast<std::size_t>(a)], rev[static_cast<std::size_t>(b)]) = q(a, b);
  return out;
}

LocalHamiltonian reflect(const LocalHamiltonian& h) {
  return LocalHamiltonian(h.d(), h.m(), reflect_sites(h.h0(), h.d(), h.m()), h.label() + "~");
}

LocalHamiltonian site_transpose(const LocalHamiltonian& h) {
  // (A ⊗ B)^T = A^T ⊗ B^T, so the per-site transpose is the global one.
  return LocalHamiltonian(h.d(), h.m(), h.h0().transpose(), h.label() + "^t");
}

SymmetryReport detailed_balance_check(const LocalHamiltonian& h) {
  SymmetryReport out;
  out.lattice_symmetric = operator_norm(reflect(h).h0() - h.h0()) <= kTolerance;
  out.real = operator_norm(site_transpose(h).h0() - h.h0()) <= kTolerance;
  out.detailed_balance = out.lattice_symmetric && out.real;
  return out;
}

CMatrix embed(const CMatrix& op, int site, int m) {
  const auto d = op.rows();
  std::vector<CMatrix> factors(static_cast<std::size_t>(m), CMatrix::Identity(d, d));
  factors.at(static_cast<std::size_t>(site)) = op;
  return kron_all(factors);
}

double g_invariance_check(const LocalHamiltonian& h, const Irrep& site) {
  if (site.dim() != h.d()) throw DimensionError("g_invariance_check: irrep dimension differs from d");
  double worst = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    CMatrix total = CMatrix::Zero(h.h0().rows(), h.h0().cols());
    for (int k = 0; k < h.m(); ++k) total += embed(site.generator(axis), k, h.m());
    worst = std::max(worst, operator_norm(commutator(h.h0(), total)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Zoo

LocalHamiltonian ising() {
  const Irrep half = make_irrep(Spin(1));
  return LocalHamiltonian(2, 2, kron(half.sz, half.sz), "ising");
}

LocalHamiltonian xy(double lambda) {
  const Irrep half = make_irrep(Spin(1));
  const CMatrix id = CMatrix::Identity(2, 2);
  // Each site field is shared by its two bonds, so it enters with weight 1/2.
  CMatrix h0 = -(kron(half.sx, half.sx) + kron(half.sy, half.sy)) -
               0.5 * lambda * (kron(half.sz, id) + kron(id, half.sz));
  return LocalHamiltonian(2, 2, std::move(h0), "xy");
}

LocalHamiltonian majumdar_ghosh() {
  const Irrep half = make_irrep(Spin(1));
  CMatrix total_sq = CMatrix::Zero(8, 8);
  for (int axis = 0; axis < 3; ++axis) {
    CMatrix total = CMatrix::Zero(8, 8);
    for (int k = 0; k < 3; ++k) total += embed(half.generator(axis), k, 3);
    total_sq += total * total;
  }
  // (S_1+S_2+S_3)^2 has eigenvalues 3/4 (two doublets) and 15/4 (quartet);
  // the Lagrange interpolant picks out the quartet.
  const CMatrix id = CMatrix::Identity(8, 8);
  CMatrix p = (total_sq - 0.75 * id) / (3.75 - 0.75);
  return LocalHamiltonian(2, 3, std::move(p), "majumdar_ghosh");
}

LocalHamiltonian xxx(Spin s) {
  if (s.twice() < 1) throw ModelError("xxx: site spin must be at least 1/2");
  return LocalHamiltonian(s.dim(), 2, heisenberg_bond(make_irrep(s)), "xxx");
}

LocalHamiltonian aklt() {
  const CMatrix ss = heisenberg_bond(make_irrep(Spin(2)));
  CMatrix h0 = 0.5 * ss + (1.0 / 6.0) * ss * ss + (1.0 / 3.0) * CMatrix::Identity(9, 9);
  return LocalHamiltonian(3, 2, std::move(h0), "aklt");
}

LocalHamiltonian model_zoo(const ModelSpec& spec) {
  if (spec.name == "ising") return ising();
  if (spec.name == "xy") return xy(spec.lambda);
  if (spec.name == "majumdar_ghosh" || spec.name == "mg") return majumdar_ghosh();
  if (spec.name == "xxx") return xxx(spec.s);
  if (spec.name == "aklt") return aklt();
  throw ModelError("model_zoo: unknown model '" + spec.name + "'");
}

// ---------------------------------------------------------------------------
// Energies

double mean_energy(const PopescuSystem& sys, const LocalHamiltonian& h) {
  if (sys.d() != h.d()) throw DimensionError("mean_energy: site dimension of system and Hamiltonian differ");
  const Complex e = local_expectation(sys, h.h0());
  if (std::abs(e.imag()) > kTolerance) {
    throw ConsistencyError("mean_energy: expectation of a Hermitian observable has an imaginary part");
  }
  return e.real();
}

Complex spin1_heisenberg_contraction(const PopescuSystem& sys) {
  if (sys.d() != 3) throw DimensionError("spin1_heisenberg_contraction: requires d = 3");
  const auto& v = sys.v();
  const CMatrix raise = v[1] * v[0].adjoint() + v[2] * v[1].adjoint();
  const CMatrix lower = v[0] * v[1].adjoint() + v[1] * v[2].adjoint();
  const CMatrix diag = v[0] * v[0].adjoint() - v[2] * v[2].adjoint();
  return (sys.rho() * (raise * raise + lower * lower + diag * diag)).trace();
}

// ---------------------------------------------------------------------------
// Sweep

int thread_budget() {
  if (const char* env = std::getenv("FCS_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1) return static_cast<int>(std::min(value, 256L));
  }
  return 1;
}

SweepResult variational_sweep(Spin s, const LocalHamiltonian& h, Spin t_max, int threads) {
  if (h.d() != s.dim()) throw DimensionError("variational_sweep: Hamiltonian site dimension is not 2s+1");
  SweepResult result;
  result.model = h.label();
  result.s = s;
  for (int twice_t = 1; twice_t <= t_max.twice(); ++twice_t) {
    SweepRow row;
    row.t = Spin(twice_t);
    row.feasible = feasible_aux(s, row.t);
    result.rows.push_back(row);
  }
  const bool any = std::any_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return r.feasible; });
  if (!any) {
    throw EmptySweepError("variational_sweep: no auxiliary spin t <= " + t_max.str() + " is feasible for s=" +
                          s.str() + " (t must occur in s⊗t: t - |t - s| a nonnegative integer)");
  }

  auto evaluate = [&](SweepRow& row) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (!row.feasible) {
      row.energy = row.alpha = row.xi = nan;
      return;
    }
    const CovariantSystem sys = build_covariant(s, row.t);
    row.energy = mean_energy(sys.base, h);
    const SpectralReport report = spectral_report(build_transfer(sys.base));
    row.alpha = report.alpha;
    row.xi = report.correlation_length;
  };

  const int workers = std::max(1, std::min<int>(threads > 0 ? threads : thread_budget(),
                                                static_cast<int>(result.rows.size())));
  if (workers == 1) {
    for (auto& row : result.rows) evaluate(row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < result.rows.size(); i = next++) evaluate(result.rows[i]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const SweepRow* best = nullptr;
  for (const auto& row : result.rows) {
    if (!row.feasible) continue;
    if (best == nullptr || row.energy < best->energy - kTieTolerance) best = &row;
  }
  result.argmin_t = best->t;
  return result;
}

}  // namespace fcs
