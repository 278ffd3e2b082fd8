#pragma once

// Local Hamiltonians, their detailed-balance predicates, the model zoo and
// the variational mean-energy sweep over auxiliary spins.
//
// Every zoo model is written with spin operators S ([S_x, S_y] = i S_z), not
// Pauli matrices. Pauli-normalized Hamiltonians differ by a global factor
// of 4, which rescales energies but leaves predicates, decay rates and the
// location of the energy minimum unchanged.

#include <optional>
#include <string>
#include <vector>

#include "fcs/popescu.hpp"
#include "fcs/su2.hpp"

namespace fcs {

class LocalHamiltonian {
 public:
  /// Throws DimensionError if h0 is not d^m × d^m, ConsistencyError if it
  /// is not Hermitian within 1e-12.
  LocalHamiltonian(int d, int m, CMatrix h0, std::string label);

  int d() const { return d_; }
  int m() const { return m_; }
  const CMatrix& h0() const { return h0_; }
  const std::string& label() const { return label_; }

 private:
  int d_;
  int m_;
  CMatrix h0_;
  std::string label_;
};

/// Reverses the order of tensor factors of an operator on d^m sites.
CMatrix reflect_sites(const CMatrix& q, int d, int m);

/// Reverses the order of tensor factors.
LocalHamiltonian reflect(const LocalHamiltonian& h);

/// Transposes each tensor factor (equal to the global transpose).
LocalHamiltonian site_transpose(const LocalHamiltonian& h);

struct SymmetryReport {
  bool lattice_symmetric = false;
  bool real = false;
  bool detailed_balance = false;
};

SymmetryReport detailed_balance_check(const LocalHamiltonian& h);

/// max_a || [h0, sum_sites S_a] ||; zero iff h0 is SU(2)-invariant.
double g_invariance_check(const LocalHamiltonian& h, const Irrep& site);

/// Embeds a single-site operator at position `site` of an m-site chain.
CMatrix embed(const CMatrix& op, int site, int m);

struct ModelSpec {
  std::string name;  // ising, xy, majumdar_ghosh, xxx, aklt
  double lambda = 0.0;             // xy field
  Spin s{2};                       // xxx site spin
};

/// Builds a zoo Hamiltonian. Throws ModelError for unknown names.
LocalHamiltonian model_zoo(const ModelSpec& spec);

LocalHamiltonian ising();
LocalHamiltonian xy(double lambda);
LocalHamiltonian majumdar_ghosh();
LocalHamiltonian xxx(Spin s);
LocalHamiltonian aklt();

/// Re omega(h0); throws ConsistencyError if the imaginary part exceeds
/// 1e-10 and DimensionError on a site-dimension mismatch.
double mean_energy(const PopescuSystem& sys, const LocalHamiltonian& h);

/// The closed-form contraction
/// phi0((v2 v1* + v3 v2*)^2 + (v1 v2* + v2 v3*)^2 + (v1 v1* - v3 v3*)^2).
/// This is not the Heisenberg bond energy: on covariant systems the two
/// ladder squares are traceless and the value is -omega(S_z ⊗ S_z), i.e.
/// -omega(S·S)/3. Use mean_energy for energies. Requires d = 3.
Complex spin1_heisenberg_contraction(const PopescuSystem& sys);

struct SweepRow {
  Spin t;
  bool feasible = false;
  double energy = 0.0;  // NaN when infeasible
  double alpha = 0.0;
  double xi = 0.0;
};

struct SweepResult {
  std::string model;
  Spin s;
  std::vector<SweepRow> rows;  // ascending t
  Spin argmin_t;
};

/// Rows for t = 1/2, 1, ..., t_max. Rows are computed on up to `threads`
/// workers (0: read FCS_THREADS, default 1); the result does not depend on
/// the schedule. Throws EmptySweepError if no t in range is feasible.
SweepResult variational_sweep(Spin s, const LocalHamiltonian& h, Spin t_max, int threads = 0);

/// Worker count from FCS_THREADS (>= 1).
int thread_budget();

}  // namespace fcs
