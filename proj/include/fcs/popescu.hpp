#pragma once

// Popescu systems and the finitely correlated states they generate.
//
// A system is d matrices v_k on C^n with sum_k v_k v_k* = I together with a
// density matrix rho that is invariant for the dual map x -> sum_k v_k* x v_k.
// The translation-invariant state it defines is
//
//   omega(|i_1..i_m><j_1..j_m|) = trace(rho v_{i_1}..v_{i_m} v_{j_m}*..v_{j_1}*),
//
// with site 1 the most significant (leftmost Kronecker) factor.

#include <optional>
#include <span>
#include <vector>

#include "fcs/numerics.hpp"
#include "fcs/su2.hpp"

namespace fcs {

using Word = std::vector<int>;  // 0-based letters in [0, d)

class PopescuSystem {
 public:
  /// Validates the Popescu relation, and the invariance, positivity and
  /// faithfulness of rho. Throws ConsistencyError / DimensionError.
  PopescuSystem(std::vector<CMatrix> v, CMatrix rho);

  /// As above, with rho computed as the Perron fixed point of the dual map.
  static PopescuSystem with_invariant_state(std::vector<CMatrix> v);

  int d() const { return static_cast<int>(v_.size()); }
  int n() const { return static_cast<int>(rho_.rows()); }
  const std::vector<CMatrix>& v() const { return v_; }
  const CMatrix& v(int k) const { return v_.at(static_cast<std::size_t>(k)); }
  const CMatrix& rho() const { return rho_; }

  /// ||sum_k v_k v_k* - I|| (operator norm).
  double popescu_residual() const;
  /// ||sum_k v_k* v_k - I||; zero for covariant systems.
  double dual_residual() const;

 private:
  std::vector<CMatrix> v_;
  CMatrix rho_;
};

/// Invariant density matrix of x -> sum_k v_k* x v_k, trace-normalized.
/// Power iteration with Cesàro averaging; falls back to a dense eigensolver.
CMatrix invariant_state(const std::vector<CMatrix>& v);

struct CovariantSystem {
  PopescuSystem base;
  Spin site_spin;
  Spin aux_spin;
  Irrep aux_rep;

  /// max over axes of || sum_j conj((S_a)_{kj}) v_j - [T_a, v_k] ||, with S the
  /// site generators and T the auxiliary ones.
  double covariance_residual() const;
};

/// Clebsch-Gordan construction: v_k*[m', m] = <s mu(k); t m' | t m>.
/// Throws FeasibilityError if t does not occur in s ⊗ t.
CovariantSystem build_covariant(Spin s, Spin t);

/// trace(rho v_I v_J*). Throws IndexError for letters outside [0, d).
Complex word_amplitude(const PopescuSystem& sys, std::span<const int> i, std::span<const int> j);

/// omega(Q) for Q on m = log_d(dim Q) sites by site-by-site contraction.
/// Throws DimensionError if the dimension of Q is not a power of d.
Complex local_expectation(const PopescuSystem& sys, const CMatrix& q);

/// omega(Q1 ⊗ Q2 ⊗ ... ⊗ Qm) using the maps E_X(x) = sum_ij X_ij v_i x v_j*.
Complex product_expectation(const PopescuSystem& sys, const std::vector<CMatrix>& factors);

/// E_X(x) = sum_ij X_ij v_i x v_j*.
CMatrix apply_site_map(const PopescuSystem& sys, const CMatrix& x_site, const CMatrix& x);

/// Reference evaluation of omega(Q): literal sum over all word pairs.
/// Throws OracleScaleError when d^m exceeds 10^4.
Complex brute_force_expectation(const PopescuSystem& sys, const CMatrix& q);

/// Number of sites m with d^m == dim, or nullopt.
std::optional<int> site_count(int d, Eigen::Index dim);

/// max over elementary m-site observables of |omega(Q) - omega(reflected Q)|.
double state_reflect_check(const PopescuSystem& sys, int m);

/// max over elementary m-site observables of |omega(Q) - omega(Q^t)|.
double state_real_check(const PopescuSystem& sys, int m);

/// Conjugates v_k <- W v_k W* and rho <- W rho W*.
PopescuSystem conjugate_by(const PopescuSystem& sys, const CMatrix& w);

/// Replaces v_k <- sum_j g_kj v_j for a unitary d×d matrix g.
PopescuSystem gauge_rotate(const PopescuSystem& sys, const CMatrix& g);

}  // namespace fcs
