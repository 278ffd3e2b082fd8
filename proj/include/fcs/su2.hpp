#pragma once

// Spin representations of SU(2).
//
// Spins and magnetic quantum numbers are stored doubled (twice_j, twice_m) so
// that half-integers are exact. Basis vectors of a spin-j module are ordered
// by descending weight: index k carries m = j - k.

#include <array>
#include <compare>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "fcs/numerics.hpp"

namespace fcs {

class Spin {
 public:
  constexpr Spin() = default;
  constexpr explicit Spin(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 0) throw std::invalid_argument("Spin: twice_j must be nonnegative");
  }

  /// Parses "1", "0.5", "3/2", "4.5". Throws std::invalid_argument.
  static Spin parse(const std::string& text);
  static Spin from_double(double j);

  constexpr int twice() const { return twice_j_; }
  constexpr int dim() const { return twice_j_ + 1; }
  constexpr bool is_integer() const { return twice_j_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_j_; }

  /// Doubled weight of basis index k (descending order).
  constexpr int twice_weight(int k) const { return twice_j_ - 2 * k; }

  /// "1", "1/2", "9/2".
  std::string str() const;

  constexpr auto operator<=>(const Spin&) const = default;

 private:
  int twice_j_ = 0;
};

struct Irrep {
  Spin spin;
  CMatrix sx, sy, sz;

  int dim() const { return spin.dim(); }
  const CMatrix& generator(int axis) const;
};

Irrep make_irrep(Spin spin);

/// exp(-i axis·S) for the given irrep.
CMatrix group_element(const Irrep& irrep, const std::array<double, 3>& axis);

/// Exact Clebsch-Gordan coefficient in the form sign·sqrt(squared).
struct ExactCG {
  int sign = 0;  // -1, 0, +1
  boost::multiprecision::cpp_rational squared;

  double value() const;
};

/// <j1 m1; j2 m2 | j m> (Condon-Shortley), all arguments doubled. Returns 0
/// for selection-rule or triangle violations. Throws std::invalid_argument if
/// an m is out of range or off its half-integer lattice.
ExactCG cg_exact(int twice_j1, int twice_j2, int twice_j, int twice_m1, int twice_m2,
                 int twice_m);

double cg_coefficient(Spin j1, Spin j2, Spin j, int twice_m1, int twice_m2, int twice_m);

/// True iff spin t occurs in s ⊗ t, i.e. t - |t - s| is a nonnegative integer.
bool feasible_aux(Spin s, Spin t);

/// Human-readable reason why (s, t) is infeasible; empty if feasible.
std::string feasibility_diagnostic(Spin s, Spin t);

/// The conjugation matrix exp(iπ S_y), which maps the representation to its
/// complex conjugate.
CMatrix conjugation_matrix(const Irrep& irrep);

/// Frobenius-Schur indicator: +1 if the irrep has a real form, -1 if it is
/// quaternionic. Throws ConsistencyError if the conjugation matrix is neither
/// symmetric nor antisymmetric, or fails to intertwine with the conjugate.
int frobenius_schur(const Irrep& irrep);

/// Unitary W with W g W* real for every group element g, when one exists.
std::optional<CMatrix> real_basis(const Irrep& irrep);

}  // namespace fcs
