#include "fcs/su2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fcs {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Spin

Spin Spin::parse(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  if (slash != std::string::npos) {
    const int num = std::stoi(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("Spin: bad numerator in '" + text + "'");
    const std::string den_text = text.substr(slash + 1);
    const int den = std::stoi(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument("Spin: bad denominator in '" + text + "'");
    if (den == 1) return Spin(2 * num);
    if (den == 2) return Spin(num);
    throw std::invalid_argument("Spin: denominator must be 1 or 2 in '" + text + "'");
  }
  const double j = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("Spin: cannot parse '" + text + "'");
  return from_double(j);
}

Spin Spin::from_double(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded < 0) {
    throw std::invalid_argument("Spin: value is not a nonnegative half-integer");
  }
  return Spin(static_cast<int>(rounded));
}

std::string Spin::str() const {
  if (is_integer()) return std::to_string(twice_j_ / 2);
  return std::to_string(twice_j_) + "/2";
}

// ---------------------------------------------------------------------------
// Generators

const CMatrix& Irrep::generator(int axis) const {
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
    default: throw IndexError("Irrep::generator: axis must be 0, 1 or 2");
  }
}

Irrep make_irrep(Spin spin) {
  const int d = spin.dim();
  const double j = spin.value();
  CMatrix sz = CMatrix::Zero(d, d);
  CMatrix raise = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = 0.5 * spin.twice_weight(k);
    sz(k, k) = m;
    // S+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) raise(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMatrix lower = raise.adjoint();
  const Complex i(0.0, 1.0);
  Irrep out{spin, (raise + lower) / 2.0, (raise - lower) / (2.0 * i), sz};
  return out;
}

CMatrix group_element(const Irrep& irrep, const std::array<double, 3>& axis) {
  const Complex i(0.0, 1.0);
  const CMatrix gen = axis[0] * irrep.sx + axis[1] * irrep.sy + axis[2] * irrep.sz;
  return expm(-i * gen);
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan (Racah formula, exact rationals)

namespace {

mp::cpp_int factorial(int n) {
  mp::cpp_int out = 1;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

void check_projection(int twice_j, int twice_m, const char* name) {
  if (std::abs(twice_m) > twice_j || (twice_j - twice_m) % 2 != 0) {
    throw std::invalid_argument(std::string("cg_coefficient: ") + name +
                                " is out of range or off the half-integer lattice");
  }
}

}  // namespace

double ExactCG::value() const {
  if (sign == 0) return 0.0;
  const double mag = std::sqrt(static_cast<double>(mp::numerator(squared)) /
                               static_cast<double>(mp::denominator(squared)));
  return sign * mag;
}

ExactCG cg_exact(int j1, int j2, int j, int m1, int m2, int m) {
  check_projection(j1, m1, "m1");
  check_projection(j2, m2, "m2");
  check_projection(j, m, "m");
  ExactCG out;
  if (m1 + m2 != m) return out;
  if (j < std::abs(j1 - j2) || j > j1 + j2 || (j1 + j2 + j) % 2 != 0) return out;

  // All quantities below are (doubled sum)/2 and therefore integers.
  const int a = (j1 + j2 - j) / 2;
  const int b = (j1 - j2 + j) / 2;
  const int c = (-j1 + j2 + j) / 2;
  const int total = (j1 + j2 + j) / 2 + 1;
  const int j1m = (j1 - m1) / 2, j1p = (j1 + m1) / 2;
  const int j2m = (j2 - m2) / 2, j2p = (j2 + m2) / 2;
  const int jm = (j - m) / 2, jp = (j + m) / 2;
  const int shift1 = (j - j2 + m1) / 2;
  const int shift2 = (j - j1 - m2) / 2;

  const int kmin = std::max({0, -shift1, -shift2});
  const int kmax = std::min({a, j1m, j2p});
  mp::cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const mp::cpp_int den = factorial(k) * factorial(a - k) * factorial(j1m - k) *
                            factorial(j2p - k) * factorial(shift1 + k) * factorial(shift2 + k);
    const mp::cpp_rational term(mp::cpp_int(1), den);
    sum += (k % 2 == 0) ? term : mp::cpp_rational(-term);
  }
  if (sum == 0) return out;

  const mp::cpp_rational prefactor(
      (j + 1) * factorial(a) * factorial(b) * factorial(c) * factorial(jp) * factorial(jm) *
          factorial(j1m) * factorial(j1p) * factorial(j2m) * factorial(j2p),
      factorial(total));
  out.sign = sum > 0 ? 1 : -1;
  out.squared = prefactor * sum * sum;
  return out;
}

double cg_coefficient(Spin j1, Spin j2, Spin j, int twice_m1, int twice_m2, int twice_m) {
  return cg_exact(j1.twice(), j2.twice(), j.twice(), twice_m1, twice_m2, twice_m).value();
}

// ---------------------------------------------------------------------------
// Covariant embedding rule

bool feasible_aux(Spin s, Spin t) {
  // t - |t - s| in doubled units; must be a nonnegative even number.
  const int slack = t.twice() - std::abs(t.twice() - s.twice());
  return slack >= 0 && slack % 2 == 0;
}

std::string feasibility_diagnostic(Spin s, Spin t) {
  if (feasible_aux(s, t)) return {};
  std::ostringstream msg;
  msg << "auxiliary spin t=" << t.str() << " does not occur in s⊗t for s=" << s.str()
      << ": t - |t - s| must be a nonnegative integer";
  if (!s.is_integer()) msg << " (impossible for half-integer s)";
  return msg.str();
}

// ---------------------------------------------------------------------------
// Real structure

CMatrix conjugation_matrix(const Irrep& irrep) {
  const Complex i(0.0, 1.0);
  return expm(i * M_PI * irrep.sy);
}

int frobenius_schur(const Irrep& irrep) {
  const CMatrix c = conjugation_matrix(irrep);
  // C g C* = conj(g) on a handful of generic group elements.
  const std::array<std::array<double, 3>, 3> axes{{{0.3, -1.1, 0.7}, {2.0, 0.4, -0.9}, {-0.5, 0.2, 1.7}}};
  for (const auto& axis : axes) {
    const CMatrix g = group_element(irrep, axis);
    if (max_abs_diff(c * g * c.adjoint(), g.conjugate()) > 1e-8) {
      throw ConsistencyError("frobenius_schur: conjugation matrix does not intertwine");
    }
  }
  if (max_abs_diff(c.transpose(), c) <= 1e-8) return 1;
  if (max_abs_diff(c.transpose(), CMatrix(-c)) <= 1e-8) return -1;
  throw ConsistencyError("frobenius_schur: conjugation matrix is neither symmetric nor antisymmetric");
}

std::optional<CMatrix> real_basis(const Irrep& irrep) {
  if (frobenius_schur(irrep) != 1) return std::nullopt;
  // C is symmetric unitary, so its principal square root U is symmetric
  // unitary with U^T U = C. Then W = U makes W g W* real:
  // conj(W g W*) = conj(W) conj(g) W^T = conj(W) C g C* W^T = W g W*.
  const CMatrix c = conjugation_matrix(irrep);
  Eigen::ComplexSchur<CMatrix> schur(c);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  CMatrix root = CMatrix::Zero(c.rows(), c.cols());
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    // C is normal, so T is diagonal up to rounding. Pick the branch so
    // that -1 maps to +i consistently.
    Complex lambda = t(k, k);
    if (std::abs(lambda.imag()) < 1e-12) lambda = Complex(lambda.real(), 0.0);
    root(k, k) = std::sqrt(lambda);
  }
  CMatrix w = q * root * q.adjoint();
  // Symmetrize away rounding so W^T W = C holds to machine precision.
  w = (0.5 * (w + w.transpose())).eval();
  return w;
}

}  // namespace fcs
