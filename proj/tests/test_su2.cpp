#include <doctest.h>

#include <cmath>

#include "fcs/su2.hpp"
#include "test_support.hpp"

using namespace fcs;
namespace mp = boost::multiprecision;

TEST_CASE("Spin parsing and basics") {
  CHECK(Spin::parse("1").twice() == 2);
  CHECK(Spin::parse("0.5").twice() == 1);
  CHECK(Spin::parse("3/2").twice() == 3);
  CHECK(Spin::parse("4.5").twice() == 9);
  CHECK(Spin::parse("2/1").twice() == 4);
  CHECK_THROWS(Spin::parse("0.3"));
  CHECK_THROWS(Spin::parse("-1"));
  CHECK_THROWS(Spin::parse("1/3"));
  CHECK_THROWS(Spin::parse("abc"));
  CHECK(Spin(3).dim() == 4);
  CHECK(Spin(4).is_integer());
  CHECK_FALSE(Spin(3).is_integer());
  CHECK(Spin(3).str() == "3/2");
  CHECK(Spin(2).twice_weight(2) == -2);
}

TEST_CASE("make_irrep spin 1/2 is Pauli/2") {
  const Irrep r = make_irrep(Spin(1));
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, Complex(0, -0.5), Complex(0, 0.5), 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  CHECK(max_abs_diff(r.sx, sx) < 1e-15);
  CHECK(max_abs_diff(r.sy, sy) < 1e-15);
  CHECK(max_abs_diff(r.sz, sz) == 0.0);
}

TEST_CASE("make_irrep spin 1 uses the 1/sqrt(2) normalization") {
  const Irrep r = make_irrep(Spin(2));
  CMatrix sx(3, 3);
  sx << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  sx /= std::sqrt(2.0);
  CHECK(max_abs_diff(r.sx, sx) < 1e-15);
  CMatrix sz = CMatrix::Zero(3, 3);
  sz.diagonal() << 1.0, 0.0, -1.0;
  CHECK(max_abs_diff(r.sz, sz) == 0.0);
}

TEST_CASE("make_irrep spin 0 is trivial") {
  const Irrep r = make_irrep(Spin(0));
  CHECK(r.sx.rows() == 1);
  CHECK(r.sx(0, 0) == Complex(0.0));
  CHECK(r.sy(0, 0) == Complex(0.0));
  CHECK(r.sz(0, 0) == Complex(0.0));
}

TEST_CASE("generators satisfy su(2) relations for 2j <= 9") {
  const Complex i(0.0, 1.0);
  for (int tj = 0; tj <= 9; ++tj) {
    const Irrep r = make_irrep(Spin(tj));
    const double j = 0.5 * tj;
    const auto n = r.dim();
    CHECK(max_abs_diff(commutator(r.sx, r.sy), CMatrix(i * r.sz)) <= 1e-12);
    CHECK(max_abs_diff(commutator(r.sy, r.sz), CMatrix(i * r.sx)) <= 1e-12);
    CHECK(max_abs_diff(commutator(r.sz, r.sx), CMatrix(i * r.sy)) <= 1e-12);
    const CMatrix casimir = r.sx * r.sx + r.sy * r.sy + r.sz * r.sz;
    CHECK(max_abs_diff(casimir, CMatrix(j * (j + 1) * CMatrix::Identity(n, n))) <= 1e-12);
    for (int k = 0; k < n; ++k) CHECK(r.sz(k, k) == Complex(j - k));
    CHECK(r.sx.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.sz.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.sy.real().cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(r.sy, CMatrix(r.sy.adjoint())) == 0.0);
  }
}

TEST_CASE("group_element") {
  const Irrep half = make_irrep(Spin(1));
  CHECK(max_abs_diff(group_element(half, {0, 0, 0}), CMatrix(CMatrix::Identity(2, 2))) == 0.0);

  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = std::exp(Complex(0, -M_PI / 2));
  expected(1, 1) = std::exp(Complex(0, M_PI / 2));
  CHECK(max_abs_diff(group_element(half, {0, 0, M_PI}), expected) < 1e-14);

  // Wigner small-d for j = 1 at β = π (closed form, independent of expm):
  // d_{1,1} = (1+cosβ)/2, d_{1,-1} = (1-cosβ)/2, d_{0,0} = cosβ, d_{1,0} = -sinβ/√2.
  const double beta = M_PI;
  CMatrix wigner(3, 3);
  const double c = std::cos(beta), s = std::sin(beta);
  wigner << (1 + c) / 2, -s / std::sqrt(2.0), (1 - c) / 2, s / std::sqrt(2.0), c, -s / std::sqrt(2.0),
      (1 - c) / 2, s / std::sqrt(2.0), (1 + c) / 2;
  const Irrep one = make_irrep(Spin(2));
  CHECK(max_abs_diff(group_element(one, {0, beta, 0}), wigner) < 1e-13);
  CMatrix anti = CMatrix::Zero(3, 3);
  anti(0, 2) = 1.0;
  anti(1, 1) = -1.0;
  anti(2, 0) = 1.0;
  CHECK(max_abs_diff(group_element(one, {0, beta, 0}), anti) < 1e-13);
}

TEST_CASE("group_element is unitary and a homomorphism along an axis") {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int tj = 1; tj <= 6; ++tj) {
    const Irrep r = make_irrep(Spin(tj));
    for (int trial = 0; trial < 5; ++trial) {
      const std::array<double, 3> axis{u(testing::rng()), u(testing::rng()), u(testing::rng())};
      const CMatrix g = group_element(r, axis);
      CHECK(max_abs_diff(CMatrix(g * g.adjoint()), CMatrix(CMatrix::Identity(r.dim(), r.dim()))) <= 1e-10);
      const double a = u(testing::rng()), b = u(testing::rng());
      const CMatrix lhs = group_element(r, {0, 0, a}) * group_element(r, {0, 0, b});
      CHECK(max_abs_diff(lhs, group_element(r, {0, 0, a + b})) <= 1e-10);
    }
  }
}

TEST_CASE("cg_coefficient closed-form values") {
  const Spin half(1), one(2), zero(0);
  CHECK(cg_coefficient(half, half, one, 1, 1, 0) == 0.0);  // m1 + m2 != m
  CHECK(cg_coefficient(half, half, one, 1, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cg_coefficient(half, half, zero, 1, -1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(cg_coefficient(half, half, zero, -1, 1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  // Triangle violation yields zero.
  CHECK(cg_coefficient(half, half, Spin(4), 1, 1, 2) == 0.0);
  CHECK_THROWS(cg_coefficient(half, half, one, 3, -1, 2));
  CHECK_THROWS(cg_coefficient(half, half, one, 0, 1, 1));

  const ExactCG exact = cg_exact(1, 1, 0, 1, -1, 0);
  CHECK(exact.sign == 1);
  CHECK(exact.squared == mp::cpp_rational(1, 2));
}

TEST_CASE("cg_coefficient matches the lowering-operator oracle") {
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const auto table = testing::cg_oracle(Spin(a), Spin(b));
      for (const auto& [key, expected] : table) {
        const auto [tj, tm1, tm2, tm] = key;
        const double got = cg_coefficient(Spin(a), Spin(b), Spin(tj), tm1, tm2, tm);
        CHECK_MESSAGE(std::abs(got - expected) <= 1e-12,
                      "j1=", a, "/2 j2=", b, "/2 j=", tj, "/2 m1=", tm1, " m2=", tm2, " m=", tm);
      }
    }
  }
}

TEST_CASE("cg orthogonality for 2j <= 9") {
  for (int a = 0; a <= 9; ++a) {
    for (int b = 0; b <= 9; ++b) {
      for (int j = std::abs(a - b); j <= a + b; j += 2) {
        for (int jp = std::abs(a - b); jp <= a + b; jp += 2) {
          for (int m = -std::min(j, jp); m <= std::min(j, jp); m += 2) {
            double sum = 0.0;
            for (int m1 = -a; m1 <= a; m1 += 2) {
              const int m2 = m - m1;
              if (std::abs(m2) > b || (b - m2) % 2 != 0) continue;
              sum += cg_coefficient(Spin(a), Spin(b), Spin(j), m1, m2, m) *
                     cg_coefficient(Spin(a), Spin(b), Spin(jp), m1, m2, m);
            }
            CHECK(std::abs(sum - (j == jp ? 1.0 : 0.0)) <= 1e-12);
          }
        }
      }
    }
  }
}

namespace {

// sqrt(x) * C for an exact C, as (sign, squared) with exact rationals.
ExactCG scale(const ExactCG& c, const mp::cpp_rational& x_squared) {
  return ExactCG{c.sign, c.squared * x_squared};
}

// Checks p = q + r exactly, where each term is sign * sqrt(squared).
bool exact_sum_holds(const ExactCG& p, const ExactCG& q, const ExactCG& r) {
  // p - q = r  =>  p² + q² - 2pq = r²  =>  (p² + q² - r²)² = 4 p² q² with
  // sign(p² + q² - r²) = sign(pq).
  const mp::cpp_rational lhs = p.squared + q.squared - r.squared;
  if (lhs * lhs != 4 * p.squared * q.squared) return false;
  const int pq_sign = p.sign * q.sign;
  if (lhs == 0) return pq_sign == 0 || p.squared * q.squared == 0;
  return (lhs > 0 ? 1 : -1) == pq_sign;
}

ExactCG cg_or_zero(int j1, int j2, int j, int m1, int m2, int m) {
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m) > j) return {};
  return cg_exact(j1, j2, j, m1, m2, m);
}

}  // namespace

TEST_CASE("cg lowering recursion holds in exact arithmetic") {
  // sqrt((j+m)(j-m+1)) <m1 m2|j m-1> = sqrt((j1-m1)(j1+m1+1)) <m1+1 m2|j m>
  //                                 + sqrt((j2-m2)(j2+m2+1)) <m1 m2+1|j m>
  // with all quantities doubled: (j+m)(j-m+1) = (tj+tm)(tj-tm+2)/4.
  int checked = 0;
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      for (int j = std::abs(a - b); j <= a + b; j += 2) {
        for (int m = -j + 2; m <= j; m += 2) {
          for (int m1 = -a; m1 <= a; m1 += 2) {
            const int m2 = m - 2 - m1;
            if (std::abs(m2) > b || (b - m2) % 2 != 0) continue;
            const ExactCG lhs = scale(cg_or_zero(a, b, j, m1, m2, m - 2), mp::cpp_rational((j + m) * (j - m + 2), 4));
            const ExactCG t1 = scale(cg_or_zero(a, b, j, m1 + 2, m2, m), mp::cpp_rational((a - m1) * (a + m1 + 2), 4));
            const ExactCG t2 = scale(cg_or_zero(a, b, j, m1, m2 + 2, m), mp::cpp_rational((b - m2) * (b + m2 + 2), 4));
            CHECK(exact_sum_holds(lhs, t1, t2));
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("feasible_aux") {
  CHECK(feasible_aux(Spin(2), Spin(1)));
  CHECK_FALSE(feasible_aux(Spin(2), Spin(0)));
  for (int t = 0; t <= 9; ++t) CHECK_FALSE(feasible_aux(Spin(1), Spin(t)));
  // s = 1: every t >= 1/2 works.
  for (int t = 1; t <= 9; ++t) CHECK(feasible_aux(Spin(2), Spin(t)));
  // s = 2: t = 1/2 would need 2t - s = -1.
  CHECK_FALSE(feasible_aux(Spin(4), Spin(1)));
  CHECK(feasible_aux(Spin(4), Spin(2)));
  CHECK(feasible_aux(Spin(0), Spin(5)));
  CHECK_FALSE(feasibility_diagnostic(Spin(2), Spin(0)).empty());
  CHECK(feasibility_diagnostic(Spin(2), Spin(1)).empty());
}

TEST_CASE("feasible_aux agrees with the Clebsch-Gordan decomposition") {
  // t occurs in s⊗t iff |s - t| <= t <= s + t and s + 2t is an integer;
  // enumerate the ladder |t-s|, |t-s|+1, ..., t+s directly.
  for (int s = 0; s <= 9; ++s) {
    for (int t = 0; t <= 9; ++t) {
      bool occurs = false;
      for (int j = std::abs(t - s); j <= t + s; j += 2) occurs = occurs || j == t;
      CHECK(feasible_aux(Spin(s), Spin(t)) == occurs);
    }
  }
}

TEST_CASE("frobenius_schur indicator tracks integrality") {
  CHECK(frobenius_schur(make_irrep(Spin(2))) == 1);
  CHECK(frobenius_schur(make_irrep(Spin(1))) == -1);
  CHECK(frobenius_schur(make_irrep(Spin(0))) == 1);
  for (int tj = 0; tj <= 9; ++tj) CHECK(frobenius_schur(make_irrep(Spin(tj))) == (tj % 2 == 0 ? 1 : -1));

  CMatrix anti = CMatrix::Zero(3, 3);
  anti(0, 2) = 1.0;
  anti(1, 1) = -1.0;
  anti(2, 0) = 1.0;
  CHECK(max_abs_diff(conjugation_matrix(make_irrep(Spin(2))), anti) < 1e-13);
}

TEST_CASE("real_basis") {
  const auto w0 = real_basis(make_irrep(Spin(0)));
  REQUIRE(w0.has_value());
  CHECK(std::abs(std::abs((*w0)(0, 0)) - 1.0) < 1e-14);

  CHECK_FALSE(real_basis(make_irrep(Spin(1))).has_value());
  CHECK_FALSE(real_basis(make_irrep(Spin(3))).has_value());

  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  for (int tj : {2, 4, 6, 8}) {
    const Irrep r = make_irrep(Spin(tj));
    const auto w = real_basis(r);
    REQUIRE(w.has_value());
    CHECK(max_abs_diff(CMatrix(*w * w->adjoint()), CMatrix(CMatrix::Identity(r.dim(), r.dim()))) < 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix gy = *w * group_element(r, {0, u(testing::rng()), 0}) * w->adjoint();
      CHECK(gy.imag().cwiseAbs().maxCoeff() < 1e-12);
      const CMatrix g = *w * group_element(r, {u(testing::rng()), u(testing::rng()), u(testing::rng())}) * w->adjoint();
      CHECK(g.imag().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}
