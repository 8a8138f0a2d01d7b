#include <random>

#include "doctest.h"
#include "mdsforge/lfun.hpp"

using namespace mdsforge;
using namespace mdsforge::lfun;
using rings::complex_t;
using rings::real_t;

namespace {

const FieldSpec& f5() {
  static const FieldSpec F = fq::build_field(5, 1);
  return F;
}

const CharSumEngine& eng5() {
  static const CharSumEngine e(f5(), 6);
  return e;
}

}  // namespace

TEST_CASE("degree-one conductors give L = 1") {
  const auto& F = f5();
  for (const Poly& d : fq::enumerate_monic(F, 1, fq::MonicFilter::squarefree)) {
    for (auto mode : {LMode::full, LMode::fe_completed}) {
      const LPolynomial L = l_polynomial(F, d, mode);
      REQUIRE(L.coeffs.size() == 1);
      CHECK(L.coeffs[0] == 1);
      CHECK(central_value(L) == QuadValue(5, 1));
    }
  }
}

TEST_CASE("d0 = x over F_5: c_1 is the sum of five Kronecker symbols") {
  const auto& F = f5();
  const Poly x = fq::x_poly();
  long long brute = 0;
  for (long a = 0; a < 5; ++a) brute += fq::kronecker(F, x, fq::poly_from_ints(F, {a, 1}));
  CHECK(brute == 0);
  // deg x = 1, so L has degree 0; the deg-1 character sum itself vanishes.
  CHECK(eng5().sums(x, 1)[1] == 0);
}

TEST_CASE("constant conductors are tagged special values") {
  const auto& F = f5();
  const LPolynomial z = l_polynomial(F, fq::constant(1), LMode::full);
  CHECK(z.special == SpecialKind::zeta);
  const QuadValue one(5, 1), s = QuadValue::sqrt_q(5);
  CHECK(central_value(z) == (one - s).inverse());
  CHECK(central_value(z).pow(3) == QuadValue(5, rings::Q(-2, 8), rings::Q(-1, 8)));
  const LPolynomial t = l_polynomial(F, fq::constant(F.nonsquare_unit), LMode::full);
  CHECK(t.special == SpecialKind::zeta_twisted);
  CHECK(central_value(t) == (one + s).inverse());
  const complex_t s2(real_t(2), real_t(1) / 3);
  CHECK(abs(eval_l(z, s2) - complex_t(1) / (complex_t(1) - exp((complex_t(1) - s2) * complex_t(log(real_t(5)))))) <
        real_t(1e-40));
}

TEST_CASE("non-square-free conductors are rejected") {
  const auto& F = f5();
  const Poly x = fq::x_poly();
  CHECK_THROWS_AS(l_polynomial(F, fq::mul(F, x, x), LMode::full), lfun_error);
}

TEST_CASE("engine sums agree with direct Kronecker sums") {
  const auto& F = f5();
  for (int D = 1; D <= 4; ++D)
    for (const Poly& d : fq::enumerate_monic(F, D, fq::MonicFilter::squarefree)) {
      const auto e = eng5().sums(d, std::min(D, 4));
      for (int n = 0; n <= std::min(D, 4); ++n) {
        long long direct = 0;
        fq::for_each_monic(F, n, fq::MonicFilter::all, [&](const Poly& m) { direct += fq::kronecker(F, d, m); });
        CHECK(e[n] == direct);
      }
    }
}

TEST_CASE("full and functional-equation-completed coefficients agree exhaustively to degree 6 over F_5") {
  const auto& F = f5();
  long count = 0;
  for (int D = 1; D <= 6; ++D)
    for (const Poly& d : fq::enumerate_monic(F, D, fq::MonicFilter::squarefree)) {
      const auto full = l_polynomial(F, d, LMode::full, &eng5());
      const auto fe = l_polynomial(F, d, LMode::fe_completed, &eng5());
      REQUIRE(full.coeffs.size() == static_cast<std::size_t>(D));
      CHECK(full.coeffs == fe.coeffs);
      CHECK(full.coeffs[0] == 1);
      ++count;
    }
  CHECK(count == 5 + 20 + 100 + 500 + 2500 + 12500);
}

TEST_CASE("full and completed coefficients agree on random degree 7 and 8 conductors") {
  const auto& F = f5();
  std::mt19937_64 rng(11);
  static const CharSumEngine big(F, 7);
  for (int D : {7, 8})
    for (int trial = 0; trial < 4; ++trial) {
      Poly d;
      do {
        d = fq::monic_from_index(F, D, rng() % fq::ipow(5, D));
      } while (!fq::is_squarefree(F, d));
      CHECK(l_polynomial(F, d, LMode::full, &big).coeffs == l_polynomial(F, d, LMode::fe_completed, &big).coeffs);
    }
}

TEST_CASE("twisting by a non-square unit flips odd coefficients") {
  const auto& F = f5();
  for (int D = 1; D <= 5; ++D)
    for (const Poly& d : fq::enumerate_monic(F, D, fq::MonicFilter::squarefree)) {
      const Poly td = fq::scale(F, d, F.nonsquare_unit);
      CHECK(fq::sgn(F, td) == -1);
      const auto a = l_polynomial(F, d, LMode::full, &eng5()).coeffs;
      const auto b = l_polynomial(F, td, LMode::full, &eng5()).coeffs;
      const auto bc = l_polynomial(F, td, LMode::fe_completed, &eng5()).coeffs;
      REQUIRE(a.size() == b.size());
      for (std::size_t n = 0; n < a.size(); ++n) CHECK(b[n] == (n % 2 ? -a[n] : a[n]));
      CHECK(b == bc);
    }
}

TEST_CASE("gamma_q collapses to q^{s-1/2} for odd degree and the functional equation holds") {
  const auto& F = f5();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int D = 1; D <= 6; ++D) {
    const auto ds = fq::enumerate_monic(F, D, fq::MonicFilter::squarefree);
    for (int k = 0; k < 6; ++k) {
      const Poly d = k % 2 ? fq::scale(F, ds[k * 7 % ds.size()], F.nonsquare_unit) : ds[k * 7 % ds.size()];
      const complex_t s(real_t(U(rng)), real_t(U(rng)));
      const int sg = fq::sgn(F, d);
      const complex_t g = gamma_q(5, D, sg, s);
      if (D % 2) {
        const complex_t direct = exp((s - complex_t(real_t(1) / 2)) * complex_t(log(real_t(5))));
        CHECK(abs(g - direct) < real_t(1e-40));
      }
      const LPolynomial L = l_polynomial(F, d, LMode::full, &eng5());
      const complex_t dpow = exp((complex_t(real_t(1) / 2) - s) * complex_t(real_t(D) * log(real_t(5))));
      const complex_t rhs = g * dpow * eval_l(L, complex_t(1) - s);
      CHECK(abs(eval_l(L, s) - rhs) < real_t(1e-35) * (1 + abs(rhs)));
    }
  }
}

TEST_CASE("evaluation: central value, conjugate symmetry, large real part") {
  const auto& F = f5();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-3, 3);
  for (const Poly& d : fq::enumerate_monic(F, 4, fq::MonicFilter::squarefree)) {
    const LPolynomial L = l_polynomial(F, d, LMode::fe_completed, &eng5());
    const complex_t v = eval_l(L, complex_t(real_t(1) / 2));
    CHECK(abs(v - complex_t(rings::tower_eval(central_value(L)))) < real_t(1e-50));
    const complex_t s(real_t(U(rng)), real_t(U(rng)));
    CHECK(abs(eval_l(L, conj(s)) - conj(eval_l(L, s))) < real_t(1e-40));
    const real_t big = abs(eval_l(L, complex_t(real_t(30))) - complex_t(1));
    CHECK(big < 4 * pow(real_t(5), real_t(-29)));
  }
}

TEST_CASE("Lindelof bound holds exhaustively for degrees 3 and 5 over F_5; small degrees skipped") {
  const auto& F = f5();
  for (int D : {3, 5}) {
    const auto ds = fq::enumerate_monic(F, D, fq::MonicFilter::squarefree);
    const LindelofReport r = check_lindelof(F, ds, 32, &eng5());
    INFO("D = " << D << " max ratio " << r.max_ratio);
    CHECK(r.pass);
    CHECK(r.conductors == static_cast<long>(ds.size()));
  }
  CHECK(fq::enumerate_monic(F, 3, fq::MonicFilter::squarefree).size() == 100);
  const LindelofReport small = check_lindelof(F, fq::enumerate_monic(F, 2, fq::MonicFilter::squarefree), 32, &eng5());
  CHECK(small.skipped);
  CHECK(small.conductors == 0);
}

TEST_CASE("Weil: inverse roots of the unitary part lie on |u^{-1}| = sqrt q") {
  const auto& F = f5();
  std::mt19937_64 rng(9);
  std::vector<Poly> ds;
  while (ds.size() < 12) {
    const Poly d = fq::monic_from_index(F, 4, rng() % 625);
    if (fq::is_squarefree(F, d)) ds.push_back(d);
  }
  for (const Poly& d : fq::enumerate_monic(F, 5, fq::MonicFilter::squarefree)) {
    if (ds.size() >= 40) break;
    ds.push_back(d);
  }
  const WeilReport r = check_weil(F, ds, 1e-9, &eng5());
  INFO("max deviation " << r.max_deviation);
  CHECK(r.pass);
  CHECK(r.max_deviation < 1e-9);
  const WeilReport v = check_weil(F, fq::enumerate_monic(F, 1, fq::MonicFilter::squarefree), 1e-9);
  CHECK(v.pass);
  CHECK(v.max_deviation == 0);
}

TEST_CASE("Weil check over F_9") {
  const FieldSpec F = fq::build_field(3, 2);
  std::vector<Poly> ds;
  for (const Poly& d : fq::enumerate_monic(F, 3, fq::MonicFilter::squarefree)) {
    if (ds.size() >= 20) break;
    ds.push_back(d);
  }
  const WeilReport r = check_weil(F, ds, 1e-9);
  CHECK(r.pass);
}
