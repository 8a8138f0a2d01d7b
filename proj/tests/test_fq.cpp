#include <set>

#include "doctest.h"
#include "mdsforge/fq.hpp"

using namespace mdsforge::fq;

namespace {

// Squares of F_q^x by exhaustive squaring.
std::set<elem> squares(const FieldSpec& F) {
  std::set<elem> s;
  for (elem a = 1; a < static_cast<elem>(F.q); ++a) s.insert(F.mul(a, a));
  return s;
}

}  // namespace

TEST_CASE("build_field accepts q = 1 mod 4 and picks a verified nonsquare") {
  const FieldSpec F5 = build_field(5, 1);
  CHECK(F5.q == 5);
  CHECK((F5.nonsquare_unit == 2 || F5.nonsquare_unit == 3));
  CHECK(squares(F5).count(F5.nonsquare_unit) == 0);
  const FieldSpec F9 = build_field(3, 2);
  CHECK(F9.q == 9);
  CHECK(F9.pow(F9.nonsquare_unit, 4) == F9.from_int(-1));
  CHECK(squares(F9).count(F9.nonsquare_unit) == 0);
  CHECK_THROWS_AS(build_field(7, 1), field_error);
  CHECK_THROWS_AS(build_field(2, 2), field_error);
  CHECK_THROWS_AS(build_field(3, 1), field_error);
}

TEST_CASE("field axioms on F_9 and F_25") {
  for (auto [p, e] : {std::pair{3, 2}, std::pair{5, 2}, std::pair{13, 1}}) {
    const FieldSpec F = build_field(p, e);
    const std::set<elem> sq = squares(F);
    for (elem a = 0; a < static_cast<elem>(F.q); ++a) {
      if (a) CHECK(F.mul(a, F.inv(a)) == 1);
      CHECK(F.add(a, F.neg(a)) == 0);
      CHECK(F.chi(a) == (a == 0 ? 0 : (sq.count(a) ? 1 : -1)));
      for (elem b = 0; b < static_cast<elem>(F.q); b += 3) {
        const elem c = (a + b + 1) % F.q;
        CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      }
    }
  }
}

TEST_CASE("kronecker basic values") {
  const FieldSpec F = build_field(5, 1);
  const Poly one = constant(1);
  const Poly x = x_poly();
  CHECK(kronecker(F, poly_from_ints(F, {2, 3, 1}), one) == 1);
  CHECK(kronecker(F, constant(2), x) == -1);
  CHECK(kronecker(F, constant(4), x) == 1);
  const Poly m = poly_from_ints(F, {0, 1, 1});  // x(x+1)
  CHECK(kronecker(F, x, m) == 0);
}

TEST_CASE("sgn") {
  const FieldSpec F5 = build_field(5, 1);
  CHECK(sgn(F5, poly_from_ints(F5, {1, 1})) == 1);
  CHECK(sgn(F5, poly_from_ints(F5, {1, 2})) == -1);
  CHECK_THROWS(sgn(F5, Poly()));
  const FieldSpec F9 = build_field(3, 2);
  // A generator of F_9^x has order 8 and is a non-square.
  elem gen = 0;
  for (elem a = 1; a < 9; ++a) {
    bool ok = true;
    for (unsigned k = 1; k < 8; ++k)
      if (F9.pow(a, k) == 1) ok = false;
    if (ok) {
      gen = a;
      break;
    }
  }
  REQUIRE(gen != 0);
  CHECK(sgn(F9, Poly({1, gen})) == -1);
}

TEST_CASE("kronecker agrees with the factorization oracle and reciprocity holds") {
  for (auto [p, e] : {std::pair{5, 1}, std::pair{3, 2}}) {
    const FieldSpec F = build_field(p, e);
    std::vector<Poly> all;
    for (int n = 0; n <= 3; ++n)
      for (const Poly& m : enumerate_monic(F, n, MonicFilter::all)) all.push_back(m);
    long pairs = 0;
    for (const Poly& d : all)
      for (const Poly& m : all) {
        const int k = kronecker(F, d, m);
        CHECK(k == kronecker_bruteforce(F, d, m));
        if (d.deg() > 0 && m.deg() > 0 && gcd(F, d, m).deg() == 0) {
          CHECK(k == kronecker(F, m, d));
          ++pairs;
        }
      }
    CHECK(pairs > 0);
    // Non-monic numerators: constant rule (b/m) = sgn(b)^deg m.
    for (const Poly& m : all)
      for (elem b = 1; b < static_cast<elem>(F.q); ++b) {
        const int expect = (m.deg() % 2 == 0) ? 1 : F.chi(b);
        CHECK(kronecker(F, constant(b), m) == expect);
      }
  }
}

TEST_CASE("kronecker is completely multiplicative") {
  const FieldSpec F = build_field(5, 1);
  const auto m3 = enumerate_monic(F, 3, MonicFilter::all);
  const auto m2 = enumerate_monic(F, 2, MonicFilter::all);
  for (std::size_t i = 0; i < m3.size(); i += 7)
    for (std::size_t j = 0; j < m2.size(); j += 3) {
      const Poly& a = m3[i];
      const Poly& b = m2[j];
      const Poly& m = m2[(i + j) % m2.size()];
      CHECK(kronecker(F, mul(F, a, b), m) == kronecker(F, a, m) * kronecker(F, b, m));
      CHECK(kronecker(F, m, mul(F, a, b)) == kronecker(F, m, a) * kronecker(F, m, b));
    }
}

TEST_CASE("factorization, mobius and square-free counts") {
  const FieldSpec F = build_field(5, 1);
  CHECK(mobius(factor(F, constant(1))) == 1);
  long sf2 = 0;
  for (const Poly& m : enumerate_monic(F, 2, MonicFilter::all))
    if (is_squarefree(F, m)) ++sf2;
  CHECK(sf2 == 20);
  CHECK(enumerate_monic(F, 3, MonicFilter::squarefree).size() == 100);
  const Poly x1 = poly_from_ints(F, {1, 1});
  CHECK(mobius(factor(F, mul(F, x1, x1))) == 0);
  for (int n = 0; n <= 5; ++n)
    for (const Poly& m : enumerate_monic(F, n, MonicFilter::all)) {
      const Factorization fac = factor(F, m);
      CHECK(reconstruct(F, fac) == m);
      const SquareDecomposition sd = square_decompose(F, m);
      CHECK(is_squarefree(F, sd.d0));
      CHECK(mul(F, sd.d0, mul(F, sd.d1, sd.d1)) == m);
      bool all_one = true;
      for (const auto& pe : fac.factors) all_one = all_one && pe.second == 1;
      CHECK((mobius(fac) != 0) == all_one);
    }
}

TEST_CASE("mobius sums over divisors vanish") {
  const FieldSpec F = build_field(5, 1);
  for (int n = 0; n <= 5; ++n) {
    const auto ms = enumerate_monic(F, n, MonicFilter::all);
    for (std::size_t i = 0; i < ms.size(); i += (n >= 4 ? 37 : 1)) {
      const Poly& d = ms[i];
      long s = 0;
      for (int k = 0; k <= n; ++k)
        for (const Poly& h : enumerate_monic(F, k, MonicFilter::all))
          if (mod(F, d, h).is_zero()) s += mobius(factor(F, h));
      CHECK(s == (n == 0 ? 1 : 0));
    }
  }
}

TEST_CASE("enumeration and irreducible counts") {
  const FieldSpec F = build_field(5, 1);
  const auto z = enumerate_monic(F, 0, MonicFilter::all);
  REQUIRE(z.size() == 1);
  CHECK(z[0] == constant(1));
  for (int m = 1; m <= 6; ++m) {
    long long s = 0;
    for (int d = 1; d <= m; ++d)
      if (m % d == 0) s += d * irreducible_count(5, d);
    CHECK(s == static_cast<long long>(ipow(5, m)));
  }
  for (int m = 1; m <= 4; ++m)
    CHECK(static_cast<long long>(enumerate_monic(F, m, MonicFilter::irreducible).size()) ==
          irreducible_count(5, m));
  const auto all3 = enumerate_monic(F, 3, MonicFilter::all);
  for (std::size_t i = 0; i < all3.size(); ++i) CHECK(monic_index(F, all3[i]) == i);
  std::vector<Poly> part;
  for_each_monic(F, 3, MonicFilter::all, [&](const Poly& m) { part.push_back(m); }, 40, 60);
  REQUIRE(part.size() == 20);
  CHECK(part.front() == all3[40]);
}

TEST_CASE("euler_phi") {
  const FieldSpec F = build_field(5, 1);
  CHECK(euler_phi(F, constant(1)) == 1);
  CHECK(euler_phi(F, x_poly()) == 4);
  CHECK(euler_phi(F, poly_from_ints(F, {0, 1, 1})) == 16);
  // Unit count by brute force for all deg-2 monics.
  for (const Poly& m : enumerate_monic(F, 2, MonicFilter::all)) {
    unsigned long long units = 0;
    for (unsigned long long a = 0; a < 25; ++a) {
      const Poly r = poly_from_ints(F, {static_cast<long>(a % 5), static_cast<long>(a / 5)});
      if (!r.is_zero() && gcd(F, r, m).deg() == 0) ++units;
    }
    CHECK(euler_phi(F, m) == units);
  }
}

TEST_CASE("FactorTable matches trial division") {
  const FieldSpec F = build_field(5, 1);
  const FactorTable T(F, 5);
  for (int n = 0; n <= 5; ++n) {
    const auto ms = enumerate_monic(F, n, MonicFilter::all);
    for (std::size_t i = 0; i < ms.size(); i += (n == 5 ? 11 : 1)) {
      const Factorization a = T.factor(ms[i]);
      const Factorization b = factor(F, ms[i]);
      CHECK(a.factors == b.factors);
    }
  }
}
