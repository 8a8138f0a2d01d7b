#include <vector>

#include "doctest.h"
#include "mdsforge/asymptotics.hpp"
#include "mdsforge/mds.hpp"

using namespace mdsforge;
using namespace mdsforge::mds;

namespace {

Engine& engine5() {
  static Engine e(fq::build_field(5, 1), 6, 0);
  return e;
}

Poly lin(long a) { return fq::poly_from_ints(engine5().field(), {a, 1}); }

// Every twist c1 c2 c3 of degree <= 2 built from x, x + 1 and x^2 + 2 (irreducible mod 5).
std::vector<TwistSpec> small_twists() {
  const FieldSpec& F = engine5().field();
  const Poly one = fq::constant(1);
  const std::vector<Poly> primes{lin(0), lin(1)};
  const Poly quad = fq::poly_from_ints(F, {2, 0, 1});
  std::vector<TwistSpec> out;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      auto push = [&](Poly c1, Poly c2, Poly c3) {
        TwistSpec t;
        t.c1 = c1;
        t.c2 = c2;
        t.c3 = c3;
        t.a1_theta = a1;
        t.a2_theta = a2;
        out.push_back(t);
      };
      push(one, one, one);
      for (int slot = 0; slot < 3; ++slot) {
        Poly c[3] = {one, one, one};
        c[slot] = primes[0];
        push(c[0], c[1], c[2]);
        c[slot] = quad;
        push(c[0], c[1], c[2]);
      }
      for (int s1 = 0; s1 < 3; ++s1)
        for (int s2 = 0; s2 < 3; ++s2) {
          Poly c[3] = {one, one, one};
          c[s1] = primes[0];
          c[s2] = s1 == s2 ? fq::mul(F, primes[0], primes[1]) : primes[1];
          push(c[0], c[1], c[2]);
        }
    }
  return out;
}

}  // namespace

TEST_CASE("untwisted formal buckets agree with the explicit rational function") {
  const FormalShape shape{3, 4, 6};
  const FormalTable oracle = explicit_formal(5, shape);
  for (Route r : {Route::vers0, Route::vers1, Route::vers2}) {
    const FormalTable got = formal_coefficients(engine5(), TwistSpec{}, r, shape);
    INFO(route_name(r), " ", got.first_difference(oracle));
    CHECK(got.first_difference(oracle).empty());
  }
}

TEST_CASE("three expressions agree for twists of degree at most 2") {
  const FormalShape shape{2, 4, 5};
  for (const TwistSpec& t : small_twists()) {
    const RouteReport rep = check_triple_route(engine5(), t, shape);
    INFO(describe(engine5().field(), t), " ", rep.detail);
    CHECK(rep.pass);
  }
}

TEST_CASE("center series matches the explicit function at q = 5 and q = 9") {
  const SeriesTable s5 = zc_coefficients(engine5(), TwistSpec{}, 6);
  const std::vector<QuadValue> o5 = explicit_center_series(5, 6);
  for (int n = 0; n <= 6; ++n) CHECK(s5.coeffs[n] == o5[n]);
  Engine e9(fq::build_field(3, 2), 4, 0);
  const SeriesTable s9 = zc_coefficients(e9, TwistSpec{}, 4);
  const std::vector<QuadValue> o9 = explicit_center_series(9, 4);
  for (int n = 0; n <= 4; ++n) CHECK(s9.coeffs[n] == o9[n]);
}

TEST_CASE("sieve identity reconstructs Z_0 from the h-sieved series") {
  for (bool a2 : {false, true}) {
    const SieveReport rep = check_sieve_identity(engine5(), a2, 5);
    INFO(rep.detail);
    CHECK(rep.pass);
    CHECK(rep.moduli > 1);
  }
}

TEST_CASE("fundamental decomposition for h = x and h = x(x + 1)") {
  const FieldSpec& F = engine5().field();
  for (bool a2 : {false, true}) {
    const FundamentalReport r1 = check_fundamental_decomposition(engine5(), lin(0), a2, 4);
    INFO(r1.detail);
    CHECK(r1.pass);
    const FundamentalReport r2 = check_fundamental_decomposition(engine5(), fq::mul(F, lin(0), lin(1)), a2, 5);
    INFO(r2.detail);
    CHECK(r2.pass);
  }
}

TEST_CASE("Gamma table: eight rows match and four values are distinct") {
  for (long q : {5L, 7L, 9L}) {
    const std::vector<GammaData> rows = gamma_table(q);
    CHECK(rows.size() == 8);
    for (const auto& r : rows) CHECK(r.match);
    CHECK(distinct_gamma_values(rows) == 4);
  }
}

TEST_CASE("local U, V, W extend multiplicatively") {
  for (int r = 0; r < 4; ++r) {
    const QuarticValue X = pole_point(5, r);
    CHECK(u_mod(5, {1, 2}, X) == u_local(5, 1, X) * u_local(5, 2, X));
    CHECK(v_mod(5, {1, 3}, X) == v_local(5, 1, X) * v_local(5, 3, X));
    CHECK(w_mod(5, {2, 2}, X) == w_local(5, 2, X) * w_local(5, 2, X));
    CHECK(u_mod(5, {}, X) == QuarticValue(5, 1));
  }
}

TEST_CASE("residue at c = 1 equals the direct residue of the explicit function") {
  for (bool a2 : {false, true})
    for (int r = 0; r < 4; ++r) {
      TwistSpec t;
      t.a2_theta = a2;
      CHECK(residue_closed_form(engine5(), t, r) == residue_explicit(5, a2, r));
    }
}

TEST_CASE("closed-form residue equals the S-sum for all twists of degree at most 2") {
  for (const TwistSpec& t : small_twists()) {
    if (t.a1_theta) continue;
    for (int r = 0; r < 4; ++r) {
      INFO(describe(engine5().field(), t), " rho=", r);
      CHECK(residue_closed_form(engine5(), t, r) == residue_s_sum(engine5(), t, r));
    }
  }
}

TEST_CASE("w = 1 residue identities hold exactly") {
  const ResidueW1Report rep = check_residue_w1(engine5(), rings::EqualityMode{});
  INFO(rep.detail);
  CHECK(rep.part1);
  CHECK(rep.part2);
  CHECK(rep.origin);
  CHECK(rep.twist_sign);
}

TEST_CASE("h-route at h = 1 is the untwisted closed form") {
  for (bool a2 : {false, true})
    for (int r = 0; r < 4; ++r) {
      TwistSpec t;
      t.a2_theta = a2;
      CHECK(h_route_term(engine5(), fq::constant(1), a2, r) == residue_closed_form(engine5(), t, r));
    }
}

TEST_CASE("local residue factor is P at chi(p) / sqrt|p|") {
  for (int k = 1; k <= 4; ++k)
    for (bool a2 : {false, true})
      for (int r = 0; r < 4; ++r) {
        QuarticValue x = qpow4(5, -2 * k);
        if ((r & 1) && (k & 1)) x = -x;
        INFO("k=", k, " a2=", a2, " rho=", r);
        CHECK(local_residue_factor(5, k, a2, r) == asymptotics::zhang_eval(x));
      }
}

TEST_CASE("local residue factor matches the h-route at a prime") {
  const Poly one = fq::constant(1);
  for (long a : {0L, 1L})
    for (int r = 0; r < 4; ++r) {
      const QuarticValue base = h_route_term(engine5(), one, false, r);
      const QuarticValue at_p = h_route_term(engine5(), lin(a), false, r);
      CHECK(local_residue_factor(5, 1, false, r) == QuarticValue(5, 1) - at_p / base);
    }
}

TEST_CASE("h-sum and Euler product agree within tail bounds") {
  const Z0Report rep = residue_z0_three_quarters(engine5(), false, 0, 3, 6);
  INFO(rep.detail);
  CHECK(rep.agree);
  CHECK(rep.tails_monotone);
  CHECK(rep.h_route.size() == 4);
  CHECK(rep.p_route.size() == 6);
}

TEST_CASE("twist enumeration covers every split with all units") {
  const FieldSpec F = fq::build_field(5, 1);
  // Square-free monics of degree <= 2 split three ways: 1 + 5 * 3 + 10 * 9 + 10 * 3.
  CHECK(enumerate_twists(F, 2).size() == 4 * (1 + 15 + 90 + 30));
  for (const TwistSpec& t : enumerate_twists(F, 1)) CHECK_NOTHROW(validate(F, t));
}

TEST_CASE("h-route terms are multiplicative over coprime h") {
  const FieldSpec& F = engine5().field();
  const Poly quad = fq::poly_from_ints(F, {2, 0, 1});
  for (bool a2 : {false, true})
    for (int r = 0; r < 4; ++r) {
      const QuarticValue base = h_route_term(engine5(), fq::constant(1), a2, r);
      const QuarticValue tx = h_route_term(engine5(), lin(0), a2, r);
      const QuarticValue tq = h_route_term(engine5(), quad, a2, r);
      CHECK(h_route_term(engine5(), fq::mul(F, lin(0), quad), a2, r) * base == tx * tq);
      CHECK(h_route_term(engine5(), fq::mul(F, lin(0), lin(1)), a2, r) * base ==
            tx * h_route_term(engine5(), lin(1), a2, r));
    }
}
