#include "doctest.h"
#include "mdsforge/rings.hpp"

using namespace mdsforge::rings;

namespace {

MultiPoly z(int i) { return MultiPoly::variable(i); }
MultiPoly one() { return MultiPoly(ParamPoly(1)); }

RationalFunction random_rf(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-3, 3), ex(0, 2), sp(-2, 2);
  RationalFunction f;
  for (int t = 0; t < 4; ++t)
    f.num.add_term({ex(rng), ex(rng), ex(rng), ex(rng)}, ParamPoly::monomial(Q(c(rng)), sp(rng)));
  for (int t = 0; t < 2; ++t) {
    Exps e{ex(rng), ex(rng), ex(rng), ex(rng)};
    if (e == Exps{0, 0, 0, 0}) e[0] = 1;
    long cc = c(rng);
    if (cc == 0) cc = 1;
    f.factors.push_back({ParamPoly::monomial(Q(cc), sp(rng)), e});
  }
  return f;
}

}  // namespace

TEST_CASE("ParamPoly arithmetic") {
  const ParamPoly s = ParamPoly::s_power(1);
  const ParamPoly q = ParamPoly::q_power(1);
  CHECK(s * s == q);
  CHECK((q - s * s).is_zero());
  CHECK(q.eval(Q(3)) == 9);
  const ParamPoly a = ParamPoly(2) + ParamPoly::monomial(Q(1, 3), -3);
  const ParamPoly b = ParamPoly::monomial(Q(-5), 2) + ParamPoly(1);
  const ParamPoly c = ParamPoly::monomial(Q(7), 1);
  CHECK(a * (b + c) == a * b + a * c);
  CHECK((a * b) * c == a * (b * c));
  CHECK((a * b).eval(Q(5, 2)) == a.eval(Q(5, 2)) * b.eval(Q(5, 2)));
  CHECK(c.inverse_monomial() * c == ParamPoly(1));
  CHECK(a.subs_power(-1).eval(Q(2)) == a.eval(Q(1, 2)));
  CHECK(s.has_odd_powers());
  CHECK(!q.has_odd_powers());
}

TEST_CASE("MultiPoly ring laws and exact division") {
  const MultiPoly p = z(0) * z(1) + ParamPoly::s_power(3) * z(3) + one();
  const MultiPoly r = z(2) - z(0) * z(0);
  const MultiPoly t = z(3) * z(3) + ParamPoly(Q(2, 3));
  CHECK(p * (r + t) == p * r + p * t);
  CHECK((p * r) * t == p * (r * t));
  for (int v = 0; v < 4; ++v) {
    const MultiPoly h = p * (one() - z(v));
    CHECK(h.divide_one_minus(v) == p);
  }
  CHECK_THROWS_AS(p.divide_one_minus(0), ring_error);
  CHECK(p.slice(3, 1) == MultiPoly(ParamPoly::s_power(3)));
}

TEST_CASE("expand: geometric series and homomorphism") {
  RationalFunction g;
  g.num = one();
  g.factors.push_back({ParamPoly(1), {0, 0, 0, 1}});
  const TruncSeries s = expand(g, {1, 1, 1, 1}, 3);
  const MultiPoly expect = one() + z(3) + z(3) * z(3) + z(3) * z(3) * z(3);
  CHECK(s.terms == expect);

  RationalFunction z0;
  z0.num = one();
  z0.den_poly = z(0);
  CHECK_THROWS_AS(expand(z0, {1, 1, 1, 1}, 3), ring_error);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const RationalFunction f = random_rf(rng);
    const RationalFunction h = random_rf(rng);
    RationalFunction fh;
    fh.num = f.num * h.num;
    fh.factors = f.factors;
    fh.factors.insert(fh.factors.end(), h.factors.begin(), h.factors.end());
    const Exps w{1, 1, 1, 1};
    const TruncSeries a = expand(fh, w, 6);
    const TruncSeries b = series_mul(expand(f, w, 6), expand(h, w, 6));
    CHECK(a.terms == b.terms);
    CHECK(expand(f, w, 6).truncated(4).terms == expand(f, w, 4).terms);
    // Factor order does not matter.
    RationalFunction rev = fh;
    std::reverse(rev.factors.begin(), rev.factors.end());
    CHECK(expand(rev, w, 6).terms == a.terms);
  }
}

TEST_CASE("expand with a non-factored denominator") {
  RationalFunction f;
  f.num = one();
  f.den_poly = MultiPoly(ParamPoly(2)) * (one() - z(0) - z(1));
  const TruncSeries s = expand(f, {1, 1, 1, 1}, 4);
  const MultiPoly back = mul_truncated(s.terms, f.den_poly, {1, 1, 1, 1}, 4);
  CHECK(back == one());
}

TEST_CASE("rat_equal exact and randomized") {
  std::mt19937_64 rng(11);
  const RationalFunction f = random_rf(rng);
  CHECK(rat_equal(f, f, {true, 24, 1}).equal);
  const auto r = rat_equal(f, f, {false, 24, 5});
  CHECK(r.equal);
  CHECK(r.trials == 24);
  RationalFunction g = f;
  g.num.add_term({1, 0, 0, 0}, ParamPoly(1));
  CHECK(!rat_equal(f, g, {true, 24, 1}).equal);
  const auto rg = rat_equal(f, g, {false, 24, 5});
  CHECK(!rg.equal);
  CHECK(!rg.witness.empty());
  // Same function written with expanded and factored denominators.
  RationalFunction a;
  a.num = one() + z(0);
  a.factors.push_back({ParamPoly(1), {2, 0, 0, 0}});
  RationalFunction b;
  b.num = one();
  b.factors.push_back({ParamPoly(1), {1, 0, 0, 0}});
  CHECK(rat_equal(a, b, {true, 24, 1}).equal);
  CHECK(rat_equal(a, b, {false, 24, 3}).equal);
}

TEST_CASE("QuadValue field arithmetic") {
  const QuadValue s5 = QuadValue::sqrt_q(5);
  const QuadValue one(5, 1);
  const QuadValue zeta = (one - s5).inverse();
  CHECK(zeta * (one - s5) == one);
  CHECK(zeta.pow(3) == QuadValue(5, Q(-2, 8), Q(-1, 8)));
  const QuadValue x(5, Q(3, 7), Q(-2)), y(5, Q(1, 2), Q(5, 3));
  CHECK((x * y).conj() == x.conj() * y.conj());
  CHECK((x + y).conj() == x.conj() + y.conj());
  CHECK(QuadValue::sqrt_q(9) == QuadValue(9, 3));
  CHECK(tower_eval(QuadValue(5)) == 0);
  const real_t z = tower_eval(zeta);
  CHECK(abs(z - real_t("-0.80901699437494742410")) < real_t("1e-18"));
  const real_t l = tower_eval((one + s5).inverse());
  CHECK(abs(l - real_t("0.30901699437494742410")) < real_t("1e-18"));
}

TEST_CASE("QuarticValue arithmetic") {
  const long q = 5;
  const QuarticValue r4 = QuarticValue::basis(q, 1, false);
  const QuarticValue im = QuarticValue::basis(q, 0, true);
  CHECK(r4.pow(4) == QuarticValue(q, 5));
  CHECK(im * im == QuarticValue(q, -1));
  const QuarticValue x = QuarticValue(q, 2) + r4 * Q(3) + im * r4.pow(3) * Q(-1, 2);
  const QuarticValue y = QuarticValue(q, Q(1, 3)) + im * Q(4) + r4.pow(2);
  CHECK(x * x.inverse() == QuarticValue(q, 1));
  CHECK((x * y).complex_conj() == x.complex_conj() * y.complex_conj());
  CHECK(x * (y + r4) == x * y + x * r4);
  const QuadValue a(q, Q(3, 7), Q(-2)), b(q, Q(1, 2), Q(5, 3));
  CHECK(QuarticValue::from_quad(a * b) == QuarticValue::from_quad(a) * QuarticValue::from_quad(b));
  CHECK(QuarticValue::from_quad(a.inverse()) == QuarticValue::from_quad(a).inverse());
  const complex_t v = tower_eval(x * y);
  const complex_t w = tower_eval(x) * tower_eval(y);
  CHECK(abs(v - w) < real_t("1e-60"));
  // Perfect-square and fourth-power q fold correctly.
  CHECK(QuarticValue::basis(16, 1, false) == QuarticValue(16, 2));
  CHECK(QuarticValue::basis(9, 2, false) == QuarticValue(9, 3));
  const QuarticValue u = QuarticValue::basis(9, 1, false) + QuarticValue(9, 1);
  CHECK(u * u.inverse() == QuarticValue(9, 1));
}
