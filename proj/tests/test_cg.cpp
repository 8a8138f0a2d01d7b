#include "doctest.h"
#include "mdsforge/cg.hpp"

using namespace mdsforge;
using namespace mdsforge::cg;
using rings::MultiPoly;
using rings::ParamPoly;
using rings::RationalFunction;

namespace {

Vec rand_z(std::mt19937_64& rng, int rank) {
  const auto p = rings::random_point(rng);
  return Vec(p.z.begin(), p.z.begin() + rank);
}

RationalFunction small_rf(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> c(-2, 2), ex(0, 1);
  RationalFunction f;
  f.num = MultiPoly(ParamPoly(1));
  for (int t = 0; t < 2; ++t) {
    rings::Exps e{0, 0, 0, 0};
    for (int j = 0; j < rank; ++j) e[j] = ex(rng);
    f.num.add_term(e, ParamPoly(static_cast<long>(c(rng))));
  }
  rings::Exps e{0, 0, 0, 0};
  e[0] = 1;
  f.factors.push_back({ParamPoly(2), e});
  return f;
}

}  // namespace

TEST_CASE("root system sizes") {
  struct Row { RootType t; std::size_t w, roots; };
  for (const Row& r : {Row{RootType::A1, 2, 1}, Row{RootType::A2, 6, 3}, Row{RootType::A3, 24, 6},
                       Row{RootType::D4, 192, 12}}) {
    const RootSystem rs = build_root_system(r.t);
    CHECK(weyl_group(rs).size() == r.w);
    CHECK(rs.positive_roots.size() == r.roots);
  }
  CHECK_THROWS_AS(parse_root_type("E8"), cg_error);
  const RootSystem d4 = build_root_system(RootType::D4);
  for (int j = 0; j < 3; ++j) CHECK(d4.adjacent(3, j));
  CHECK(!d4.adjacent(0, 1));
  // Highest root of D4 is a1 + a2 + a3 + 2 a4.
  CHECK(d4.positive_roots.back() == std::vector<int>{1, 1, 1, 2});
}

TEST_CASE("reflections on roots follow the case table") {
  const RootSystem rs = build_root_system(RootType::D4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::vector<int> a(4, 0), expect(4, 0);
      a[j] = 1;
      expect = a;
      if (i == j)
        expect[j] = -1;
      else if (rs.adjacent(i, j))
        expect[i] += 1;
      CHECK(reflect(rs, i, a) == expect);
    }
}

TEST_CASE("variable actions: eps relations, commutation table, braid relations") {
  std::mt19937_64 rng(3);
  for (RootType t : {RootType::A2, RootType::A3, RootType::D4}) {
    const RootSystem rs = build_root_system(t);
    for (int trial = 0; trial < 5; ++trial) {
      const Q s = rings::random_point(rng).s;
      const Vec z = rand_z(rng, rs.rank);
      for (int i = 0; i < rs.rank; ++i) {
        CHECK(eps_z(rs, i, eps_z(rs, i, z)) == z);
        CHECK(sigma_z(rs, i, s, sigma_z(rs, i, s, z)) == z);
        for (int j = 0; j < rs.rank; ++j) {
          CHECK(eps_z(rs, i, eps_z(rs, j, z)) == eps_z(rs, j, eps_z(rs, i, z)));
          const Vec lhs = sigma_z(rs, i, s, eps_z(rs, j, z));
          const Vec rhs = rs.adjacent(i, j) ? eps_z(rs, i, eps_z(rs, j, sigma_z(rs, i, s, z)))
                                            : eps_z(rs, j, sigma_z(rs, i, s, z));
          CHECK(lhs == rhs);
          if (i == j) continue;
          const int r = rs.adjacent(i, j) ? 3 : 2;
          std::vector<int> word;
          for (int k = 0; k < r; ++k) {
            word.push_back(i);
            word.push_back(j);
          }
          CHECK(word_z(rs, word, s, z) == z);
        }
      }
    }
  }
}

TEST_CASE("cocycle values") {
  std::mt19937_64 rng(5);
  const RootSystem rs = build_root_system(RootType::D4);
  const auto W = weyl_group(rs);
  for (int trial = 0; trial < 8; ++trial) {
    const Q s = rings::random_point(rng).s;
    const Vec z = rand_z(rng, 4);
    for (int i = 0; i < 4; ++i) CHECK(j_cocycle(rs, {i}, s, z) == -s * s * z[i] * z[i]);
    const auto& a = W[(trial * 37) % W.size()];
    const auto& b = W[(trial * 53 + 11) % W.size()];
    std::vector<int> ab = a.word;
    ab.insert(ab.end(), b.word.begin(), b.word.end());
    CHECK(j_cocycle(rs, ab, s, z) ==
          j_cocycle(rs, a.word, s, word_z(rs, b.word, s, z)) * j_cocycle(rs, b.word, s, z));
  }
  CHECK(average_leaf_count(W) == 42525);
}

TEST_CASE("A1 average is 1/(1-z)") {
  const RootSystem rs = build_root_system(RootType::A1);
  RationalFunction expect;
  expect.num = MultiPoly(ParamPoly(1));
  expect.factors.push_back({ParamPoly(1), {1, 0, 0, 0}});
  const RationalFunction f = cg_average_symbolic(rs).to_rational();
  CHECK(rings::rat_equal(f, expect, {true, 24, 1}).equal);
  const auto W = weyl_group(rs);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto p = rings::random_point(rng);
    CHECK(cg_average_at(rs, W, p.s, {p.z[0]}) == 1 / (1 - p.z[0]));
  }
  // (1|s1)|s1 = 1.
  RationalFunction one;
  one.num = MultiPoly(ParamPoly(1));
  const RationalFunction twice = act_reflection(rs, act_reflection(rs, one, 0), 0);
  CHECK(rings::rat_equal(twice, one, {true, 24, 1}).equal);
}

TEST_CASE("A2 average: normalization, invariance, limiting condition") {
  const RootSystem rs = build_root_system(RootType::A2);
  const FactoredRF f = cg_average_symbolic(rs);
  const RationalFunction fr = f.to_rational();
  const auto W = weyl_group(rs);
  for (int i = 0; i < 2; ++i) {
    CHECK(equal(act_reflection(rs, f, i), f));
    CHECK(check_limiting_condition(rs, fr, i));
  }
  // f(t, t) -> 1 as t -> 0.
  const Q t(1, 1000000);
  const Q v = fr.eval(Q(3), {t, t, 0, 0});
  CHECK(abs(v - 1) < Q(1, 10000));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 6; ++k) {
    const auto p = rings::random_point(rng);
    const std::array<Q, 4> z{p.z[0], p.z[1], 0, 0};
    CHECK(cg_average_at(rs, W, p.s, {p.z[0], p.z[1]}) == fr.eval(p.s, z));
  }
}

TEST_CASE("symbolic action is a group action") {
  std::mt19937_64 rng(13);
  const RootSystem rs = build_root_system(RootType::A2);
  for (int trial = 0; trial < 3; ++trial) {
    const FactoredRF f = FactoredRF::from_rational(small_rf(rng, 2));
    for (int i = 0; i < 2; ++i) CHECK(equal(act_reflection(rs, act_reflection(rs, f, i), i), f));
    FactoredRF g = f;
    for (int k = 0; k < 3; ++k) g = act_reflection(rs, act_reflection(rs, g, 0), 1);
    CHECK(equal(g, f));
    CHECK(!equal(act_reflection(rs, f, 0), f));
  }
}

TEST_CASE("limiting condition rejects residual dependence") {
  const RootSystem rs = build_root_system(RootType::A1);
  RationalFunction f;
  f.num = MultiPoly(ParamPoly(1));
  f.factors.push_back({ParamPoly(1), {1, 0, 0, 0}});
  CHECK(check_limiting_condition(rs, f, 0));
  f.factors.push_back({ParamPoly(1), {1, 0, 0, 0}});
  CHECK(!check_limiting_condition(rs, f, 0));
}
