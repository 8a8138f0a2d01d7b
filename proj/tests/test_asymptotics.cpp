#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mdsforge/asymptotics.hpp"

using namespace mdsforge;
using namespace mdsforge::asymptotics;

namespace {

mds::Engine& engine5() {
  static mds::Engine e(fq::build_field(5, 1), 6, 0);
  return e;
}

}  // namespace

TEST_CASE("P has the expected low-order expansion and vanishes to order 5 at 1") {
  const std::vector<long> c = zhang_coefficients();
  REQUIRE(c.size() == 15);
  CHECK(c[0] == 1);
  CHECK(c[1] == 0);
  CHECK(c[2] == 0);
  CHECK(c[3] == -14);
  CHECK(c[4] == -1);
  CHECK(c[5] == 78);
  long sum = 0, d1 = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    sum += c[j];
    d1 += static_cast<long>(j) * c[j];
  }
  CHECK(sum == 0);
  CHECK(d1 == 0);
  CHECK(zhang_eval(QuarticValue(5, 1)).is_zero());
}

TEST_CASE("irreducible counts as reals") {
  CHECK(irr_real(5, 1) == 5);
  CHECK(irr_real(5, 2) == 10);
  CHECK(irr_real(5, 3) == 40);
  CHECK(irr_real(2, 4) == 3);
}

TEST_CASE("Euler product truncations stay within the tail bound") {
  for (bool theta : {false, true}) {
    const EulerProductValue a = euler_product_P(5, theta, 6), b = euler_product_P(5, theta, 9);
    CHECK(abs(a.value - b.value) <= a.tail_bound);
    CHECK(b.tail_bound < a.tail_bound);
  }
}

TEST_CASE("S(0) = zeta(1/2)^3 and S(1) = q") {
  const FieldSpec F = fq::build_field(5, 1);
  CHECK(moment_sum(F, 0, 1) == QuadValue(5, Q(-1, 4), Q(-1, 8)));
  CHECK(moment_sum(F, 1, 1) == QuadValue(5, 5));
  const FieldSpec F9 = fq::build_field(3, 2);
  CHECK(moment_sum(F9, 1, 2) == QuadValue(9, 9));
}

TEST_CASE("moments agree with the sieve reconstruction") {
  const FieldSpec F = fq::build_field(5, 1);
  for (int D = 0; D <= 4; ++D) CHECK(moment_sum(F, D, 0) == moment_by_sieve(engine5(), D));
}

TEST_CASE("moment cache round-trips exactly and rejects tampering") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "mdsforge_cache_test";
  std::filesystem::remove_all(dir);
  const MomentCache cache(dir);
  const FieldSpec F = fq::build_field(5, 1);
  const MomentTable first = fill_moments(F, 0, 3, 0, &cache);
  const MomentTable second = fill_moments(F, 0, 3, 0, &cache);
  for (int D = 0; D <= 3; ++D) {
    CHECK_FALSE(first.from_cache.at(D));
    CHECK(second.from_cache.at(D));
    CHECK(first.entries.at(D) == second.entries.at(D));
  }
  const auto e = cache.load(5, 2);
  REQUIRE(e.has_value());
  CHECK(e->hash == MomentCache::content_hash(5, 2, e->value));
  {
    std::ifstream in(cache.file_for(5, 2));
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto pos = s.find(e->hash);
    REQUIRE(pos != std::string::npos);
    s[pos] = s[pos] == '0' ? '1' : '0';
    std::ofstream out(cache.file_for(5, 2));
    out << s;
  }
  CHECK_THROWS_AS(cache.load(5, 2), asymptotics_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("R(D, q) display matches the residue route and the Gamma brackets") {
  for (int D = 0; D <= 8; ++D) {
    const RTerm r = r_term(5, D, 8);
    INFO(r.detail);
    CHECK(r.brackets_match);
    CHECK(abs(r.value - r.residue_route) <= real_t(1e-40) * (1 + abs(r.value)));
  }
}

TEST_CASE("secondary report declines to fit with too few moments") {
  std::map<int, QuadValue> m{{0, QuadValue(5, Q(-1, 4), Q(-1, 8))}, {1, QuadValue(5, 5)}};
  const SecondaryReport rep = secondary_term_report(5, m, 6);
  CHECK_FALSE(rep.fitted);
  CHECK(rep.growth.size() == 2);
}

TEST_CASE("odd constant is 16.0217 at q = 5 and below 17") {
  const real_t v = f_odd_constant(5);
  CHECK(abs(v - real_t("16.0217")) < real_t("0.00005"));
  for (long q : {5L, 7L, 9L, 25L}) CHECK(f_odd_constant(q) < 17);
}

TEST_CASE("square-free Dirichlet series stays below its Euler majorant") {
  const BoundItem it = dirichlet_da_check(5, 3.0, 1.2, 30);
  INFO(it.detail);
  CHECK(it.pass);
}
