#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mdsforge/d4.hpp"
#include "mdsforge/fq.hpp"
#include "mdsforge/lfun.hpp"
#include "mdsforge/rings.hpp"

namespace mdsforge::mds {

using fq::FieldSpec;
using fq::Poly;
using rings::complex_t;
using rings::Q;
using rings::QuadValue;
using rings::QuarticValue;

class mds_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// c = c1 c2 c3 monic square-free, a_i in {1, theta0} (true = theta0).
struct TwistSpec {
  Poly c1 = fq::constant(1);
  Poly c2 = fq::constant(1);
  Poly c3 = fq::constant(1);
  bool a1_theta = false;
  bool a2_theta = false;
};

Poly twist_modulus(const FieldSpec& F, const TwistSpec& t);
void validate(const FieldSpec& F, const TwistSpec& t);
std::string describe(const FieldSpec& F, const TwistSpec& t);
// Every ordered split c1 c2 c3 of every square-free monic c with deg c <= max_deg, with all four units.
std::vector<TwistSpec> enumerate_twists(const FieldSpec& F, int max_deg);

enum class Route { vers0, vers1, vers2 };
std::string route_name(Route r);

// Bucket (k1, k2, k3, n) of the formal series: u_i^{k_i} tracks |m_i| = q^{k_i}, t^n tracks |d| = q^n.
// Only buckets with k1 + k2 + k3 <= k_max, n <= n_max and k1 + k2 + k3 + n <= total_max are populated.
class FormalTable {
 public:
  FormalTable() = default;
  FormalTable(int k_max, int n_max, int total_max);
  int k_max() const { return k_max_; }
  int n_max() const { return n_max_; }
  int total_max() const { return total_max_; }
  bool in_range(int k1, int k2, int k3, int n) const;
  Q& at(int k1, int k2, int k3, int n) { return v_[index(k1, k2, k3, n)]; }
  const Q& at(int k1, int k2, int k3, int n) const { return v_[index(k1, k2, k3, n)]; }
  FormalTable& operator+=(const FormalTable& o);
  FormalTable& scale(const Q& c);
  // Empty when equal; otherwise the first differing bucket with both values.
  std::string first_difference(const FormalTable& o) const;
  int bucket_count() const;

 private:
  std::size_t index(int k1, int k2, int k3, int n) const;
  int k_max_ = 0, n_max_ = 0, total_max_ = 0;
  std::vector<Q> v_;
};

// Shared tables for one field: factor sieve, character sums, a-coefficients, P_l and Q_k.
class Engine {
 public:
  Engine(const FieldSpec& F, int max_deg, int threads = 0);
  const FieldSpec& field() const { return F_; }
  long q() const { return F_.q; }
  int max_deg() const { return max_deg_; }
  int threads() const { return threads_; }
  const fq::FactorTable& table() const { return chars_->table(); }
  const lfun::CharSumEngine& chars() const { return *chars_; }
  d4::PQTable& pq() { return pq_; }
  // a(k1, k2, k3, l; q^deg) as a rational; the a-table is grown on demand.
  void ensure_a(int total);
  const Q& a_value(int k1, int k2, int k3, int l, int deg) const;
  // P_l(sign c, sign c, sign c; q^k) with c = q^{-k/2}; valid after ensure_center(l_max, k_max).
  void ensure_center(int l_max, int k_max);
  const QuadValue& p_center(int l, int k, int sign) const;
  // Monic polynomial with theta0 as leading coefficient when theta is set.
  Poly with_unit(const Poly& m, bool theta) const;
  // Prime ids dividing m (m of degree <= max_deg).
  std::vector<int> prime_ids(const Poly& m) const;

 private:
  FieldSpec F_;
  int max_deg_;
  int threads_;
  std::unique_ptr<lfun::CharSumEngine> chars_;
  d4::PQTable pq_;
  int a_total_ = -1;
  int a_kdim_ = 0, a_ldim_ = 0, a_ddim_ = 0;
  std::vector<Q> a_cache_;
  int center_l_ = -1, center_k_ = -1;
  std::vector<QuadValue> center_;
};

struct FormalShape {
  int k_max = 2;
  int n_max = 4;
  int total_max = -1;  // negative: k_max + n_max
};

// Formal buckets of Z^{(c)}(s; chi_{a2 c2}, chi_{a1 c1}) by one of the three expressions.
// With sieve_h set (vers0 and trivial twist only), d is restricted to d1 = 0 mod h.
FormalTable formal_coefficients(Engine& E, const TwistSpec& t, Route r, const FormalShape& shape,
                                const Poly* sieve_h = nullptr);

struct RouteReport {
  bool pass = true;
  std::string detail;
  int buckets = 0;
};
RouteReport check_triple_route(Engine& E, const TwistSpec& t, const FormalShape& shape);

// Taylor buckets of the explicit rational function Z(z; q) (the c = 1 oracle).
FormalTable explicit_formal(long q, const FormalShape& shape);

// t^n coefficients at s1 = s2 = s3 = 1/2, exact in Q(sqrt q).
struct SeriesTable {
  TwistSpec twist;
  Route route = Route::vers1;
  int n_max = 0;
  std::vector<QuadValue> coeffs;
  std::string note;
};

// Grouped by d (vers1); sieve_h restricts to d1 = 0 mod h and requires the trivial twist with a1 = 1.
SeriesTable zc_coefficients(Engine& E, const TwistSpec& t, int n_max, const Poly* sieve_h = nullptr);

// Taylor coefficients of Z(q^{-1/2}, q^{-1/2}, q^{-1/2}, t; q).
std::vector<QuadValue> explicit_center_series(long q, int n_max);

// P_d(1/2, 1/2, 1/2; chi) where chi = chi_conductor and d coprime to the conductor's non-d part.
QuadValue pd_polynomial(Engine& E, const Poly& d, const Poly& conductor);

// Z(s, chi_{a2}; h) at the center.
SeriesTable sieved_coefficients(Engine& E, const Poly& h, bool a2_theta, int n_max);
// Formal buckets of Z(s, chi_{a2}; h) and of Z_0(s, chi_{a2}).
FormalTable sieved_formal(Engine& E, const Poly& h, bool a2_theta, const FormalShape& shape);
FormalTable z0_formal(Engine& E, bool a2_theta, const FormalShape& shape);

struct SieveReport {
  bool pass = true;
  std::string detail;
  int buckets = 0;
  int moduli = 0;  // square-free h used
};
SieveReport check_sieve_identity(Engine& E, bool a2_theta, int total_max);

struct FundamentalReport {
  bool pass = true;
  std::string detail;
  int terms = 0;  // (c, epsilon) pairs
  std::vector<QuadValue> lhs, rhs;
};
FundamentalReport check_fundamental_decomposition(Engine& E, const Poly& h, bool a2_theta, int n_max);

// ---- residues in Q(i, q^(1/4)) ----

// q^(n/4).
QuarticValue qpow4(long q, int n);
// rho = i^r, r in 0..3; theta' = theta0 exactly when r is odd.
QuarticValue rho_value(long q, int r);
// X = q^{s4} at the pole q^{-s4} = conj(rho) q^{-3/4}.
QuarticValue pole_point(long q, int r);

QuarticValue gamma_plus(long q, const QuarticValue& X, bool a_theta);
QuarticValue gamma_minus(long q, const QuarticValue& X);
// U_p, V_p, W_p at q^{s} = X for |p| = q^k.
QuarticValue u_local(long q, int k, const QuarticValue& X);
QuarticValue v_local(long q, int k, const QuarticValue& X);
QuarticValue w_local(long q, int k, const QuarticValue& X);
// Multiplicative extensions over the prime degrees of a square-free modulus.
QuarticValue u_mod(long q, const std::vector<int>& prime_degs, const QuarticValue& X);
QuarticValue v_mod(long q, const std::vector<int>& prime_degs, const QuarticValue& X);
QuarticValue w_mod(long q, const std::vector<int>& prime_degs, const QuarticValue& X);

struct GammaData {
  bool a2_theta = false;
  int rho = 0;  // rho = i^rho
  QuarticValue value;      // from the defining sum
  QuarticValue tabulated;  // table entry
  bool match = false;
};
QuarticValue gamma_value(long q, bool a2_theta, int rho);
QuarticValue gamma_tabulated(long q, bool a2_theta, int rho);
std::vector<GammaData> gamma_table(long q);
int distinct_gamma_values(const std::vector<GammaData>& rows);

// L(1/2, chi_{theta'}) with theta' determined by rho.
QuadValue l_half_unit(long q, bool theta);

// Closed form of the residue at q^{-s4} = conj(rho) q^{-3/4}; requires a1 = 1.
QuarticValue residue_closed_form(Engine& E, const TwistSpec& t, int rho);
// The same residue from the intermediate expression with the sum S over e | c1, e' | c3.
QuarticValue residue_s_sum(Engine& E, const TwistSpec& t, int rho);
// c = 1: (1 - rho q^{3/4} t) Z(q^{-1/2}, q^{-1/2}, q^{-1/2}, +-t) at t = conj(rho) q^{-3/4}.
QuarticValue residue_explicit(long q, bool a2_theta, int rho);

struct ResidueW1Report {
  bool part1 = false;
  bool part2 = false;
  bool origin = false;
  bool twist_sign = false;  // theta0-twisted buckets equal Z(z1, z2, z3, -z4)
  std::string detail;
};
ResidueW1Report check_residue_w1(Engine& E, const rings::EqualityMode& mode);

// (1 - rho q^{3/4 - w}) Z(1/2, 1/2, 1/2, w, chi_{a2}; h) at q^{-w} = conj(rho) q^{-3/4}, assembled from the
// decomposition of Z(.; h) into twisted series, their closed-form residues and the local factors F, G.
QuarticValue h_route_term(Engine& E, const Poly& h, bool a2_theta, int rho);
// 1 + mu(p) h_route_term(p) / h_route_term(1) for a prime of degree k, from degree data alone.
QuarticValue local_residue_factor(long q, int k, bool a2_theta, int rho);

struct Z0Row {
  int trunc = 0;
  complex_t value;
  double tail_bound = 0;
};
struct Z0Report {
  bool a2_theta = false;
  int rho = 0;
  std::vector<Z0Row> h_route;  // truncated h-sums, deg h <= trunc
  std::vector<Z0Row> p_route;  // truncated Euler products, deg p <= trunc
  bool agree = true;           // every pair within the sum of tail bounds
  bool tails_monotone = true;
  double max_ratio = 0;        // max |difference| / (tail_h + tail_p)
  std::string detail;
};
Z0Report residue_z0_three_quarters(Engine& E, bool a2_theta, int rho, int h_deg_max, int prod_deg_max);

}  // namespace mdsforge::mds
