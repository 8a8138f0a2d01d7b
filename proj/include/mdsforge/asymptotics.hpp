#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsforge/fq.hpp"
#include "mdsforge/lfun.hpp"
#include "mdsforge/mds.hpp"
#include "mdsforge/rings.hpp"

namespace mdsforge::asymptotics {

using fq::FieldSpec;
using rings::complex_t;
using rings::Q;
using rings::QuadValue;
using rings::QuarticValue;
using rings::real_t;

class asymptotics_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// P(x) = (1-x)^5 (1+x) (1 + 4x + 11x^2 + 10x^3 - 11x^4 + 11x^6 - 4x^7 - x^8), coefficient of x^j at index j.
std::vector<long> zhang_coefficients();
// P(x) evaluated exactly at x in Q(i, q^(1/4)).
QuarticValue zhang_eval(const QuarticValue& x);
// sum_{j >= 1} |p_j| x^j; bounds |1 - P(y)| and, when below 1, |log P(y)| <= -log(1 - B(|y|)).
real_t zhang_majorant(const real_t& x);

// Number of monic irreducibles of degree k as a high-precision real (no overflow).
real_t irr_real(long q, int k);

struct EulerProductValue {
  long q = 0;
  bool theta = false;  // chi(p) = (-1)^{deg p} when set, else 1
  int deg_max = 0;
  real_t value;
  real_t tail_bound;  // |full product - value| <= tail_bound
};
// prod over monic irreducibles p with deg p <= deg_max of P(chi(p) / sqrt|p|).
EulerProductValue euler_product_P(long q, bool theta, int deg_max);
// Tail exponent T_M = sum_{k > M} (q^k / k) (-log(1 - B(q^{-k/2}))).
real_t euler_tail_exponent(long q, int deg_max);

// ---- cubic moments ----

// S(D) = sum over square-free monic d0 of degree D of L(1/2, chi_d0)^3, exact.
QuadValue moment_sum(const FieldSpec& F, int D, int threads, const lfun::CharSumEngine* engine = nullptr);
// Same through the sieve: sum over square-free h, 2 deg h <= D, of mu(h) Z(1/2; chi_1; h)[t^D].
QuadValue moment_by_sieve(mds::Engine& E, int D);

struct MomentEntry {
  long q = 0;
  int D = 0;
  QuadValue value;
  std::string hash;
};

// moments/q{q}/D{D}.json with {q, D, a, b, hash}; the hash is SHA-256 over "q|D|a|b".
class MomentCache {
 public:
  explicit MomentCache(std::filesystem::path root);
  std::filesystem::path file_for(long q, int D) const;
  std::optional<MomentEntry> load(long q, int D) const;  // throws on hash mismatch
  void store(const MomentEntry& e) const;
  static std::string content_hash(long q, int D, const QuadValue& v);

 private:
  std::filesystem::path root_;
};

struct MomentTable {
  long q = 0;
  std::map<int, QuadValue> entries;
  std::map<int, bool> from_cache;
  int threads = 1;
  double seconds = 0;
};
// Fills D in [d_min, d_max], reading and writing the cache when given.
MomentTable fill_moments(const FieldSpec& F, int d_min, int d_max, int threads, const MomentCache* cache);

// ---- secondary term ----

struct RTerm {
  long q = 0;
  int D = 0;
  int prod_deg_max = 0;
  real_t value;           // verbatim three-line display
  real_t residue_route;   // sum over rho of rho^D (1/8) Gamma L^7 prod P
  real_t tail_bound;
  bool brackets_match = false;  // bracket constants equal Gamma / 2 exactly
  std::string detail;
};
RTerm r_term(long q, int D, int prod_deg_max);

struct SecondaryFit {
  int degree = 0;
  bool with_r_term = false;
  double rms_residual = 0;
  double condition = 0;
};
struct SecondaryReport {
  long q = 0;
  int d_max = 0;
  bool fitted = false;
  std::vector<std::string> lines;
  std::vector<double> growth;  // S(D) / (q^D (D+1)^6)
  std::vector<SecondaryFit> fits;
  std::vector<double> w_partial;  // partial sums of W(xi) at xi = q^{-2}
};
SecondaryReport secondary_term_report(long q, const std::map<int, QuadValue>& moments, int prod_deg_max);

// ---- inequality suite ----

struct BoundItem {
  std::string name;
  bool pass = true;
  double worst = 0;  // worst ratio lhs / bound (pass iff < 1) or the reported extremal value
  std::string detail;
};
struct BoundSuiteReport {
  bool pass = true;
  std::vector<BoundItem> items;
};
struct BoundGrid {
  int lindelof_min_deg = 3;
  int lindelof_max_deg = 6;
  int t_samples = 32;
  int p_l_max = 12;
  double eta = 0.05;
  int threads = 0;
};
BoundSuiteReport bound_suite(const std::vector<long>& q_list, const BoundGrid& grid);
// (1 + 7/q + 7/q^2 + 1/q^3) / (1 - 1/q)^8, the constant majorizing |f_odd| / |z| (16.0217... at q = 5).
real_t f_odd_constant(long q);
// Partial sums of sum over square-free h of A^{omega(h)} |h|^{-sigma} against their Euler-product majorant.
BoundItem dirichlet_da_check(long q, double A, double sigma, int deg_max);

}  // namespace mdsforge::asymptotics
