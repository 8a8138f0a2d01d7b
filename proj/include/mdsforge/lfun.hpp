#pragma once

#include <string>
#include <vector>

#include "mdsforge/fq.hpp"
#include "mdsforge/rings.hpp"

namespace mdsforge::lfun {

using fq::FieldSpec;
using fq::Poly;
using rings::complex_t;
using rings::QuadValue;

class lfun_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LMode { full, fe_completed };

// Constant conductors are tagged special values, never polynomials.
enum class SpecialKind { none, zeta, zeta_twisted };  // 1/(1 - q^{1-s}), 1/(1 + q^{1-s})

// L(s, chi_d0) = sum_n coeffs[n] u^n with u = q^{-s}; coeffs[n] = sum over monic m of degree n of chi_d0(m).
struct LPolynomial {
  Poly d0;
  long q = 0;
  int deg = 0;
  int sgn = 1;
  SpecialKind special = SpecialKind::none;
  std::vector<long long> coeffs;
  int two_g = 0;  // degree of the unitary part: deg - 1 (odd deg) or deg - 2 (even deg)
};

// Fast character sums sum_{deg m = n} chi_d(m) for n <= max_deg, from Legendre tables of primes of degree <= max_deg.
class CharSumEngine {
 public:
  CharSumEngine(const FieldSpec& F, int max_deg);
  int max_deg() const { return max_deg_; }
  // Sums for n = 0..n_max; requires n_max <= max_deg.
  std::vector<long long> sums(const Poly& d, int n_max) const;
  // chi_d(p) for primes of degree <= max_prime_deg, in FactorTable prime order; 0 beyond.
  std::vector<int> prime_characters(const Poly& d, int max_prime_deg) const;
  const fq::FactorTable& table() const { return table_; }

 private:
  FieldSpec F_;
  int max_deg_;
  fq::FactorTable table_;
  std::vector<std::vector<signed char>> legendre_;               // per prime: residue index -> symbol
  std::vector<std::vector<std::vector<std::pair<int, int>>>> mfac_;  // per degree, per monic index
};

// Completes c_0..c_{2g} (times the (1 - sgn u) factor for even deg) from c_0..c_h, h = ceil((deg-1)/2).
std::vector<long long> complete_from_half(long q, int deg, int sgn, const std::vector<long long>& low);

LPolynomial l_polynomial(const FieldSpec& F, const Poly& d0, LMode mode, const CharSumEngine* engine = nullptr);

// L(1/2, chi_d0) exactly in Q(sqrt q).
QuadValue central_value(const LPolynomial& L);
QuadValue central_value(const FieldSpec& F, const Poly& d0);

complex_t eval_l(const LPolynomial& L, const complex_t& s);
// gamma_q(s, d) from its defining product for a conductor of the given degree and sign.
complex_t gamma_q(long q, int deg, int sgn, const complex_t& s);

struct LindelofReport {
  bool pass = true;
  bool skipped = false;
  std::string notice;
  double max_ratio = 0;  // max |L(1/2 + it)| / (4 |d|^{10 / log D})
  long conductors = 0;
  int samples = 0;
  std::vector<std::string> violations;
};
// |L(1/2 + it)| < 4 |d|^{10/log D} at t = 0 and t_samples points covering one period 2 pi / log q.
LindelofReport check_lindelof(const FieldSpec& F, const std::vector<Poly>& conductors, int t_samples = 32,
                              const CharSumEngine* engine = nullptr);

struct WeilReport {
  bool pass = true;
  double max_deviation = 0;  // max | |inverse root| - sqrt q |
  long conductors = 0;
  std::vector<std::string> failures;
};
// Inverse roots of the unitary part have modulus sqrt q within tol.
WeilReport check_weil(const FieldSpec& F, const std::vector<Poly>& conductors, double tol,
                      const CharSumEngine* engine = nullptr);

// Roots of a real polynomial (coefficient of u^n at index n) by Durand-Kerner iteration.
std::vector<complex_t> poly_roots(const std::vector<rings::real_t>& coeffs);

}  // namespace mdsforge::lfun
