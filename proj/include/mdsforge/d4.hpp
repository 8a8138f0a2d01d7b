#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsforge/rings.hpp"

namespace mdsforge::d4 {

using rings::Exps;
using rings::MultiPoly;
using rings::ParamPoly;
using rings::Q;
using rings::QuadValue;
using rings::QuarticValue;
using rings::RationalFunction;

class d4_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Term coef * q^qexp * z^e of the numerator N(z; q) of Z.
struct NTerm {
  long coef;
  int qexp;
  Exps e;
};

const std::vector<NTerm>& numerator_terms();
// Z(z; q) = N / D with D the product of 12 factors (1 - q^a z^e).
RationalFunction explicit_Z();
// f(z; q) = Z(q z; 1/q).
RationalFunction explicit_f();
// f with the coefficient of one numerator term shifted by delta (mutation testing).
RationalFunction perturbed_f(std::size_t term_index, long delta);

// a(k1, k2, k3, l; q) from the total-degree expansion of f.
class ACoeffTable {
 public:
  explicit ACoeffTable(int cutoff = 10);
  int cutoff() const { return cutoff_; }
  ParamPoly a(int k1, int k2, int k3, int l) const;
  const rings::TruncSeries& series() const { return series_; }

 private:
  int cutoff_;
  rings::TruncSeries series_;
};

// P_l(z1, z2, z3; q) and Q_k(z4; q) by exact one-variable expansion and exact division.
class PQTable {
 public:
  PQTable() = default;
  const MultiPoly& P(int l);
  const MultiPoly& Qk(int k1, int k2, int k3);
  // [z4^l] of f * (1-z1)(1-z2)(1-z3), expanded in z4 only up to degree l_max.
  void ensure_P(int l_max);
  void ensure_Q(int k_max);

 private:
  int p_max_ = -1;
  int q_max_ = -1;
  std::vector<MultiPoly> P_;
  std::map<std::array<int, 3>, MultiPoly> Q_;
};

// Cross-check route: P_l from the total-degree truncated series with a stabilization margin.
// Throws d4_error("cutoff too small") when the top two layers do not vanish.
MultiPoly p_poly_stabilized(int l, int total_cutoff);

inline int a_n(int n) { return n & 1; }

struct FeReport {
  bool pass = true;
  std::vector<std::string> failures;
  int checked = 0;
};
// P_l(z) = (s z1)^{l - a_l} P_l(1/(q z1), z2, z3) and the Q-side, coefficientwise in z1 (z4).
FeReport check_pq_functional_eqs(PQTable& t, int l_max, int k_max);

struct ReconstructionReport {
  bool p_route = false;  // sum_l P_l z4^l prod (1 - z_i)^{-[l even]} reproduces the expansion
  bool q_route = false;  // sum_k Q_k z^k (1 - z4)^{-[|k| even]} reproduces the expansion
  int cutoff = 0;
};
// Both reconstructions of the total-degree expansion of f, compared exactly up to the cutoff.
ReconstructionReport check_reconstruction(PQTable& t, const ACoeffTable& a, int cutoff);

// P_l(c, c, c) with c = sign * q^{-1/2}, as a Laurent polynomial in s = sqrt(q).
ParamPoly p_at_center(const MultiPoly& P, int sign);

// Univariate polynomial in z with coefficients in a ring.
template <class R>
using UPoly = std::vector<R>;

struct CenterReport {
  bool pass = true;
  int first_mismatch = -1;  // z-degree
  int cutoff = 0;
  std::string which;
};
// Series route (from P_l) against the displayed closed forms: sign = +1 checks f_odd and f_even(+),
// sign = -1 checks f_even(-).
std::vector<CenterReport> specialize_center(PQTable& t, int sign, int cutoff);

// F, G0, G1 at z_i = |p|^{-1/2}: value = num(z) / den(z), den = (1 - z^2)^7 (1 - |p| z^4).
struct LocalFactors {
  long P = 0;
  UPoly<QuadValue> F, G0, G1, den;
};
LocalFactors local_factors(long P);
// The same closed forms with |p| = q^k, over Q(i, q^(1/4)).
struct LocalFactorsQuartic {
  long q = 0;
  int k = 0;
  UPoly<rings::QuarticValue> F, G0, G1, den;
};
LocalFactorsQuartic local_factors_quartic(long q, int k);
// The same factors as truncated z-series from the definitions through P_l(+-c).
struct LocalSeries {
  std::vector<QuadValue> F, G0, G1;  // F, G0, G1: coefficient of z^j
};
LocalSeries local_series(PQTable& t, long P, int terms);
// Series of num/den up to z^(terms-1).
std::vector<QuadValue> series_of(const UPoly<QuadValue>& num, const UPoly<QuadValue>& den, int terms);

rings::complex_t eval_upoly(const UPoly<QuadValue>& p, const rings::complex_t& z);
rings::complex_t eval_local(const UPoly<QuadValue>& num, const UPoly<QuadValue>& den,
                            const rings::complex_t& z);

// Displayed closed forms at the center c = q^{-1/2} for f_odd, f_even^-, 1/f_even^+.
struct ZevenForms {
  UPoly<QuadValue> odd_num, odd_den, minus_num, minus_den, inv_plus_num, inv_plus_den;
};
ZevenForms zeven_closed_forms(long q);
// f_even^{+-} from the appendix specializations, as num/den over Q(sqrt q).
void even_parts(long q, UPoly<QuadValue>& plus_num, UPoly<QuadValue>& minus_num, UPoly<QuadValue>& den);

struct BoundReport {
  bool pass = true;
  std::string name;
  long q = 0;
  double max_ratio = 0;  // max of |lhs| / bound over the grid
  int points = 0;
};
// Grid: 64 angles x 16 radii inside |z| <= q^{-1/2}, plus the boundary circle.
std::vector<BoundReport> check_zloc_bounds(long q);
std::vector<BoundReport> check_zeven_bounds(long q);
// |P_l(+-c)| < 843/(1 - 5^{-4 eta}) q^{(l - a_l)(1/4 + eta)}.
BoundReport check_p_estimate(PQTable& t, long q, int l_max, double eta);

}  // namespace mdsforge::d4
