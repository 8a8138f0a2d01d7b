#pragma once

#include <gmpxx.h>

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdsforge::rings {

using Q = mpq_class;
using real_t = boost::multiprecision::cpp_bin_float_100;
using complex_t = boost::multiprecision::cpp_complex_100;

class ring_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string q_to_string(const Q& x);  // "num/den" or "num"
Q q_from_string(const std::string& s);
real_t to_real(const Q& x);

// Laurent polynomial in s = sqrt(q) with rational coefficients; q^k is s^(2k).
class ParamPoly {
 public:
  ParamPoly() = default;
  ParamPoly(long v);  // NOLINT(google-explicit-constructor)
  ParamPoly(const Q& v);  // NOLINT(google-explicit-constructor)
  static ParamPoly monomial(const Q& c, int s_exp);
  static ParamPoly q_power(int k) { return monomial(Q(1), 2 * k); }
  static ParamPoly s_power(int k) { return monomial(Q(1), k); }

  bool is_zero() const { return c_.empty(); }
  int low() const { return lo_; }
  int high() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  Q coeff(int s_exp) const;
  bool is_monomial() const { return c_.size() == 1; }
  bool has_odd_powers() const;

  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o);
  ParamPoly operator-() const;
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  bool operator==(const ParamPoly& o) const { return lo_ == o.lo_ && c_ == o.c_; }
  bool operator!=(const ParamPoly& o) const { return !(*this == o); }

  // s -> s^k (k may be negative).
  ParamPoly subs_power(int k) const;
  // Inverse of a monomial.
  ParamPoly inverse_monomial() const;
  Q eval(const Q& s) const;
  template <class R>
  R eval_in(const R& one, const R& s, const R& s_inv) const;
  std::string str() const;

  template <class Fn>
  void for_each(Fn fn) const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) fn(lo_ + static_cast<int>(i), c_[i]);
  }

 private:
  void normalize();
  int lo_ = 0;
  std::vector<Q> c_;
};

using Exps = std::array<int, 4>;
using Key = std::uint64_t;

Key pack(const Exps& e);
Exps unpack(Key k);
int weighted_degree(const Exps& e, const Exps& w);

// Polynomial in z1..z4 with ParamPoly coefficients, canonical (no zero terms).
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(const ParamPoly& c);  // NOLINT(google-explicit-constructor)
  static MultiPoly monomial(const ParamPoly& c, const Exps& e);
  static MultiPoly variable(int i);

  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  const std::map<Key, ParamPoly>& terms() const { return t_; }
  ParamPoly coeff(const Exps& e) const;
  void add_term(const Exps& e, const ParamPoly& c);
  int total_degree() const;
  int degree_in(int var) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const ParamPoly& c) const;
  MultiPoly shifted(const Exps& e) const;  // multiply by z^e
  bool operator==(const MultiPoly& o) const { return t_ == o.t_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  // Exact quotient by (1 - z_var); throws if the division is not exact.
  MultiPoly divide_one_minus(int var) const;
  // Coefficient of z_var^k as a polynomial in the other variables.
  MultiPoly slice(int var, int k) const;

  template <class R>
  R eval_in(const R& one, const R& s, const R& s_inv, const std::array<R, 4>& z) const;
  Q eval(const Q& s, const std::array<Q, 4>& z) const;
  std::string str() const;

 private:
  std::map<Key, ParamPoly> t_;
};

// Denominator unit (1 - c z^e).
struct GeomFactor {
  ParamPoly c;
  Exps e{};
};

// num / (den_poly * prod (1 - c z^e)).
struct RationalFunction {
  MultiPoly num;
  MultiPoly den_poly = MultiPoly(ParamPoly(1));
  std::vector<GeomFactor> factors;

  MultiPoly den_expanded() const;
  Q eval(const Q& s, const std::array<Q, 4>& z) const;
};

// Weighted-degree truncated power series in z1..z4.
struct TruncSeries {
  MultiPoly terms;
  Exps weights{1, 1, 1, 1};
  int cutoff = 0;
  std::string provenance;

  TruncSeries truncated(int new_cutoff) const;
  ParamPoly coeff(const Exps& e) const { return terms.coeff(e); }
};

MultiPoly truncate(const MultiPoly& p, const Exps& w, int cutoff);
MultiPoly mul_truncated(const MultiPoly& a, const MultiPoly& b, const Exps& w, int cutoff);
// p / (1 - c z^e) truncated; requires positive weighted degree of e.
MultiPoly div_geometric(const MultiPoly& p, const ParamPoly& c, const Exps& e, const Exps& w,
                        int cutoff);
TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b);
TruncSeries expand(const RationalFunction& f, const Exps& weights, int cutoff);

struct EqualityResult {
  bool equal = false;
  bool inconclusive = false;
  std::string mode;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string witness;
};

struct EqualityMode {
  bool exact = true;
  int trials = 24;
  std::uint64_t seed = 1;
};

EqualityResult rat_equal(const RationalFunction& f, const RationalFunction& g,
                         const EqualityMode& mode);

// Rational sample points for identity testing: s = sqrt(q) > 1 rational, z rational.
struct SamplePoint {
  Q s;
  std::array<Q, 4> z;
};
SamplePoint random_point(std::mt19937_64& rng);

// Element a + b sqrt(q) of Q(sqrt q), q fixed.
class QuadValue {
 public:
  QuadValue() = default;
  QuadValue(long q, const Q& a = 0, const Q& b = 0);
  static QuadValue sqrt_q(long q) { return QuadValue(q, 0, 1); }
  long q() const { return q_; }
  const Q& a() const { return a_; }
  const Q& b() const { return b_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  QuadValue& operator+=(const QuadValue& o);
  QuadValue& operator-=(const QuadValue& o);
  QuadValue& operator*=(const QuadValue& o);
  QuadValue& operator*=(const Q& c);
  QuadValue operator-() const { return QuadValue(q_, -a_, -b_); }
  friend QuadValue operator+(QuadValue x, const QuadValue& y) { return x += y; }
  friend QuadValue operator-(QuadValue x, const QuadValue& y) { return x -= y; }
  friend QuadValue operator*(QuadValue x, const QuadValue& y) { return x *= y; }
  friend QuadValue operator*(QuadValue x, const Q& c) { return x *= c; }
  QuadValue inverse() const;
  friend QuadValue operator/(const QuadValue& x, const QuadValue& y) { return x * y.inverse(); }
  QuadValue conj() const { return QuadValue(q_, a_, -b_); }
  QuadValue pow(int n) const;
  bool operator==(const QuadValue& o) const;
  bool operator!=(const QuadValue& o) const { return !(*this == o); }
  std::string str() const;

 private:
  void canon();
  long q_ = 0;
  Q a_, b_;
};

// Element of Q(i, q^(1/4)), coordinates over {q^(j/4)} x {1, i}; index 2*j + (imag ? 1 : 0).
class QuarticValue {
 public:
  QuarticValue() = default;
  explicit QuarticValue(long q);
  QuarticValue(long q, const Q& re);
  static QuarticValue basis(long q, int j, bool imag);
  static QuarticValue from_quad(const QuadValue& x);
  long q() const { return q_; }
  const Q& coord(int j, bool imag) const { return v_[2 * j + (imag ? 1 : 0)]; }
  bool is_zero() const;

  QuarticValue& operator+=(const QuarticValue& o);
  QuarticValue& operator-=(const QuarticValue& o);
  QuarticValue& operator*=(const QuarticValue& o);
  QuarticValue& operator*=(const Q& c);
  QuarticValue operator-() const;
  friend QuarticValue operator+(QuarticValue x, const QuarticValue& y) { return x += y; }
  friend QuarticValue operator-(QuarticValue x, const QuarticValue& y) { return x -= y; }
  friend QuarticValue operator*(QuarticValue x, const QuarticValue& y) { return x *= y; }
  friend QuarticValue operator*(QuarticValue x, const Q& c) { return x *= c; }
  QuarticValue inverse() const;
  friend QuarticValue operator/(const QuarticValue& x, const QuarticValue& y) {
    return x * y.inverse();
  }
  QuarticValue complex_conj() const;
  QuarticValue pow(int n) const;
  // Real part (coordinates without i).
  QuarticValue real_part() const;
  bool operator==(const QuarticValue& o) const;
  bool operator!=(const QuarticValue& o) const { return !(*this == o); }
  std::string str() const;

 private:
  void canon();
  long q_ = 0;
  std::array<Q, 8> v_{};
};

real_t tower_eval(const QuadValue& x);
complex_t tower_eval(const QuarticValue& x);
std::string format_real(const real_t& x, int digits);
std::string format_complex(const complex_t& x, int digits);

// Exact integer square root if n is a perfect square.
std::optional<long> exact_sqrt(long n);

// ---- template implementations ----

template <class R>
R ParamPoly::eval_in(const R& one, const R& s, const R& s_inv) const {
  R acc = one * Q(0);
  if (c_.empty()) return acc;
  R base = one;
  if (lo_ > 0)
    for (int i = 0; i < lo_; ++i) base = base * s;
  else
    for (int i = 0; i < -lo_; ++i) base = base * s_inv;
  R cur = base;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] != 0) acc = acc + cur * c_[i];
    cur = cur * s;
  }
  return acc;
}

template <class R>
R MultiPoly::eval_in(const R& one, const R& s, const R& s_inv, const std::array<R, 4>& z) const {
  std::array<std::vector<R>, 4> pw;
  for (int v = 0; v < 4; ++v) {
    const int d = degree_in(v);
    pw[v].reserve(d + 1);
    pw[v].push_back(one);
    for (int k = 1; k <= d; ++k) pw[v].push_back(pw[v].back() * z[v]);
  }
  R acc = one * Q(0);
  for (const auto& [k, c] : t_) {
    const Exps e = unpack(k);
    R term = c.eval_in(one, s, s_inv);
    for (int v = 0; v < 4; ++v)
      if (e[v]) term = term * pw[v][e[v]];
    acc = acc + term;
  }
  return acc;
}

}  // namespace mdsforge::rings
