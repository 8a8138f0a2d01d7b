#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdsforge::fq {

using elem = std::uint32_t;

class field_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite field F_q, q = p^e, q = 1 mod 4. Elements are codes 0..q-1: the base-p digits of
// the coefficient vector over F_p[a]/(modulus), constant digit least significant.
class FieldSpec {
 public:
  int p = 0;
  int e = 0;
  long q = 0;
  std::vector<int> modulus;  // monic, degree e, low to high over F_p
  elem nonsquare_unit = 0;

  elem add(elem a, elem b) const { return add_[a * q + b]; }
  elem sub(elem a, elem b) const { return add_[a * q + neg_[b]]; }
  elem mul(elem a, elem b) const { return mul_[a * q + b]; }
  elem neg(elem a) const { return neg_[a]; }
  elem inv(elem a) const;
  elem pow(elem a, unsigned long n) const;
  // Quadratic character on F_q: 0, +1, -1.
  int chi(elem a) const { return chi_[a]; }
  // Element with the given integer value in the prime subfield.
  elem from_int(long v) const;

 private:
  friend FieldSpec build_field(int p, int e);
  std::vector<elem> add_, mul_, neg_, inv_;
  std::vector<std::int8_t> chi_;
};

FieldSpec build_field(int p, int e);

// Polynomial over F_q, coefficients low to high, no trailing zeros (zero polynomial is empty).
struct Poly {
  std::vector<elem> c;

  Poly() = default;
  explicit Poly(std::vector<elem> coeffs);
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  elem lead() const { return c.back(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  bool operator==(const Poly& o) const { return c == o.c; }
  bool operator!=(const Poly& o) const { return c != o.c; }
  bool operator<(const Poly& o) const;
};

using MonicPoly = Poly;

Poly constant(elem a);
Poly x_poly();
// Coefficients given as prime-field integers, low to high.
Poly poly_from_ints(const FieldSpec& F, const std::vector<long>& coeffs);

Poly add(const FieldSpec& F, const Poly& a, const Poly& b);
Poly sub(const FieldSpec& F, const Poly& a, const Poly& b);
Poly mul(const FieldSpec& F, const Poly& a, const Poly& b);
Poly scale(const FieldSpec& F, const Poly& a, elem s);
void divmod(const FieldSpec& F, const Poly& a, const Poly& b, Poly& quo, Poly& rem);
Poly mod(const FieldSpec& F, const Poly& a, const Poly& b);
Poly exact_div(const FieldSpec& F, const Poly& a, const Poly& b);
Poly make_monic(const FieldSpec& F, const Poly& a);
Poly gcd(const FieldSpec& F, const Poly& a, const Poly& b);  // monic or zero
Poly derivative(const FieldSpec& F, const Poly& a);
Poly powmod(const FieldSpec& F, const Poly& base, unsigned long long n, const Poly& m);
Poly pow(const FieldSpec& F, const Poly& a, unsigned n);
std::string to_string(const FieldSpec& F, const Poly& a);

// |m| = q^deg m.
unsigned long long norm(const FieldSpec& F, const Poly& m);
unsigned long long ipow(unsigned long long b, unsigned n);

// Monic index: base-q counting order of (c_0, ..., c_{n-1}), constant digit least significant.
Poly monic_from_index(const FieldSpec& F, int deg, unsigned long long idx);
unsigned long long monic_index(const FieldSpec& F, const Poly& m);

int sgn(const FieldSpec& F, const Poly& d);
// Kronecker symbol (d/m) for monic m, by reciprocity-based Euclidean reduction.
int kronecker(const FieldSpec& F, const Poly& d, const Poly& m);
// Same symbol from the factorization of m (test oracle).
int kronecker_bruteforce(const FieldSpec& F, const Poly& d, const Poly& m);
// Legendre symbol (d/p) for monic irreducible p via Euler's criterion.
int legendre(const FieldSpec& F, const Poly& d, const Poly& p);

struct Factorization {
  std::vector<std::pair<Poly, int>> factors;  // monic irreducibles, ascending, with multiplicity
  elem unit = 1;
};

struct SquareDecomposition {
  Poly d0;  // monic square-free part
  Poly d1;  // monic, d = d0 * d1^2 (times unit)
};

Factorization factor(const FieldSpec& F, const Poly& m);
Poly reconstruct(const FieldSpec& F, const Factorization& fac);
int mobius(const Factorization& fac);
int omega(const Factorization& fac);
bool is_squarefree(const FieldSpec& F, const Poly& m);
SquareDecomposition square_decompose(const FieldSpec& F, const Poly& d);
bool is_irreducible(const FieldSpec& F, const Poly& f);
unsigned long long euler_phi(const FieldSpec& F, const Poly& m);

enum class MonicFilter { all, squarefree, irreducible };

// Visits monics of degree n with index in [begin, end) in index order.
void for_each_monic(const FieldSpec& F, int n, MonicFilter filter,
                    const std::function<void(const Poly&)>& fn, unsigned long long begin = 0,
                    unsigned long long end = ~0ULL);
std::vector<Poly> enumerate_monic(const FieldSpec& F, int n, MonicFilter filter);

// Number of monic irreducibles of degree m over F_q (Moebius inversion).
long long irreducible_count(long q, int m);

// Smallest-factor sieve over all monics of degree <= max_deg; factorizations by table lookup.
class FactorTable {
 public:
  FactorTable(const FieldSpec& F, int max_deg);
  int max_deg() const { return max_deg_; }
  // Irreducibles in (degree, index) order; prime ids index this list.
  const std::vector<Poly>& primes() const { return primes_; }
  int prime_degree(int id) const { return prime_deg_[id]; }
  int prime_id(int deg, unsigned long long idx) const;
  // (prime id, exponent), prime ids ascending.
  std::vector<std::pair<int, int>> factor_ids(int deg, unsigned long long idx) const;
  Factorization factor(const Poly& m) const;

 private:
  FieldSpec F_;
  int max_deg_;
  std::vector<std::vector<std::uint32_t>> spf_;  // per degree: 0 = irreducible, else 1 + prime id
  std::vector<std::vector<std::int32_t>> pid_;   // per degree: prime id of irreducible index, -1 otherwise
  std::vector<Poly> primes_;
  std::vector<int> prime_deg_;
};

}  // namespace mdsforge::fq
