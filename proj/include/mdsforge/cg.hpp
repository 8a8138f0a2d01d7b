#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mdsforge/rings.hpp"

namespace mdsforge::cg {

using rings::Q;

class cg_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RootType { A1, A2, A3, D4 };
RootType parse_root_type(const std::string& name);
std::string root_type_name(RootType t);

// Simply-laced root system; roots are coefficient vectors over the simple roots.
struct RootSystem {
  RootType type = RootType::A1;
  int rank = 0;
  std::vector<std::vector<int>> cartan;  // 2 on the diagonal, -1 when adjacent, 0 otherwise
  std::vector<std::vector<int>> positive_roots;

  bool adjacent(int i, int j) const { return i != j && cartan[i][j] == -1; }
  static int height(const std::vector<int>& root);
};

// D4 uses index 3 (variable z4) for the central node.
RootSystem build_root_system(RootType type);

// sigma_i(lambda) = lambda - <lambda, alpha_i> alpha_i.
std::vector<int> reflect(const RootSystem& rs, int i, const std::vector<int>& root);

// Weyl element w = s_{word[0]} ... s_{word[k-1]}; image[j] = w(alpha_j).
struct WeylElement {
  std::vector<int> word;
  std::vector<std::vector<int>> image;
};

// Breadth-first closure; words are reduced and extend their parent on the right.
std::vector<WeylElement> weyl_group(const RootSystem& rs);

// ---- pointwise action at rational s = sqrt(q) and rational z (size rank) ----
using Vec = std::vector<Q>;
using PointFn = std::function<Q(const Q& s, const Vec& z)>;

Vec sigma_z(const RootSystem& rs, int i, const Q& s, const Vec& z);
Vec eps_z(const RootSystem& rs, int i, const Vec& z);
// ^w z = s_{i1}( ... s_{ik}(z)).
Vec word_z(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z);
Q delta(const RootSystem& rs, const Q& s, const Vec& z);
Q j_cocycle(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z);
// (f|sigma_i)(z).
Q act_reflection_at(const RootSystem& rs, const PointFn& f, int i, const Q& s, const Vec& z);
// (1|w)(z) with 1|w = ((1|s_{i1})|...)|s_{ik}.
Q one_action_at(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z);
// f(z) = sum_w (1|w)(z) / Delta(^w z); throws rings::ring_error at a pole.
Q cg_average_at(const RootSystem& rs, const std::vector<WeylElement>& W, const Q& s, const Vec& z);
// Number of evaluation leaves of the recursive average (sum of 2^len over W).
std::uint64_t average_leaf_count(const std::vector<WeylElement>& W);

// ---- symbolic action on rational functions in z1..z_rank ----
// Monomial substitution z_j -> c_j z^{v_j} with signed exponents.
struct MonomialSub {
  rings::ParamPoly c;
  std::array<int, 4> v{};
};
using Substitution = std::vector<MonomialSub>;

Substitution sigma_sub(const RootSystem& rs, int i);
Substitution eps_sub(const RootSystem& rs, int i);
// (a o b)(z) = a(b(z)): substitute b's images into a.
Substitution compose(const Substitution& a, const Substitution& b);

// num * z^mono / prod factor^mult; factors are canonical (monomial content stripped,
// lowest-key coefficient 1 when it is a unit), so equal factors merge.
struct FactoredRF {
  rings::MultiPoly num;
  std::array<int, 4> mono{};
  std::map<std::string, std::pair<rings::MultiPoly, int>> factors;  // keyed by printed form

  static FactoredRF constant(const rings::ParamPoly& c);
  static FactoredRF from_rational(const rings::RationalFunction& f);
  rings::RationalFunction to_rational() const;
  bool is_zero() const { return num.is_zero(); }
};

FactoredRF substitute(const FactoredRF& f, const Substitution& sub);
FactoredRF operator+(const FactoredRF& a, const FactoredRF& b);
FactoredRF operator-(const FactoredRF& a, const FactoredRF& b);
FactoredRF operator*(const FactoredRF& a, const FactoredRF& b);
// Exact: the numerator of a - b over the lcm of denominators vanishes.
bool equal(const FactoredRF& a, const FactoredRF& b);

FactoredRF act_reflection(const RootSystem& rs, const FactoredRF& f, int i);
rings::RationalFunction act_reflection(const RootSystem& rs, const rings::RationalFunction& f, int i);
// Delta(^sub z) as a factored product.
FactoredRF delta_at(const RootSystem& rs, const Substitution& sub);
// Exact average; practical for rank <= 2.
FactoredRF cg_average_symbolic(const RootSystem& rs);

// (1 - z_i) f with z_j = 0 (j adjacent to i) has zero z_i-derivative.
bool check_limiting_condition(const RootSystem& rs, const rings::RationalFunction& f, int i);

// Partial derivative in z_var.
rings::MultiPoly derivative(const rings::MultiPoly& p, int var);

struct VerifyOptions {
  int trials = 24;
  std::uint64_t seed = 1;
};

// Randomized identity test of the D4 average against an explicit rational function.
rings::EqualityResult verify_against_explicit(const rings::RationalFunction& explicit_f,
                                              const VerifyOptions& opt);
// Randomized test of (f|sigma_i) = f for every simple i.
rings::EqualityResult check_invariance(const RootSystem& rs, const PointFn& f,
                                       const VerifyOptions& opt);
PointFn point_fn(const rings::RationalFunction& f);

}  // namespace mdsforge::cg
