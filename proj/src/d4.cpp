#include "mdsforge/d4.hpp"

#include <cmath>
#include <sstream>

namespace mdsforge::d4 {

using rings::complex_t;
using rings::real_t;

namespace {

const std::vector<NTerm> kNumerator = {
    {1, 0, {0, 0, 0, 0}},
    {-1, 2, {1, 0, 0, 1}},
    {-1, 2, {0, 1, 0, 1}},
    {1, 3, {1, 1, 0, 1}},
    {-1, 2, {0, 0, 1, 1}},
    {1, 3, {1, 0, 1, 1}},
    {1, 3, {0, 1, 1, 1}},
    {-1, 4, {1, 1, 1, 1}},
    {1, 3, {1, 1, 0, 2}},
    {-1, 4, {2, 1, 0, 2}},
    {-1, 4, {1, 2, 0, 2}},
    {1, 3, {1, 0, 1, 2}},
    {-1, 4, {2, 0, 1, 2}},
    {1, 3, {0, 1, 1, 2}},
    {-2, 4, {1, 1, 1, 2}},
    {1, 4, {2, 1, 1, 2}},
    {1, 5, {2, 1, 1, 2}},
    {-1, 4, {0, 2, 1, 2}},
    {1, 4, {1, 2, 1, 2}},
    {1, 5, {1, 2, 1, 2}},
    {-1, 5, {2, 2, 1, 2}},
    {-1, 4, {1, 0, 2, 2}},
    {-1, 4, {0, 1, 2, 2}},
    {1, 4, {1, 1, 2, 2}},
    {1, 5, {1, 1, 2, 2}},
    {-1, 5, {2, 1, 2, 2}},
    {-1, 5, {1, 2, 2, 2}},
    {1, 6, {2, 2, 0, 3}},
    {-1, 5, {1, 1, 1, 3}},
    {1, 6, {2, 1, 1, 3}},
    {-1, 6, {3, 1, 1, 3}},
    {1, 6, {1, 2, 1, 3}},
    {-1, 6, {2, 2, 1, 3}},
    {-1, 7, {2, 2, 1, 3}},
    {1, 7, {3, 2, 1, 3}},
    {-1, 6, {1, 3, 1, 3}},
    {1, 7, {2, 3, 1, 3}},
    {1, 6, {2, 0, 2, 3}},
    {1, 6, {1, 1, 2, 3}},
    {-1, 6, {2, 1, 2, 3}},
    {-1, 7, {2, 1, 2, 3}},
    {1, 7, {3, 1, 2, 3}},
    {1, 6, {0, 2, 2, 3}},
    {-1, 6, {1, 2, 2, 3}},
    {-1, 7, {1, 2, 2, 3}},
    {3, 7, {2, 2, 2, 3}},
    {-1, 8, {3, 2, 2, 3}},
    {1, 7, {1, 3, 2, 3}},
    {-1, 8, {2, 3, 2, 3}},
    {-1, 6, {1, 1, 3, 3}},
    {1, 7, {2, 1, 3, 3}},
    {1, 7, {1, 2, 3, 3}},
    {-1, 8, {2, 2, 3, 3}},
    {-1, 8, {3, 3, 1, 4}},
    {1, 8, {2, 2, 2, 4}},
    {-1, 8, {3, 2, 2, 4}},
    {1, 9, {4, 2, 2, 4}},
    {-1, 8, {2, 3, 2, 4}},
    {1, 9, {3, 3, 2, 4}},
    {1, 9, {2, 4, 2, 4}},
    {-1, 8, {3, 1, 3, 4}},
    {-1, 8, {2, 2, 3, 4}},
    {1, 9, {3, 2, 3, 4}},
    {-1, 8, {1, 3, 3, 4}},
    {1, 9, {2, 3, 3, 4}},
    {-1, 9, {3, 3, 3, 4}},
    {1, 9, {2, 2, 4, 4}},
    {1, 9, {3, 3, 1, 5}},
    {-1, 9, {2, 2, 2, 5}},
    {1, 9, {3, 2, 2, 5}},
    {-1, 10, {4, 2, 2, 5}},
    {1, 9, {2, 3, 2, 5}},
    {-1, 10, {3, 3, 2, 5}},
    {-1, 10, {2, 4, 2, 5}},
    {1, 9, {3, 1, 3, 5}},
    {1, 9, {2, 2, 3, 5}},
    {-1, 10, {3, 2, 3, 5}},
    {1, 9, {1, 3, 3, 5}},
    {-1, 10, {2, 3, 3, 5}},
    {1, 10, {3, 3, 3, 5}},
    {-1, 10, {2, 2, 4, 5}},
    {-1, 10, {3, 3, 2, 6}},
    {1, 11, {4, 3, 2, 6}},
    {1, 11, {3, 4, 2, 6}},
    {-1, 12, {4, 4, 2, 6}},
    {-1, 10, {3, 2, 3, 6}},
    {1, 11, {4, 2, 3, 6}},
    {-1, 10, {2, 3, 3, 6}},
    {3, 11, {3, 3, 3, 6}},
    {-1, 11, {4, 3, 3, 6}},
    {-1, 12, {4, 3, 3, 6}},
    {1, 12, {5, 3, 3, 6}},
    {1, 11, {2, 4, 3, 6}},
    {-1, 11, {3, 4, 3, 6}},
    {-1, 12, {3, 4, 3, 6}},
    {1, 12, {4, 4, 3, 6}},
    {1, 12, {3, 5, 3, 6}},
    {1, 11, {3, 2, 4, 6}},
    {-1, 12, {4, 2, 4, 6}},
    {1, 11, {2, 3, 4, 6}},
    {-1, 11, {3, 3, 4, 6}},
    {-1, 12, {3, 3, 4, 6}},
    {1, 12, {4, 3, 4, 6}},
    {-1, 12, {2, 4, 4, 6}},
    {1, 12, {3, 4, 4, 6}},
    {-1, 13, {4, 4, 4, 6}},
    {1, 12, {3, 3, 5, 6}},
    {-1, 13, {4, 3, 3, 7}},
    {-1, 13, {3, 4, 3, 7}},
    {1, 13, {4, 4, 3, 7}},
    {1, 14, {4, 4, 3, 7}},
    {-1, 14, {5, 4, 3, 7}},
    {-1, 14, {4, 5, 3, 7}},
    {-1, 13, {3, 3, 4, 7}},
    {1, 13, {4, 3, 4, 7}},
    {1, 14, {4, 3, 4, 7}},
    {-1, 14, {5, 3, 4, 7}},
    {1, 13, {3, 4, 4, 7}},
    {1, 14, {3, 4, 4, 7}},
    {-2, 14, {4, 4, 4, 7}},
    {1, 15, {5, 4, 4, 7}},
    {-1, 14, {3, 5, 4, 7}},
    {1, 15, {4, 5, 4, 7}},
    {-1, 14, {4, 3, 5, 7}},
    {-1, 14, {3, 4, 5, 7}},
    {1, 15, {4, 4, 5, 7}},
    {-1, 14, {4, 4, 4, 8}},
    {1, 15, {5, 4, 4, 8}},
    {1, 15, {4, 5, 4, 8}},
    {-1, 16, {5, 5, 4, 8}},
    {1, 15, {4, 4, 5, 8}},
    {-1, 16, {5, 4, 5, 8}},
    {-1, 16, {4, 5, 5, 8}},
    {1, 18, {5, 5, 5, 9}},
};

struct DenFactor {
  int qexp;
  Exps e;
};

const std::vector<DenFactor> kDenominator = {
    {1, {1, 0, 0, 0}}, {1, {0, 1, 0, 0}}, {1, {0, 0, 1, 0}}, {1, {0, 0, 0, 1}},
    {3, {2, 0, 0, 2}}, {3, {0, 2, 0, 2}}, {3, {0, 0, 2, 2}},
    {4, {2, 2, 0, 2}}, {4, {2, 0, 2, 2}}, {4, {0, 2, 2, 2}},
    {5, {2, 2, 2, 2}}, {6, {2, 2, 2, 4}},
};

int total(const Exps& e) { return e[0] + e[1] + e[2] + e[3]; }

template <class R>
UPoly<R> up_mul(const UPoly<R>& a, const UPoly<R>& b) {
  if (a.empty() || b.empty()) return {};
  UPoly<R> r(a.size() + b.size() - 1, R{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}

template <class R>
UPoly<R> up_add(const UPoly<R>& a, const UPoly<R>& b) {
  UPoly<R> r(std::max(a.size(), b.size()), R{});
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

template <class R>
UPoly<R> up_scale(const UPoly<R>& a, const R& c) {
  UPoly<R> r = a;
  for (auto& x : r) x = x * c;
  return r;
}

// Exact division by z^k; throws if a low coefficient is nonzero.
template <class R>
UPoly<R> up_div_zk(const UPoly<R>& a, int k) {
  for (int i = 0; i < k && i < static_cast<int>(a.size()); ++i)
    if (!a[i].is_zero()) throw d4_error("division by a power of z is not exact");
  if (static_cast<int>(a.size()) <= k) return {};
  return UPoly<R>(a.begin() + k, a.end());
}

// (1 - z^2)^7 (1 - q z^4) with q supplied as an element of R.
template <class R>
UPoly<R> center_den(const R& one, const R& q) {
  UPoly<R> base = {one, R{}, -one};
  UPoly<R> d = {one};
  for (int k = 0; k < 7; ++k) d = up_mul(d, base);
  UPoly<R> last = {one, R{}, R{}, R{}, -q};
  return up_mul(d, last);
}

// Numerator of the appendix specialization of f_even at c = eps q^{-1/2}, with s^{-1} given.
template <class R>
UPoly<R> center_even_num(const R& one, const R& si, int eps) {
  const R e = eps > 0 ? one : -one;
  const R si2 = si * si, si3 = si2 * si;
  UPoly<R> n(9, R{});
  n[0] = one;
  n[2] = one * Q(7) - e * si * Q(14) + si2 * Q(6) - e * si3;
  n[4] = (one - e * si * Q(4) + si2 * Q(4) - e * si3) * Q(7);
  n[6] = one - e * si * Q(6) + si2 * Q(14) - e * si3 * Q(7);
  n[8] = -(e * si3);
  return n;
}

template <class R>
UPoly<R> odd_num(const R& one) {
  UPoly<R> n(8, R{});
  n[1] = one;
  n[3] = one * Q(7);
  n[5] = one * Q(7);
  n[7] = one;
  return n;
}

}  // namespace

const std::vector<NTerm>& numerator_terms() { return kNumerator; }

RationalFunction explicit_Z() {
  RationalFunction z;
  for (const auto& t : kNumerator) z.num.add_term(t.e, ParamPoly::monomial(Q(t.coef), 2 * t.qexp));
  for (const auto& f : kDenominator) z.factors.push_back({ParamPoly::q_power(f.qexp), f.e});
  return z;
}

RationalFunction explicit_f() { return perturbed_f(0, 0); }

RationalFunction perturbed_f(std::size_t term_index, long delta) {
  if (term_index >= kNumerator.size()) throw d4_error("numerator term index out of range");
  // c q^a z^e -> c q^{|e| - a} z^e under z -> q z, q -> 1/q.
  RationalFunction f;
  for (std::size_t i = 0; i < kNumerator.size(); ++i) {
    const auto& t = kNumerator[i];
    const long c = t.coef + (i == term_index ? delta : 0);
    f.num.add_term(t.e, ParamPoly::monomial(Q(c), 2 * (total(t.e) - t.qexp)));
  }
  for (const auto& d : kDenominator) f.factors.push_back({ParamPoly::q_power(total(d.e) - d.qexp), d.e});
  return f;
}

ACoeffTable::ACoeffTable(int cutoff) : cutoff_(cutoff) {
  series_ = rings::expand(explicit_f(), {1, 1, 1, 1}, cutoff);
}

ParamPoly ACoeffTable::a(int k1, int k2, int k3, int l) const {
  if (k1 < 0 || k2 < 0 || k3 < 0 || l < 0) throw d4_error("negative index");
  if (k1 + k2 + k3 + l > cutoff_)
    throw d4_error("a-coefficient index beyond the configured total-degree cutoff " + std::to_string(cutoff_));
  return series_.coeff({k1, k2, k3, l});
}

void PQTable::ensure_P(int l_max) {
  if (l_max <= p_max_) return;
  const RationalFunction f = explicit_f();
  RationalFunction g;
  g.num = f.num;
  for (const auto& fac : f.factors)
    if (fac.e[3] > 0) g.factors.push_back(fac);
  const rings::TruncSeries s = rings::expand(g, {0, 0, 0, 1}, l_max);
  P_.assign(l_max + 1, MultiPoly());
  for (int l = 0; l <= l_max; ++l) {
    MultiPoly c = s.terms.slice(3, l);
    if (l % 2 == 1)
      for (int v = 0; v < 3; ++v) c = c.divide_one_minus(v);
    P_[l] = c;
  }
  p_max_ = l_max;
}

const MultiPoly& PQTable::P(int l) {
  if (l < 0) throw d4_error("negative l");
  ensure_P(std::max(l, p_max_));
  return P_[l];
}

void PQTable::ensure_Q(int k_max) {
  if (k_max <= q_max_) return;
  const RationalFunction f = explicit_f();
  RationalFunction g;
  g.num = f.num;
  for (const auto& fac : f.factors)
    if (fac.e[0] + fac.e[1] + fac.e[2] > 0) g.factors.push_back(fac);
  const rings::TruncSeries s = rings::expand(g, {1, 1, 1, 0}, k_max);
  std::map<std::array<int, 3>, MultiPoly> groups;
  for (const auto& [key, c] : s.terms.terms()) {
    const Exps e = rings::unpack(key);
    groups[{e[0], e[1], e[2]}].add_term({0, 0, 0, e[3]}, c);
  }
  Q_.clear();
  for (int a = 0; a <= k_max; ++a)
    for (int b = 0; a + b <= k_max; ++b)
      for (int c = 0; a + b + c <= k_max; ++c) {
        MultiPoly v = groups[{a, b, c}];
        if ((a + b + c) % 2 == 1) v = v.divide_one_minus(3);
        Q_[{a, b, c}] = v;
      }
  q_max_ = k_max;
}

const MultiPoly& PQTable::Qk(int k1, int k2, int k3) {
  if (k1 < 0 || k2 < 0 || k3 < 0) throw d4_error("negative k");
  ensure_Q(std::max(k1 + k2 + k3, q_max_));
  return Q_.at({k1, k2, k3});
}

MultiPoly p_poly_stabilized(int l, int total_cutoff) {
  if (l > total_cutoff) throw d4_error("cutoff too small: l exceeds the total-degree cutoff");
  const rings::TruncSeries s = rings::expand(explicit_f(), {1, 1, 1, 1}, total_cutoff);
  MultiPoly c = s.terms.slice(3, l);
  const int top = total_cutoff - l;
  const Exps w{1, 1, 1, 0};
  if (l % 2 == 0) {
    MultiPoly prod(ParamPoly(1));
    for (int v = 0; v < 3; ++v) prod = prod * (MultiPoly(ParamPoly(1)) - MultiPoly::variable(v));
    c = rings::mul_truncated(c, prod, w, top);
  }
  MultiPoly low;
  for (const auto& [k, v] : c.terms()) {
    const int d = rings::weighted_degree(rings::unpack(k), w);
    if (d >= top - 1) throw d4_error("cutoff too small: no stabilization with two-degree margin for l = " + std::to_string(l));
    low.add_term(rings::unpack(k), v);
  }
  return low;
}

namespace {

// Coefficient of var^j as a polynomial in the remaining variables.
bool fe_holds(const MultiPoly& p, int var, int e, std::string& why) {
  if (p.degree_in(var) > e) {
    why = "degree in the reflected variable exceeds " + std::to_string(e);
    return false;
  }
  for (int j = 0; j <= e; ++j) {
    const MultiPoly lhs = p.slice(var, e - j);
    const MultiPoly rhs = p.slice(var, j).scaled(ParamPoly::s_power(e - 2 * j));
    if (lhs != rhs) {
      why = "coefficient mismatch at power " + std::to_string(e - j);
      return false;
    }
  }
  return true;
}

}  // namespace

ReconstructionReport check_reconstruction(PQTable& t, const ACoeffTable& a, int cutoff) {
  if (cutoff > a.cutoff()) throw d4_error("reconstruction cutoff exceeds the a-table cutoff");
  ReconstructionReport rep;
  rep.cutoff = cutoff;
  const MultiPoly target = a.series().truncated(cutoff).terms;
  const rings::Exps w{1, 1, 1, 1};
  MultiPoly inv_outer(ParamPoly(1));
  for (int v = 0; v < 3; ++v) {
    MultiPoly geo;
    for (int j = 0; j <= cutoff; ++j) {
      rings::Exps e{0, 0, 0, 0};
      e[v] = j;
      geo.add_term(e, ParamPoly(1));
    }
    inv_outer = rings::mul_truncated(inv_outer, geo, w, cutoff);
  }
  MultiPoly total;
  for (int l = 0; l <= cutoff; ++l) {
    MultiPoly part = t.P(l) * MultiPoly::monomial(ParamPoly(1), {0, 0, 0, l});
    if (l % 2 == 0) part = rings::mul_truncated(part, inv_outer, w, cutoff);
    total = total + rings::truncate(part, w, cutoff);
  }
  rep.p_route = total == target;
  MultiPoly geo4;
  for (int j = 0; j <= cutoff; ++j) geo4.add_term({0, 0, 0, j}, ParamPoly(1));
  MultiPoly qtotal;
  for (int k1 = 0; k1 <= cutoff; ++k1)
    for (int k2 = 0; k1 + k2 <= cutoff; ++k2)
      for (int k3 = 0; k1 + k2 + k3 <= cutoff; ++k3) {
        MultiPoly part = t.Qk(k1, k2, k3) * MultiPoly::monomial(ParamPoly(1), {k1, k2, k3, 0});
        if ((k1 + k2 + k3) % 2 == 0) part = rings::mul_truncated(part, geo4, w, cutoff);
        qtotal = qtotal + rings::truncate(part, w, cutoff);
      }
  rep.q_route = qtotal == target;
  return rep;
}

FeReport check_pq_functional_eqs(PQTable& t, int l_max, int k_max) {
  FeReport r;
  for (int l = 0; l <= l_max; ++l) {
    std::string why;
    ++r.checked;
    if (!fe_holds(t.P(l), 0, l - a_n(l), why)) {
      r.pass = false;
      r.failures.push_back("P_" + std::to_string(l) + ": " + why);
    }
  }
  for (int a = 0; a <= k_max; ++a)
    for (int b = 0; a + b <= k_max; ++b)
      for (int c = 0; a + b + c <= k_max; ++c) {
        std::string why;
        ++r.checked;
        const int n = a + b + c;
        if (!fe_holds(t.Qk(a, b, c), 3, n - a_n(n), why)) {
          r.pass = false;
          r.failures.push_back("Q_(" + std::to_string(a) + "," + std::to_string(b) + "," +
                               std::to_string(c) + "): " + why);
        }
      }
  return r;
}

ParamPoly p_at_center(const MultiPoly& P, int sign) {
  ParamPoly r;
  for (const auto& [k, c] : P.terms()) {
    const Exps e = rings::unpack(k);
    const int n = e[0] + e[1] + e[2];
    const long sg = (sign < 0 && (n & 1)) ? -1 : 1;
    r += c * ParamPoly::monomial(Q(sg), -n);
  }
  return r;
}

std::vector<CenterReport> specialize_center(PQTable& t, int sign, int cutoff) {
  t.ensure_P(cutoff);
  const ParamPoly one(1), q = ParamPoly::q_power(1), si = ParamPoly::s_power(-1);
  const UPoly<ParamPoly> den = center_den(one, q);
  UPoly<ParamPoly> odd(cutoff + 1), even(cutoff + 1);
  for (int l = 0; l <= cutoff; ++l) (l % 2 ? odd : even)[l] = p_at_center(t.P(l), sign);
  auto compare = [&](const UPoly<ParamPoly>& series, const UPoly<ParamPoly>& num, const std::string& name) {
    CenterReport rep;
    rep.which = name;
    rep.cutoff = cutoff;
    const UPoly<ParamPoly> lhs = up_mul(series, den);
    for (int j = 0; j <= cutoff; ++j) {
      const ParamPoly a = j < static_cast<int>(lhs.size()) ? lhs[j] : ParamPoly();
      const ParamPoly b = j < static_cast<int>(num.size()) ? num[j] : ParamPoly();
      if (a != b) {
        rep.pass = false;
        rep.first_mismatch = j;
        break;
      }
    }
    return rep;
  };
  std::vector<CenterReport> out;
  if (sign > 0) out.push_back(compare(odd, odd_num(one), "f_odd(+)"));
  out.push_back(compare(even, center_even_num(one, si, sign), sign > 0 ? "f_even(+)" : "f_even(-)"));
  return out;
}

namespace {

// F, G0, G1 at z_i = s^{-1} over the ring of one, with |p| given as qv.
template <class R>
void build_local(const R& one, const R& si, const R& qv, UPoly<R>& F, UPoly<R>& G0, UPoly<R>& G1,
                 UPoly<R>& den) {
  const R am = (one - si).pow(-3), ap = (one + si).pow(-3);
  den = center_den(one, qv);
  // F = (odd numerator / z - den) / z^2.
  UPoly<R> fo = up_div_zk(odd_num(one), 1);
  F = up_div_zk(up_add(fo, up_scale(den, -one)), 2);
  const UPoly<R> np = center_even_num(one, si, +1), nm = center_even_num(one, si, -1);
  const R half = one * Q(1, 2);
  // G^(a) = [A- N+ / 2 + (-1)^a A+ N- / 2 - (A- + (-1)^a A+) den / 2] / z^2.
  for (int a = 0; a < 2; ++a) {
    const R sg = a == 0 ? one : -one;
    UPoly<R> n = up_add(up_scale(np, am * half), up_scale(nm, sg * ap * half));
    n = up_add(n, up_scale(den, -(am + sg * ap) * half));
    (a == 0 ? G0 : G1) = up_div_zk(n, 2);
  }
}

}  // namespace

LocalFactors local_factors(long P) {
  LocalFactors lf;
  lf.P = P;
  const QuadValue one(P, 1), si = QuadValue::sqrt_q(P).inverse(), qv(P, P);
  build_local(one, si, qv, lf.F, lf.G0, lf.G1, lf.den);
  return lf;
}

LocalFactorsQuartic local_factors_quartic(long q, int k) {
  if (k < 1) throw d4_error("local_factors_quartic: degree must be positive");
  LocalFactorsQuartic lf;
  lf.q = q;
  lf.k = k;
  const QuarticValue one(q, 1);
  const QuarticValue s = QuarticValue::from_quad(QuadValue::sqrt_q(q)).pow(k);
  build_local(one, s.inverse(), s * s, lf.F, lf.G0, lf.G1, lf.den);
  return lf;
}

LocalSeries local_series(PQTable& t, long P, int terms) {
  t.ensure_P(terms + 3);
  const QuadValue one(P, 1), s = QuadValue::sqrt_q(P), si = s.inverse();
  const QuadValue am = (one - si).pow(-3), ap = (one + si).pow(-3);
  const QuadValue half(P, Q(1, 2));
  auto at = [&](int l, int sign) { return p_at_center(t.P(l), sign).eval_in<QuadValue>(one, s, si); };
  if (at(1, +1) != one) throw d4_error("P_1 at the center is not 1; F has a pole at z = 0");
  LocalSeries ls;
  ls.F.assign(terms, QuadValue(P));
  ls.G0.assign(terms, QuadValue(P));
  ls.G1.assign(terms, QuadValue(P));
  for (int j = 0; j < terms; ++j) {
    if (j % 2 == 0) {
      ls.F[j] = at(j + 3, +1);
      const QuadValue plus = am * at(j + 2, +1) * half, minus = ap * at(j + 2, -1) * half;
      ls.G0[j] = plus + minus;
      ls.G1[j] = plus - minus;
    }
  }
  return ls;
}

std::vector<QuadValue> series_of(const UPoly<QuadValue>& num, const UPoly<QuadValue>& den, int terms) {
  if (den.empty() || den[0].is_zero()) throw d4_error("series_of: denominator vanishes at z = 0");
  const QuadValue inv0 = den[0].inverse();
  std::vector<QuadValue> out(terms, QuadValue(den[0].q()));
  for (int j = 0; j < terms; ++j) {
    QuadValue acc = j < static_cast<int>(num.size()) ? num[j] : QuadValue(den[0].q());
    for (int i = 1; i <= j && i < static_cast<int>(den.size()); ++i) acc -= den[i] * out[j - i];
    out[j] = acc * inv0;
  }
  return out;
}

complex_t eval_upoly(const UPoly<QuadValue>& p, const complex_t& z) {
  complex_t acc(0);
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * z + complex_t(rings::tower_eval(p[i]));
  return acc;
}

complex_t eval_local(const UPoly<QuadValue>& num, const UPoly<QuadValue>& den, const complex_t& z) {
  return eval_upoly(num, z) / eval_upoly(den, z);
}

void even_parts(long q, UPoly<QuadValue>& plus_num, UPoly<QuadValue>& minus_num, UPoly<QuadValue>& den) {
  const QuadValue one(q, 1), si = QuadValue::sqrt_q(q).inverse(), half(q, Q(1, 2));
  const QuadValue am = (one - si).pow(-3), ap = (one + si).pow(-3);
  const UPoly<QuadValue> a = up_scale(center_even_num(one, si, +1), am);
  const UPoly<QuadValue> b = up_scale(center_even_num(one, si, -1), ap);
  plus_num = up_scale(up_add(a, b), half);
  minus_num = up_scale(up_add(a, up_scale(b, -one)), half);
  den = center_den(one, QuadValue(q, q));
}

ZevenForms zeven_closed_forms(long q) {
  ZevenForms z;
  const QuadValue one(q, 1), qv(q, q), qi(q, Q(1, q)), qi2 = qi * qi, qi3 = qi2 * qi;
  z.odd_num = odd_num(one);
  z.odd_den = center_den(one, qv);
  z.minus_num = {one * Q(3) + qi, {}, one * Q(10) - qi * Q(17) + qi2 * Q(3), {},
                 one * Q(3) - qi * Q(17) + qi2 * Q(10), {}, qi + qi2 * Q(3)};
  for (auto& x : z.minus_num)
    if (x.q() == 0) x = QuadValue(q);
  UPoly<QuadValue> d6 = {one};
  for (int k = 0; k < 6; ++k) d6 = up_mul(d6, UPoly<QuadValue>{one, QuadValue(q), -one});
  const QuadValue pre = QuadValue::sqrt_q(q) * (one - qi).pow(3);
  z.minus_den = up_scale(up_mul(d6, UPoly<QuadValue>{one, QuadValue(q), QuadValue(q), QuadValue(q), -qv}), pre);
  z.inv_plus_num = up_scale(center_den(one, qv), (one - qi).pow(3));
  z.inv_plus_den = {one + qi * Q(3), QuadValue(q), one * Q(7) - qi * Q(15) + qi2 - qi3, QuadValue(q),
                    (one - qi * Q(5) + qi2 * Q(5) - qi3) * Q(7), QuadValue(q),
                    one - qi + qi2 * Q(15) - qi3 * Q(7), QuadValue(q), -(qi2 * Q(3) + qi3)};
  return z;
}

namespace {

template <class Fn>
BoundReport grid_check(const std::string& name, long q, Fn ratio) {
  BoundReport r;
  r.name = name;
  r.q = q;
  const real_t R = 1 / boost::multiprecision::sqrt(real_t(q));
  const real_t pi = boost::math::constants::pi<real_t>();
  auto visit = [&](const real_t& rad, const real_t& theta) {
    const complex_t z(rad * boost::multiprecision::cos(theta), rad * boost::multiprecision::sin(theta));
    const double v = static_cast<double>(ratio(z));
    r.max_ratio = std::max(r.max_ratio, v);
    if (!(v < 1.0)) r.pass = false;
    ++r.points;
  };
  for (int k = 1; k <= 16; ++k)
    for (int j = 0; j < 64; ++j) visit(R * k / 16, 2 * pi * j / 64);
  for (int j = 0; j < 256; ++j) visit(R, 2 * pi * (j + real_t(1) / 2) / 256);
  return r;
}

real_t horner_qinv(long q, const std::vector<long>& c) {
  // c[0] + c[1] q^{-1} + ...
  real_t acc = 0, x = real_t(1) / q, p = 1;
  for (long v : c) {
    acc += v * p;
    p *= x;
  }
  return acc;
}

}  // namespace

std::vector<BoundReport> check_zloc_bounds(long q) {
  const LocalFactors lf = local_factors(q);
  const real_t qi = real_t(1) / q, qr = q;
  const real_t cF = horner_qinv(q, {99, 363, 770, 994, 812, 412, 119, 15}) / boost::multiprecision::pow(1 - qi, 8);
  const real_t cG0 = boost::multiprecision::pow(1 + qi, 3) * horner_qinv(q, {153, 427, 866, 1064, 843, 420, 120, 15}) /
                     (qr * boost::multiprecision::pow(1 - qi, 11));
  const real_t cG1 = horner_qinv(q, {31, 70, 134, 121, 65, 36, 10, 1}) / boost::multiprecision::pow(1 - qi, 10) /
                     boost::multiprecision::sqrt(qr);
  std::vector<BoundReport> out;
  out.push_back(grid_check("|F - 14 - q z^2| <= C_F |z|^2", q, [&](const complex_t& z) {
    const complex_t v = eval_local(lf.F, lf.den, z) - complex_t(14) - qr * z * z;
    return abs(v) / (cF * abs(z) * abs(z));
  }));
  out.push_back(grid_check("|G0 - 14 - q z^2| <= C_G0", q, [&](const complex_t& z) {
    const complex_t v = eval_local(lf.G0, lf.den, z) - complex_t(14) - qr * z * z;
    return abs(v) / cG0;
  }));
  out.push_back(grid_check("|G1| <= C_G1 q^{-1/2}", q, [&](const complex_t& z) {
    return abs(eval_local(lf.G1, lf.den, z)) / cG1;
  }));
  return out;
}

std::vector<BoundReport> check_zeven_bounds(long q) {
  UPoly<QuadValue> pn, mn, den;
  even_parts(q, pn, mn, den);
  const UPoly<QuadValue> on = odd_num(QuadValue(q, 1));
  const real_t sq = boost::multiprecision::sqrt(real_t(q));
  std::vector<BoundReport> out;
  out.push_back(grid_check("|f_odd| < 17 |z|", q, [&](const complex_t& z) {
    return abs(eval_local(on, den, z)) / (17 * abs(z));
  }));
  out.push_back(grid_check("|f_even^-| < 58 q^{-1/2}", q, [&](const complex_t& z) {
    return abs(eval_local(mn, den, z)) * sq / 58;
  }));
  out.push_back(grid_check("1/|f_even^+| < 20", q, [&](const complex_t& z) {
    return 1 / (abs(eval_local(pn, den, z)) * 20);
  }));
  return out;
}

BoundReport check_p_estimate(PQTable& t, long q, int l_max, double eta) {
  BoundReport r;
  r.name = "|P_l(+-c)| < 843/(1-5^{-4 eta}) q^{(l-a_l)(1/4+eta)}";
  r.q = q;
  t.ensure_P(l_max);
  const QuadValue one(q, 1), s = QuadValue::sqrt_q(q), si = s.inverse();
  const real_t e = eta;
  const real_t c = 843 / (1 - boost::multiprecision::pow(real_t(5), -4 * e));
  for (int l = 1; l <= l_max; ++l)
    for (int sign : {+1, -1}) {
      const QuadValue v = p_at_center(t.P(l), sign).eval_in<QuadValue>(one, s, si);
      const real_t bound = c * boost::multiprecision::pow(real_t(q), (l - a_n(l)) * (real_t(1) / 4 + e));
      const double ratio = static_cast<double>(abs(rings::tower_eval(v)) / bound);
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (!(ratio < 1.0)) r.pass = false;
      ++r.points;
    }
  return r;
}

}  // namespace mdsforge::d4
