#include "mdsforge/cg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mdsforge::cg {

using rings::Exps;
using rings::MultiPoly;
using rings::ParamPoly;
using rings::RationalFunction;
using rings::ring_error;

RootType parse_root_type(const std::string& name) {
  if (name == "A1") return RootType::A1;
  if (name == "A2") return RootType::A2;
  if (name == "A3") return RootType::A3;
  if (name == "D4") return RootType::D4;
  throw cg_error("unsupported root system type: " + name);
}

std::string root_type_name(RootType t) {
  switch (t) {
    case RootType::A1: return "A1";
    case RootType::A2: return "A2";
    case RootType::A3: return "A3";
    case RootType::D4: return "D4";
  }
  return "?";
}

int RootSystem::height(const std::vector<int>& root) {
  int h = 0;
  for (int k : root) h += k;
  return h;
}

std::vector<int> reflect(const RootSystem& rs, int i, const std::vector<int>& root) {
  int pairing = 0;
  for (int j = 0; j < rs.rank; ++j) pairing += root[j] * rs.cartan[i][j];
  std::vector<int> r = root;
  r[i] -= pairing;
  return r;
}

RootSystem build_root_system(RootType type) {
  RootSystem rs;
  rs.type = type;
  std::vector<std::pair<int, int>> edges;
  switch (type) {
    case RootType::A1: rs.rank = 1; break;
    case RootType::A2: rs.rank = 2; edges = {{0, 1}}; break;
    case RootType::A3: rs.rank = 3; edges = {{0, 1}, {1, 2}}; break;
    case RootType::D4: rs.rank = 4; edges = {{0, 3}, {1, 3}, {2, 3}}; break;
  }
  rs.cartan.assign(rs.rank, std::vector<int>(rs.rank, 0));
  for (int i = 0; i < rs.rank; ++i) rs.cartan[i][i] = 2;
  for (auto [a, b] : edges) rs.cartan[a][b] = rs.cartan[b][a] = -1;
  // Positive roots: closure of the simple roots under simple reflections, kept when nonnegative.
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  for (int i = 0; i < rs.rank; ++i) {
    std::vector<int> a(rs.rank, 0);
    a[i] = 1;
    seen.insert(a);
    queue.push_back(a);
  }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (int i = 0; i < rs.rank; ++i) {
      std::vector<int> r = reflect(rs, i, queue[h]);
      if (std::all_of(r.begin(), r.end(), [](int k) { return k >= 0; }) && seen.insert(r).second)
        queue.push_back(r);
    }
  rs.positive_roots.assign(seen.begin(), seen.end());
  std::stable_sort(rs.positive_roots.begin(), rs.positive_roots.end(),
                   [](const auto& a, const auto& b) { return RootSystem::height(a) < RootSystem::height(b); });
  return rs;
}

std::vector<WeylElement> weyl_group(const RootSystem& rs) {
  std::vector<WeylElement> out;
  std::set<std::vector<std::vector<int>>> seen;
  WeylElement id;
  for (int j = 0; j < rs.rank; ++j) {
    std::vector<int> a(rs.rank, 0);
    a[j] = 1;
    id.image.push_back(a);
  }
  seen.insert(id.image);
  out.push_back(id);
  for (std::size_t h = 0; h < out.size(); ++h)
    for (int i = 0; i < rs.rank; ++i) {
      // (w s_i)(alpha_j) = w(s_i alpha_j), expanded linearly through w's images.
      WeylElement nx;
      nx.word = out[h].word;
      nx.word.push_back(i);
      for (int j = 0; j < rs.rank; ++j) {
        std::vector<int> a(rs.rank, 0);
        a[j] = 1;
        const std::vector<int> sa = reflect(rs, i, a);
        std::vector<int> img(rs.rank, 0);
        for (int k = 0; k < rs.rank; ++k)
          for (int t = 0; t < rs.rank; ++t) img[t] += sa[k] * out[h].image[k][t];
        nx.image.push_back(img);
      }
      if (seen.insert(nx.image).second) out.push_back(std::move(nx));
    }
  return out;
}

// ---------------- pointwise ----------------

Vec sigma_z(const RootSystem& rs, int i, const Q& s, const Vec& z) {
  if (z[i] == 0) throw ring_error("sigma action at z_i = 0");
  Vec y = z;
  for (int j = 0; j < rs.rank; ++j) {
    if (j == i)
      y[j] = Q(1) / (s * s * z[i]);
    else if (rs.adjacent(i, j))
      y[j] = s * z[i] * z[j];
  }
  return y;
}

Vec eps_z(const RootSystem& rs, int i, const Vec& z) {
  Vec y = z;
  for (int j = 0; j < rs.rank; ++j)
    if (rs.adjacent(i, j)) y[j] = -y[j];
  return y;
}

Vec word_z(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z) {
  Vec y = z;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = sigma_z(rs, *it, s, y);
  return y;
}

Q delta(const RootSystem& rs, const Q& s, const Vec& z) {
  const Q q = s * s;
  Q d = 1;
  for (const auto& a : rs.positive_roots) {
    Q m = 1;
    for (int k = 0; k < RootSystem::height(a); ++k) m *= q;
    for (int j = 0; j < rs.rank; ++j)
      for (int k = 0; k < 2 * a[j]; ++k) m *= z[j];
    d *= (1 - m);
  }
  return d;
}

Q j_cocycle(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z) {
  const Q dw = delta(rs, s, word_z(rs, word, s, z));
  if (dw == 0) throw ring_error("cocycle evaluated at a zero of Delta");
  return delta(rs, s, z) / dw;
}

namespace {

// Coefficients of f^+ and f^- in (f|sigma_i)(z).
void reflection_coeffs(const Q& s, const Q& zi, Q& cplus, Q& cminus) {
  const Q q = s * s;
  if (zi == 0 || zi == 1) throw ring_error("reflection coefficient at a pole");
  cplus = -(1 - q * zi) / (q * zi * (1 - zi));
  cminus = Q(1) / (s * zi);
}

Q one_action_rec(const RootSystem& rs, const std::vector<int>& word, std::size_t k, const Q& s,
                 const Vec& z) {
  if (k == 0) return Q(1);
  const int i = word[k - 1];
  const Vec y = sigma_z(rs, i, s, z);
  const Q a = one_action_rec(rs, word, k - 1, s, y);
  const Q b = one_action_rec(rs, word, k - 1, s, eps_z(rs, i, y));
  Q cp, cm;
  reflection_coeffs(s, z[i], cp, cm);
  return cp * (a + b) / 2 + cm * (a - b) / 2;
}

}  // namespace

Q act_reflection_at(const RootSystem& rs, const PointFn& f, int i, const Q& s, const Vec& z) {
  const Vec y = sigma_z(rs, i, s, z);
  const Q a = f(s, y);
  const Q b = f(s, eps_z(rs, i, y));
  Q cp, cm;
  reflection_coeffs(s, z[i], cp, cm);
  return cp * (a + b) / 2 + cm * (a - b) / 2;
}

Q one_action_at(const RootSystem& rs, const std::vector<int>& word, const Q& s, const Vec& z) {
  return one_action_rec(rs, word, word.size(), s, z);
}

Q cg_average_at(const RootSystem& rs, const std::vector<WeylElement>& W, const Q& s, const Vec& z) {
  Q acc = 0;
  for (const auto& w : W) {
    const Q dw = delta(rs, s, word_z(rs, w.word, s, z));
    if (dw == 0) throw ring_error("average evaluated at a zero of Delta");
    acc += one_action_at(rs, w.word, s, z) / dw;
  }
  return acc;
}

std::uint64_t average_leaf_count(const std::vector<WeylElement>& W) {
  std::uint64_t n = 0;
  for (const auto& w : W) n += std::uint64_t{1} << w.word.size();
  return n;
}

// ---------------- symbolic ----------------

Substitution sigma_sub(const RootSystem& rs, int i) {
  Substitution sub(4);
  for (int j = 0; j < 4; ++j) {
    sub[j].c = ParamPoly(1);
    sub[j].v = {0, 0, 0, 0};
    sub[j].v[j] = 1;
  }
  for (int j = 0; j < rs.rank; ++j) {
    if (j == i) {
      sub[j].c = ParamPoly::q_power(-1);
      sub[j].v = {0, 0, 0, 0};
      sub[j].v[i] = -1;
    } else if (rs.adjacent(i, j)) {
      sub[j].c = ParamPoly::s_power(1);
      sub[j].v[i] += 1;
    }
  }
  return sub;
}

Substitution eps_sub(const RootSystem& rs, int i) {
  Substitution sub(4);
  for (int j = 0; j < 4; ++j) {
    sub[j].c = ParamPoly(j < rs.rank && rs.adjacent(i, j) ? -1 : 1);
    sub[j].v = {0, 0, 0, 0};
    sub[j].v[j] = 1;
  }
  return sub;
}

namespace {

ParamPoly ppow(const ParamPoly& c, int n) {
  ParamPoly r(1);
  if (n < 0) return ppow(c.inverse_monomial(), -n);
  for (int k = 0; k < n; ++k) r *= c;
  return r;
}

// Image of the monomial c z^e under sub, with signed exponents.
MonomialSub apply_monomial(const Substitution& sub, const ParamPoly& c, const std::array<int, 4>& e) {
  MonomialSub r;
  r.c = c;
  r.v = {0, 0, 0, 0};
  for (int j = 0; j < 4; ++j) {
    if (e[j] == 0) continue;
    r.c *= ppow(sub[j].c, e[j]);
    for (int t = 0; t < 4; ++t) r.v[t] += e[j] * sub[j].v[t];
  }
  return r;
}

// p(sub z) = result * z^{-shift}, shift >= 0.
MultiPoly substitute_poly(const MultiPoly& p, const Substitution& sub, Exps& shift) {
  std::map<std::array<int, 4>, ParamPoly> acc;
  for (const auto& [k, c] : p.terms()) {
    const Exps e = rings::unpack(k);
    const MonomialSub m = apply_monomial(sub, c, e);
    acc[m.v] += m.c;
  }
  shift = {0, 0, 0, 0};
  for (const auto& [v, c] : acc)
    if (!c.is_zero())
      for (int t = 0; t < 4; ++t) shift[t] = std::max(shift[t], -v[t]);
  MultiPoly r;
  for (const auto& [v, c] : acc) {
    if (c.is_zero()) continue;
    Exps e;
    for (int t = 0; t < 4; ++t) e[t] = v[t] + shift[t];
    r.add_term(e, c);
  }
  return r;
}

}  // namespace

Substitution compose(const Substitution& a, const Substitution& b) {
  Substitution r(4);
  for (int j = 0; j < 4; ++j) r[j] = apply_monomial(b, a[j].c, a[j].v);
  return r;
}

namespace {

// p = c * z^t * canonical(p); returns canonical(p).
MultiPoly canonical_factor(const MultiPoly& p, ParamPoly& c, Exps& t) {
  if (p.is_zero()) throw ring_error("zero denominator factor");
  t = {0, 0, 0, 0};
  bool first = true;
  for (const auto& [k, v] : p.terms()) {
    const Exps e = rings::unpack(k);
    for (int j = 0; j < 4; ++j) t[j] = first ? e[j] : std::min(t[j], e[j]);
    first = false;
  }
  const ParamPoly lead = p.terms().begin()->second;
  c = lead.is_monomial() ? lead : ParamPoly(1);
  const ParamPoly ci = c.inverse_monomial();
  MultiPoly r;
  for (const auto& [k, v] : p.terms()) {
    Exps e = rings::unpack(k);
    for (int j = 0; j < 4; ++j) e[j] -= t[j];
    r.add_term(e, v * ci);
  }
  return r;
}

// Multiply a Laurent monomial part into a numerator kept with nonnegative exponents.
void add_factor(FactoredRF& f, const MultiPoly& p, int mult) {
  if (mult == 0) return;
  ParamPoly c;
  Exps t;
  const MultiPoly g = canonical_factor(p, c, t);
  // p^mult = c^mult z^{mult t} g^mult, all in the denominator.
  f.num = f.num.scaled(ppow(c, -mult));
  for (int j = 0; j < 4; ++j) f.mono[j] -= mult * t[j];
  if (g.size() == 1) {
    // Constant after canonicalization: a pure scalar.
    f.num = f.num.scaled(ppow(g.terms().begin()->second, -mult));
    return;
  }
  auto& slot = f.factors[g.str()];
  slot.first = g;
  slot.second += mult;
}

MultiPoly poly_pow(const MultiPoly& p, int n) {
  MultiPoly r(ParamPoly(1));
  for (int k = 0; k < n; ++k) r = r * p;
  return r;
}

// a and b over the lcm of their denominators: returns the numerators (with z^mono folded in)
// and fills the shared factor map and monomial.
void align(const FactoredRF& a, const FactoredRF& b, MultiPoly& na, MultiPoly& nb, FactoredRF& shape) {
  shape.factors.clear();
  na = a.num;
  nb = b.num;
  for (const auto& [key, fa] : a.factors) shape.factors[key] = fa;
  for (const auto& [key, fb] : b.factors) {
    auto it = shape.factors.find(key);
    if (it == shape.factors.end())
      shape.factors[key] = fb;
    else
      it->second.second = std::max(it->second.second, fb.second);
  }
  for (const auto& [key, fl] : shape.factors) {
    auto ia = a.factors.find(key);
    auto ib = b.factors.find(key);
    const int ma = ia == a.factors.end() ? 0 : ia->second.second;
    const int mb = ib == b.factors.end() ? 0 : ib->second.second;
    if (fl.second > ma) na = na * poly_pow(fl.first, fl.second - ma);
    if (fl.second > mb) nb = nb * poly_pow(fl.first, fl.second - mb);
  }
  for (int j = 0; j < 4; ++j) shape.mono[j] = std::min(a.mono[j], b.mono[j]);
  Exps sa, sb;
  for (int j = 0; j < 4; ++j) {
    sa[j] = a.mono[j] - shape.mono[j];
    sb[j] = b.mono[j] - shape.mono[j];
  }
  na = na.shifted(sa);
  nb = nb.shifted(sb);
}

}  // namespace

FactoredRF FactoredRF::constant(const ParamPoly& c) {
  FactoredRF f;
  f.num = MultiPoly(c);
  return f;
}

FactoredRF FactoredRF::from_rational(const RationalFunction& r) {
  FactoredRF f;
  f.num = r.num;
  if (!(r.den_poly == MultiPoly(ParamPoly(1)))) add_factor(f, r.den_poly, 1);
  for (const auto& g : r.factors)
    add_factor(f, MultiPoly(ParamPoly(1)) - MultiPoly::monomial(g.c, g.e), 1);
  return f;
}

RationalFunction FactoredRF::to_rational() const {
  RationalFunction r;
  Exps up{0, 0, 0, 0}, down{0, 0, 0, 0};
  for (int j = 0; j < 4; ++j) (mono[j] >= 0 ? up[j] : down[j]) = std::abs(mono[j]);
  r.num = num.shifted(up);
  MultiPoly den = MultiPoly::monomial(ParamPoly(1), down);
  for (const auto& [key, f] : factors) den = den * poly_pow(f.first, f.second);
  r.den_poly = den;
  return r;
}

FactoredRF substitute(const FactoredRF& f, const Substitution& sub) {
  FactoredRF r;
  Exps sh;
  r.num = substitute_poly(f.num, sub, sh);
  const MonomialSub m = apply_monomial(sub, ParamPoly(1), f.mono);
  r.num = r.num.scaled(m.c);
  for (int j = 0; j < 4; ++j) r.mono[j] = m.v[j] - sh[j];
  for (const auto& [key, fl] : f.factors) {
    Exps fs;
    const MultiPoly img = substitute_poly(fl.first, sub, fs);
    for (int j = 0; j < 4; ++j) r.mono[j] += fl.second * fs[j];
    add_factor(r, img, fl.second);
  }
  return r;
}

FactoredRF operator+(const FactoredRF& a, const FactoredRF& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  FactoredRF r;
  MultiPoly na, nb;
  align(a, b, na, nb, r);
  r.num = na + nb;
  return r;
}

FactoredRF operator-(const FactoredRF& a, const FactoredRF& b) {
  FactoredRF nb = b;
  nb.num = -nb.num;
  return a + nb;
}

FactoredRF operator*(const FactoredRF& a, const FactoredRF& b) {
  FactoredRF r = a;
  r.num = a.num * b.num;
  for (int j = 0; j < 4; ++j) r.mono[j] += b.mono[j];
  for (const auto& [key, fl] : b.factors) {
    auto& slot = r.factors[key];
    slot.first = fl.first;
    slot.second += fl.second;
  }
  return r;
}

bool equal(const FactoredRF& a, const FactoredRF& b) {
  FactoredRF shape;
  MultiPoly na, nb;
  align(a, b, na, nb, shape);
  return na == nb;
}

FactoredRF act_reflection(const RootSystem& rs, const FactoredRF& f, int i) {
  const Substitution s1 = sigma_sub(rs, i);
  const Substitution s2 = compose(eps_sub(rs, i), s1);
  const FactoredRF f1 = substitute(f, s1);
  const FactoredRF f2 = substitute(f, s2);
  // ((A+B) f1 + (A-B) f2) / 2 with A +- B = (q z_i - 1 +- s (1 - z_i)) / (q z_i (1 - z_i)).
  Exps ei = {0, 0, 0, 0};
  ei[i] = 1;
  const MultiPoly zi = MultiPoly::monomial(ParamPoly(1), ei);
  const MultiPoly one(ParamPoly(1));
  const MultiPoly base = zi.scaled(ParamPoly::q_power(1)) - one;
  const MultiPoly sm = (one - zi).scaled(ParamPoly::s_power(1));
  FactoredRF cp, cm;
  cp.num = base + sm;
  cm.num = base - sm;
  FactoredRF r = cp * f1 + cm * f2;
  r.num = r.num.scaled(ParamPoly::monomial(Q(1, 2), -2));
  r.mono[i] -= 1;
  add_factor(r, one - zi, 1);
  return r;
}

RationalFunction act_reflection(const RootSystem& rs, const RationalFunction& f, int i) {
  return act_reflection(rs, FactoredRF::from_rational(f), i).to_rational();
}

FactoredRF delta_at(const RootSystem& rs, const Substitution& sub) {
  FactoredRF d = FactoredRF::constant(ParamPoly(1));
  for (const auto& a : rs.positive_roots) {
    Exps e = {0, 0, 0, 0};
    for (int j = 0; j < rs.rank; ++j) e[j] = 2 * a[j];
    const MonomialSub m = apply_monomial(sub, ParamPoly::q_power(RootSystem::height(a)), e);
    // 1 - c z^v with signed v: z^{-neg(v)} (z^{neg(v)} - c z^{pos(v)}).
    Exps pos{0, 0, 0, 0}, neg{0, 0, 0, 0};
    for (int j = 0; j < 4; ++j) (m.v[j] >= 0 ? pos[j] : neg[j]) = std::abs(m.v[j]);
    const MultiPoly p = MultiPoly::monomial(ParamPoly(1), neg) - MultiPoly::monomial(m.c, pos);
    // d *= p z^{-neg}: p enters the numerator.
    d.num = d.num * p;
    for (int j = 0; j < 4; ++j) d.mono[j] -= neg[j];
  }
  return d;
}

FactoredRF cg_average_symbolic(const RootSystem& rs) {
  const auto W = weyl_group(rs);
  FactoredRF acc;
  for (const auto& w : W) {
    FactoredRF act = FactoredRF::constant(ParamPoly(1));
    Substitution sub(4);
    for (int j = 0; j < 4; ++j) {
      sub[j].c = ParamPoly(1);
      sub[j].v = {0, 0, 0, 0};
      sub[j].v[j] = 1;
    }
    for (int i : w.word) {
      act = act_reflection(rs, act, i);
      sub = compose(sub, sigma_sub(rs, i));
    }
    // act / Delta(^w z): invert the Delta product factor by factor.
    const FactoredRF dw = delta_at(rs, sub);
    FactoredRF term = act;
    for (int j = 0; j < 4; ++j) term.mono[j] -= dw.mono[j];
    // dw.num is a product of binomials; re-split it by rebuilding from the roots.
    for (const auto& a : rs.positive_roots) {
      Exps e = {0, 0, 0, 0};
      for (int j = 0; j < rs.rank; ++j) e[j] = 2 * a[j];
      const MonomialSub m = apply_monomial(sub, ParamPoly::q_power(RootSystem::height(a)), e);
      Exps pos{0, 0, 0, 0}, neg{0, 0, 0, 0};
      for (int j = 0; j < 4; ++j) (m.v[j] >= 0 ? pos[j] : neg[j]) = std::abs(m.v[j]);
      add_factor(term, MultiPoly::monomial(ParamPoly(1), neg) - MultiPoly::monomial(m.c, pos), 1);
    }
    acc = acc + term;
  }
  return acc;
}

MultiPoly derivative(const MultiPoly& p, int var) {
  MultiPoly r;
  for (const auto& [k, c] : p.terms()) {
    Exps e = rings::unpack(k);
    if (e[var] == 0) continue;
    const int n = e[var];
    e[var] -= 1;
    r.add_term(e, c * ParamPoly(static_cast<long>(n)));
  }
  return r;
}

bool check_limiting_condition(const RootSystem& rs, const RationalFunction& f, int i) {
  auto kill = [&](const MultiPoly& p) {
    MultiPoly r;
    for (const auto& [k, c] : p.terms()) {
      const Exps e = rings::unpack(k);
      bool zero = false;
      for (int j = 0; j < rs.rank; ++j)
        if (rs.adjacent(i, j) && e[j] > 0) zero = true;
      if (!zero) r.add_term(e, c);
    }
    return r;
  };
  MultiPoly den = kill(f.den_poly);
  for (const auto& g : f.factors) {
    bool vanishes = false;
    for (int j = 0; j < rs.rank; ++j)
      if (rs.adjacent(i, j) && g.e[j] > 0) vanishes = true;
    if (!vanishes) den = den * (MultiPoly(ParamPoly(1)) - MultiPoly::monomial(g.c, g.e));
  }
  if (den.is_zero()) throw ring_error("limiting condition: denominator vanishes identically");
  Exps ei = {0, 0, 0, 0};
  ei[i] = 1;
  const MultiPoly num = kill(f.num) * (MultiPoly(ParamPoly(1)) - MultiPoly::monomial(ParamPoly(1), ei));
  return (derivative(num, i) * den - num * derivative(den, i)).is_zero();
}

PointFn point_fn(const RationalFunction& f) {
  return [f](const Q& s, const Vec& z) {
    std::array<Q, 4> zz{};
    for (std::size_t j = 0; j < z.size() && j < 4; ++j) zz[j] = z[j];
    return f.eval(s, zz);
  };
}

namespace {

std::string witness_of(const Q& s, const Vec& z) {
  std::ostringstream os;
  os << "s=" << rings::q_to_string(s);
  for (std::size_t j = 0; j < z.size(); ++j) os << " z" << (j + 1) << "=" << rings::q_to_string(z[j]);
  return os.str();
}

template <class Cmp>
rings::EqualityResult randomized(int rank, const VerifyOptions& opt, Cmp cmp) {
  rings::EqualityResult res;
  res.mode = "randomized";
  res.seed = opt.seed;
  std::mt19937_64 rng(opt.seed);
  int valid = 0, attempts = 0;
  while (valid < opt.trials && attempts < 10 * opt.trials) {
    ++attempts;
    const rings::SamplePoint p = rings::random_point(rng);
    const Vec z(p.z.begin(), p.z.begin() + rank);
    int ok;
    try {
      ok = cmp(p.s, z) ? 1 : 0;
    } catch (const ring_error&) {
      continue;
    }
    ++valid;
    if (!ok) {
      res.trials = valid;
      res.witness = witness_of(p.s, z);
      return res;
    }
  }
  res.trials = valid;
  res.inconclusive = valid < opt.trials;
  res.equal = !res.inconclusive;
  return res;
}

}  // namespace

rings::EqualityResult verify_against_explicit(const RationalFunction& explicit_f, const VerifyOptions& opt) {
  const RootSystem rs = build_root_system(RootType::D4);
  const auto W = weyl_group(rs);
  const PointFn f = point_fn(explicit_f);
  return randomized(rs.rank, opt, [&](const Q& s, const Vec& z) {
    const Q fx = f(s, z);
    return cg_average_at(rs, W, s, z) == fx;
  });
}

rings::EqualityResult check_invariance(const RootSystem& rs, const PointFn& f, const VerifyOptions& opt) {
  return randomized(rs.rank, opt, [&](const Q& s, const Vec& z) {
    const Q fx = f(s, z);
    for (int i = 0; i < rs.rank; ++i)
      if (act_reflection_at(rs, f, i, s, z) != fx) return false;
    return true;
  });
}

}  // namespace mdsforge::cg
