#include "mdsforge/mds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "mdsforge/asymptotics.hpp"
#include "mdsforge/parallel.hpp"

namespace mdsforge::mds {

using rings::real_t;
using rings::RationalFunction;

namespace {

using FactorIds = std::vector<std::pair<int, int>>;

bool contains(const std::vector<int>& sorted, int id) { return std::binary_search(sorted.begin(), sorted.end(), id); }

bool coprime_to(const FactorIds& f, const std::vector<int>& bad) {
  for (const auto& [id, e] : f)
    if (contains(bad, id)) return false;
  return true;
}

// Every prime of h appears with exponent >= 2.
bool sieve_ok(const FactorIds& f, const std::vector<int>& h_ids) {
  for (int id : h_ids) {
    bool ok = false;
    for (const auto& [pid, e] : f)
      if (pid == id) ok = e >= 2;
    if (!ok) return false;
  }
  return true;
}

Poly odd_part(const FieldSpec& F, const fq::FactorTable& T, const FactorIds& f) {
  Poly r = fq::constant(1);
  for (const auto& [id, e] : f)
    if (e & 1) r = fq::mul(F, r, T.primes()[id]);
  return r;
}

struct MonicRef {
  int deg = 0;
  unsigned long long idx = 0;
  FactorIds f;
};

// Monics of degree 0..n_max coprime to the listed primes, grouped by degree.
std::vector<std::vector<MonicRef>> coprime_monics(const Engine& E, int n_max, const std::vector<int>& bad) {
  std::vector<std::vector<MonicRef>> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const unsigned long long cnt = fq::ipow(E.q(), n);
    for (unsigned long long i = 0; i < cnt; ++i) {
      FactorIds f = E.table().factor_ids(n, i);
      if (coprime_to(f, bad)) out[n].push_back({n, i, std::move(f)});
    }
  }
  return out;
}

std::vector<MonicRef> flatten(const std::vector<std::vector<MonicRef>>& g) {
  std::vector<MonicRef> out;
  for (const auto& v : g) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Q quad_to_rational(const QuadValue& v, const char* what) {
  if (v.b() != 0) throw mds_error(std::string(what) + ": value is not rational");
  return v.a();
}

Q param_at(const rings::ParamPoly& c, long q, int deg) {
  const QuadValue one(q, 1), s = QuadValue::sqrt_q(q);
  return quad_to_rational(c.subs_power(deg).eval_in<QuadValue>(one, s, s.inverse()), "coefficient at q^deg");
}

// Dense truncated series in (u1, u2, u3) with total degree <= k.
class Cube {
 public:
  explicit Cube(int k) : k_(k), v_((k + 1) * (k + 1) * (k + 1)) {}
  Q& at(int a, int b, int c) { return v_[(a * (k_ + 1) + b) * (k_ + 1) + c]; }
  const Q& at(int a, int b, int c) const { return v_[(a * (k_ + 1) + b) * (k_ + 1) + c]; }
  int k() const { return k_; }

 private:
  int k_;
  std::vector<Q> v_;
};

struct CubeTerm {
  int e1, e2, e3;
  Q c;
};

Cube cube_mul_sparse(const Cube& a, const std::vector<CubeTerm>& b) {
  const int K = a.k();
  Cube r(K);
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j)
      for (int l = 0; i + j + l <= K; ++l) {
        const Q& x = a.at(i, j, l);
        if (x == 0) continue;
        for (const auto& t : b)
          if (i + j + l + t.e1 + t.e2 + t.e3 <= K) r.at(i + t.e1, j + t.e2, l + t.e3) += x * t.c;
      }
  return r;
}

template <class R>
std::vector<R> series_mul(const std::vector<R>& a, const std::vector<R>& b, int n_max, const R& zero) {
  std::vector<R> r(n_max + 1, zero);
  for (int i = 0; i <= n_max && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= n_max && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// a * (1 - c x^k), truncated.
std::vector<Q> times_one_minus(const std::vector<Q>& a, const Q& c, int k) {
  std::vector<Q> r = a;
  for (int i = static_cast<int>(a.size()) - 1; i >= k; --i) r[i] -= c * a[i - k];
  return r;
}

struct Twisted {
  Poly c1, c2, c3;
  std::vector<int> c_ids, c1_ids, c2_ids, c3_ids, c1c3_ids, c2c3_ids;
};

Twisted twisted(const Engine& E, const TwistSpec& t) {
  validate(E.field(), t);
  Twisted w{t.c1, t.c2, t.c3, {}, E.prime_ids(t.c1), E.prime_ids(t.c2), E.prime_ids(t.c3), {}, {}};
  auto merge = [](std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };
  w.c1c3_ids = merge(w.c1_ids, w.c3_ids);
  w.c2c3_ids = merge(w.c2_ids, w.c3_ids);
  w.c_ids = merge(w.c1c3_ids, w.c2_ids);
  return w;
}

// (pid, exponents of m1, m2, m3, d) merged over the four factor lists.
struct PrimeExps {
  int pid;
  std::array<int, 4> e;
};

void merge_into(std::vector<PrimeExps>& acc, const FactorIds& f, int slot) {
  for (const auto& [id, e] : f) {
    auto it = std::find_if(acc.begin(), acc.end(), [id = id](const PrimeExps& x) { return x.pid == id; });
    if (it == acc.end()) {
      acc.push_back({id, {0, 0, 0, 0}});
      acc.back().e[slot] = e;
    } else {
      it->e[slot] = e;
    }
  }
}

FormalTable vers0(Engine& E, const TwistSpec& t, const FormalShape& sh, const Poly* sieve_h) {
  const Twisted w = twisted(E, t);
  const int K = sh.k_max, N = sh.n_max, T = sh.total_max;
  E.ensure_a(std::max(1, T));
  const auto mlist = coprime_monics(E, K, w.c_ids);
  const auto dlist = flatten(coprime_monics(E, N, w.c_ids));
  const std::vector<int> h_ids = sieve_h ? E.prime_ids(*sieve_h) : std::vector<int>{};
  const Poly a2c2 = E.with_unit(w.c2, t.a2_theta);
  const int threads = E.threads();
  std::vector<FormalTable> part(resolve_threads(threads), FormalTable(K, N, T));
  const Engine& cE = E;
  parallel_chunks(dlist.size(), threads, [&](std::size_t b, std::size_t e, int wk) {
    FormalTable& out = part[wk];
    for (std::size_t i = b; i < e; ++i) {
      const MonicRef& d = dlist[i];
      if (sieve_h && !sieve_ok(d.f, h_ids)) continue;
      const int n = d.deg;
      const int kcap = std::min(K, T - n);
      if (kcap < 0) continue;
      const Poly d0 = odd_part(cE.field(), cE.table(), d.f);
      std::vector<int> d0_ids;
      for (const auto& [id, ex] : d.f)
        if (ex & 1) d0_ids.push_back(id);
      const int chi2 = fq::kronecker(cE.field(), a2c2, d0);
      if (chi2 == 0) continue;
      const Poly D1 = cE.with_unit(fq::mul(cE.field(), w.c1, d0), t.a1_theta);
      const std::vector<int> chi = cE.chars().prime_characters(D1, std::max(1, kcap));
      // a(k, 0) = 1, so m enters only through its character value and its exponents at the primes of d.
      std::vector<std::map<std::vector<int>, long>> groups(kcap + 1);
      for (int k = 0; k <= kcap; ++k)
        for (const auto& m : mlist[k]) {
          int sign = 1;
          std::vector<int> prof(d.f.size(), 0);
          for (const auto& [id, ex] : m.f) {
            for (std::size_t j = 0; j < d.f.size(); ++j)
              if (d.f[j].first == id) prof[j] = ex;
            if (contains(d0_ids, id)) continue;  // hatted part: coprime to d0
            if (chi[id] == 0) sign = 0;
            if ((ex & 1) && chi[id] < 0) sign = -sign;
          }
          if (sign != 0) groups[k][prof] += sign;
        }
      for (int k1 = 0; k1 <= kcap; ++k1)
        for (int k2 = 0; k1 + k2 <= kcap; ++k2)
          for (int k3 = 0; k1 + k2 + k3 <= kcap; ++k3) {
            Q acc = 0;
            for (const auto& [p1, n1] : groups[k1])
              for (const auto& [p2, n2] : groups[k2])
                for (const auto& [p3, n3] : groups[k3]) {
                  if (n1 == 0 || n2 == 0 || n3 == 0) continue;
                  Q A = n1 * n2;
                  A *= n3;
                  for (std::size_t j = 0; j < d.f.size() && A != 0; ++j)
                    A *= cE.a_value(p1[j], p2[j], p3[j], d.f[j].second, cE.table().prime_degree(d.f[j].first));
                  acc += A;
                }
            if (acc != 0) out.at(k1, k2, k3, n) += acc * chi2;
          }
    }
  });
  FormalTable r(K, N, T);
  for (const auto& p : part) r += p;
  return r;
}

// P_l(chi u^deg) terms in the u-variables, truncated to total degree K.
class PTerms {
 public:
  PTerms(Engine& E, int l_max, int deg_max, int K) : l_max_(l_max), deg_max_(deg_max) {
    E.pq().ensure_P(std::max(1, l_max));
    v_.resize((l_max + 1) * (deg_max + 1) * 2);
    for (int l = 0; l <= l_max; ++l)
      for (int dg = 1; dg <= deg_max; ++dg)
        for (int s = 0; s < 2; ++s) {
          auto& out = v_[idx(l, dg, s ? -1 : 1)];
          for (const auto& [key, c] : E.pq().P(l).terms()) {
            const rings::Exps ex = rings::unpack(key);
            const int tot = (ex[0] + ex[1] + ex[2]) * dg;
            if (tot > K) continue;
            Q v = param_at(c, E.q(), dg);
            if (s && ((ex[0] + ex[1] + ex[2]) & 1)) v = -v;
            out.push_back({ex[0] * dg, ex[1] * dg, ex[2] * dg, v});
          }
        }
  }
  const std::vector<CubeTerm>& at(int l, int deg, int sign) const {
    if (l > l_max_ || deg > deg_max_) throw mds_error("P_l term table too small");
    return v_[idx(l, deg, sign)];
  }

 private:
  std::size_t idx(int l, int deg, int sign) const { return (l * (deg_max_ + 1) + deg) * 2 + (sign < 0 ? 1 : 0); }
  int l_max_, deg_max_;
  std::vector<std::vector<CubeTerm>> v_;
};

FormalTable vers1(Engine& E, const TwistSpec& t, const FormalShape& sh) {
  const Twisted w = twisted(E, t);
  const int K = sh.k_max, N = sh.n_max, T = sh.total_max;
  const auto dlist = flatten(coprime_monics(E, N, w.c_ids));
  const PTerms pt(E, N, N, K);
  const Poly a2c2 = E.with_unit(w.c2, t.a2_theta);
  const int threads = E.threads();
  std::vector<FormalTable> part(resolve_threads(threads), FormalTable(K, N, T));
  const Engine& cE = E;
  parallel_chunks(dlist.size(), threads, [&](std::size_t b, std::size_t e, int wk) {
    FormalTable& out = part[wk];
    for (std::size_t i = b; i < e; ++i) {
      const MonicRef& d = dlist[i];
      const int n = d.deg;
      const int kcap = std::min(K, T - n);
      if (kcap < 0) continue;
      const Poly d0 = odd_part(cE.field(), cE.table(), d.f);
      const int chi2 = fq::kronecker(cE.field(), a2c2, d0);
      if (chi2 == 0) continue;
      const Poly D1 = cE.with_unit(fq::mul(cE.field(), w.c1, d0), t.a1_theta);
      const std::vector<long long> s = cE.chars().sums(D1, kcap);
      std::vector<Q> l1;
      for (long long v : s) l1.emplace_back(static_cast<long>(v));
      for (int id : w.c2c3_ids) {
        const int dg = cE.table().prime_degree(id);
        if (dg <= kcap) l1 = times_one_minus(l1, fq::kronecker(cE.field(), D1, cE.table().primes()[id]), dg);
      }
      Cube c(K);
      for (int a = 0; a <= kcap; ++a)
        for (int bb = 0; a + bb <= kcap; ++bb)
          for (int cc = 0; a + bb + cc <= kcap; ++cc) c.at(a, bb, cc) = l1[a] * l1[bb] * l1[cc];
      for (const auto& [id, l] : d.f) {
        const int dg = cE.table().prime_degree(id);
        const int sign = (l & 1) ? 1 : fq::kronecker(cE.field(), D1, cE.table().primes()[id]);
        c = cube_mul_sparse(c, pt.at(l, dg, sign));
      }
      for (int a = 0; a <= kcap; ++a)
        for (int bb = 0; a + bb <= kcap; ++bb)
          for (int cc = 0; a + bb + cc <= kcap; ++cc)
            if (c.at(a, bb, cc) != 0) out.at(a, bb, cc, n) += c.at(a, bb, cc) * chi2;
    }
  });
  FormalTable r(K, N, T);
  for (const auto& p : part) r += p;
  return r;
}

FormalTable vers2(Engine& E, const TwistSpec& t, const FormalShape& sh) {
  const Twisted w = twisted(E, t);
  const int K = sh.k_max, N = sh.n_max, T = sh.total_max;
  const auto mlist = coprime_monics(E, K, w.c_ids);
  E.pq().ensure_Q(std::max(1, K));
  // Q_k(z4) coefficients at q^deg, indexed by (k1, k2, k3, deg).
  std::map<std::array<int, 4>, std::vector<Q>> qcoef;
  for (int a = 0; a <= K; ++a)
    for (int b = 0; a + b <= K; ++b)
      for (int c = 0; a + b + c <= K; ++c)
        for (int dg = 1; dg <= std::max(1, K); ++dg) {
          const rings::MultiPoly& qk = E.pq().Qk(a, b, c);
          std::vector<Q> v(qk.degree_in(3) + 1);
          for (const auto& [key, cf] : qk.terms()) v[rings::unpack(key)[3]] = param_at(cf, E.q(), dg);
          qcoef[{a, b, c, dg}] = v;
        }
  struct Triple {
    const MonicRef *m1, *m2, *m3;
  };
  std::vector<Triple> triples;
  for (int k1 = 0; k1 <= K; ++k1)
    for (int k2 = 0; k1 + k2 <= K; ++k2)
      for (int k3 = 0; k1 + k2 + k3 <= K; ++k3)
        for (const auto& m1 : mlist[k1])
          for (const auto& m2 : mlist[k2])
            for (const auto& m3 : mlist[k3]) triples.push_back({&m1, &m2, &m3});
  const Poly a1c1 = E.with_unit(w.c1, t.a1_theta);
  const int threads = E.threads();
  std::vector<FormalTable> part(resolve_threads(threads), FormalTable(K, N, T));
  struct N0Data {
    int chi1 = 0;
    Poly D2;
    std::vector<Q> base;
  };
  std::vector<std::map<std::vector<fq::elem>, N0Data>> cache(resolve_threads(threads));
  const Engine& cE = E;
  parallel_chunks(triples.size(), threads, [&](std::size_t b, std::size_t e, int wk) {
    FormalTable& out = part[wk];
    for (std::size_t i = b; i < e; ++i) {
      const Triple& tr = triples[i];
      const int k1 = tr.m1->deg, k2 = tr.m2->deg, k3 = tr.m3->deg;
      const int ncap = std::min(N, T - k1 - k2 - k3);
      if (ncap < 0) continue;
      std::vector<PrimeExps> pe;
      merge_into(pe, tr.m1->f, 0);
      merge_into(pe, tr.m2->f, 1);
      merge_into(pe, tr.m3->f, 2);
      Poly n0 = fq::constant(1);
      for (const auto& x : pe)
        if ((x.e[0] + x.e[1] + x.e[2]) & 1) n0 = fq::mul(cE.field(), n0, cE.table().primes()[x.pid]);
      // The L-factor depends on the triple only through n0.
      auto hit = cache[wk].find(n0.c);
      if (hit == cache[wk].end()) {
        N0Data nd;
        nd.chi1 = fq::kronecker(cE.field(), a1c1, n0);
        nd.D2 = cE.with_unit(fq::mul(cE.field(), w.c2, n0), t.a2_theta);
        if (nd.chi1 != 0) {
          for (long long v : cE.chars().sums(nd.D2, N)) nd.base.emplace_back(static_cast<long>(v));
          for (int id : w.c1c3_ids) {
            const int dg = cE.table().prime_degree(id);
            if (dg <= N) nd.base = times_one_minus(nd.base, fq::kronecker(cE.field(), nd.D2, cE.table().primes()[id]), dg);
          }
        }
        hit = cache[wk].emplace(n0.c, std::move(nd)).first;
      }
      const int chi1 = hit->second.chi1;
      if (chi1 == 0) continue;
      const Poly& D2 = hit->second.D2;
      std::vector<Q> ser(hit->second.base.begin(), hit->second.base.begin() + ncap + 1);
      for (const auto& x : pe) {
        const int dg = cE.table().prime_degree(x.pid);
        const int tot = x.e[0] + x.e[1] + x.e[2];
        const int sign = (tot & 1) ? 1 : fq::kronecker(cE.field(), D2, cE.table().primes()[x.pid]);
        const std::vector<Q>& qc = qcoef.at({x.e[0], x.e[1], x.e[2], dg});
        std::vector<Q> loc(ncap + 1);
        for (std::size_t j = 0; j < qc.size(); ++j) {
          const std::size_t pos = j * dg;
          if (pos > static_cast<std::size_t>(ncap)) break;
          loc[pos] += (sign < 0 && (j & 1)) ? Q(-qc[j]) : qc[j];
        }
        ser = series_mul(ser, loc, ncap, Q(0));
      }
      for (int n = 0; n <= ncap; ++n)
        if (ser[n] != 0) out.at(k1, k2, k3, n) += ser[n] * chi1;
    }
  });
  FormalTable r(K, N, T);
  for (const auto& p : part) r += p;
  return r;
}

FormalShape normalized(const FormalShape& s) {
  FormalShape r = s;
  if (r.k_max < 0 || r.n_max < 0) throw mds_error("formal shape: negative bound");
  if (r.total_max < 0) r.total_max = r.k_max + r.n_max;
  return r;
}

// t^n coefficients of a num/den in one variable over R.
template <class R>
std::vector<R> univariate_series(const std::vector<R>& num, const std::vector<R>& den, int n_max, const R& zero) {
  const R inv0 = den.at(0).inverse();
  std::vector<R> out(n_max + 1, zero);
  for (int j = 0; j <= n_max; ++j) {
    R acc = j < static_cast<int>(num.size()) ? num[j] : zero;
    for (int i = 1; i <= j && i < static_cast<int>(den.size()); ++i) acc -= den[i] * out[j - i];
    out[j] = acc * inv0;
  }
  return out;
}

}  // namespace

// ---- TwistSpec ----

Poly twist_modulus(const FieldSpec& F, const TwistSpec& t) { return fq::mul(F, fq::mul(F, t.c1, t.c2), t.c3); }

void validate(const FieldSpec& F, const TwistSpec& t) {
  for (const Poly* p : {&t.c1, &t.c2, &t.c3})
    if (!p->is_monic()) throw mds_error("twist moduli must be monic");
  if (!fq::is_squarefree(F, twist_modulus(F, t))) throw mds_error("c1 c2 c3 must be square-free");
}

std::vector<TwistSpec> enumerate_twists(const FieldSpec& F, int max_deg) {
  std::vector<TwistSpec> out;
  for (int deg = 0; deg <= max_deg; ++deg)
    fq::for_each_monic(F, deg, fq::MonicFilter::squarefree, [&](const Poly& c) {
      std::vector<Poly> primes;
      for (const auto& [p, e] : fq::factor(F, c).factors) primes.push_back(p);
      long total = 1;
      for (std::size_t i = 0; i < primes.size(); ++i) total *= 3;
      for (long code = 0; code < total; ++code) {
        TwistSpec base;
        long r = code;
        for (const Poly& p : primes) {
          Poly& slot = r % 3 == 0 ? base.c1 : r % 3 == 1 ? base.c2 : base.c3;
          slot = fq::mul(F, slot, p);
          r /= 3;
        }
        for (int a = 0; a < 4; ++a) {
          TwistSpec t = base;
          t.a1_theta = a & 1;
          t.a2_theta = a & 2;
          out.push_back(t);
        }
      }
    });
  return out;
}

std::string describe(const FieldSpec& F, const TwistSpec& t) {
  std::ostringstream os;
  os << "c1=" << fq::to_string(F, t.c1) << " c2=" << fq::to_string(F, t.c2) << " c3=" << fq::to_string(F, t.c3)
     << " a1=" << (t.a1_theta ? "theta0" : "1") << " a2=" << (t.a2_theta ? "theta0" : "1");
  return os.str();
}

std::string route_name(Route r) {
  switch (r) {
    case Route::vers0: return "vers0";
    case Route::vers1: return "vers1";
    case Route::vers2: return "vers2";
  }
  return "?";
}

// ---- FormalTable ----

FormalTable::FormalTable(int k_max, int n_max, int total_max)
    : k_max_(k_max), n_max_(n_max), total_max_(total_max),
      v_(static_cast<std::size_t>(k_max + 1) * (k_max + 1) * (k_max + 1) * (n_max + 1)) {}

bool FormalTable::in_range(int k1, int k2, int k3, int n) const {
  if (k1 < 0 || k2 < 0 || k3 < 0 || n < 0) return false;
  const int k = k1 + k2 + k3;
  return k <= k_max_ && n <= n_max_ && k + n <= total_max_;
}

std::size_t FormalTable::index(int k1, int k2, int k3, int n) const {
  if (!in_range(k1, k2, k3, n)) throw mds_error("formal bucket out of range");
  return ((static_cast<std::size_t>(k1) * (k_max_ + 1) + k2) * (k_max_ + 1) + k3) * (n_max_ + 1) + n;
}

FormalTable& FormalTable::operator+=(const FormalTable& o) {
  if (o.k_max_ != k_max_ || o.n_max_ != n_max_ || o.total_max_ != total_max_)
    throw mds_error("formal tables of different shapes");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

FormalTable& FormalTable::scale(const Q& c) {
  for (auto& x : v_) x *= c;
  return *this;
}

std::string FormalTable::first_difference(const FormalTable& o) const {
  if (o.k_max_ != k_max_ || o.n_max_ != n_max_ || o.total_max_ != total_max_) return "shape mismatch";
  for (int a = 0; a <= k_max_; ++a)
    for (int b = 0; a + b <= k_max_; ++b)
      for (int c = 0; a + b + c <= k_max_; ++c)
        for (int n = 0; n <= n_max_ && a + b + c + n <= total_max_; ++n)
          if (at(a, b, c, n) != o.at(a, b, c, n)) {
            std::ostringstream os;
            os << "bucket (" << a << "," << b << "," << c << "," << n << "): " << rings::q_to_string(at(a, b, c, n))
               << " vs " << rings::q_to_string(o.at(a, b, c, n));
            return os.str();
          }
  return "";
}

int FormalTable::bucket_count() const {
  int r = 0;
  for (int a = 0; a <= k_max_; ++a)
    for (int b = 0; a + b <= k_max_; ++b)
      for (int c = 0; a + b + c <= k_max_; ++c)
        for (int n = 0; n <= n_max_ && a + b + c + n <= total_max_; ++n) ++r;
  return r;
}

// ---- Engine ----

Engine::Engine(const FieldSpec& F, int max_deg, int threads)
    : F_(F), max_deg_(max_deg), threads_(resolve_threads(threads)),
      chars_(std::make_unique<lfun::CharSumEngine>(F, max_deg)) {
  if (max_deg < 1) throw mds_error("engine degree bound must be positive");
}

void Engine::ensure_a(int total) {
  if (total <= a_total_) return;
  const d4::ACoeffTable tab(total);
  const int D = total + 1;
  a_kdim_ = D;
  a_ldim_ = D;
  a_ddim_ = max_deg_;
  a_cache_.assign(static_cast<std::size_t>(D) * D * D * D * max_deg_, Q(0));
  for (int k1 = 0; k1 <= total; ++k1)
    for (int k2 = 0; k1 + k2 <= total; ++k2)
      for (int k3 = 0; k1 + k2 + k3 <= total; ++k3)
        for (int l = 0; k1 + k2 + k3 + l <= total; ++l) {
          const rings::ParamPoly c = tab.a(k1, k2, k3, l);
          if (c.is_zero()) continue;
          for (int dg = 1; dg <= max_deg_; ++dg)
            a_cache_[(((static_cast<std::size_t>(k1) * D + k2) * D + k3) * D + l) * max_deg_ + (dg - 1)] =
                param_at(c, F_.q, dg);
        }
  a_total_ = total;
}

const Q& Engine::a_value(int k1, int k2, int k3, int l, int deg) const {
  if (k1 + k2 + k3 + l > a_total_) throw mds_error("a-coefficient beyond the prepared total degree");
  if (deg < 1 || deg > max_deg_) throw mds_error("a-coefficient degree out of range");
  const int D = a_kdim_;
  return a_cache_[(((static_cast<std::size_t>(k1) * D + k2) * D + k3) * D + l) * max_deg_ + (deg - 1)];
}

void Engine::ensure_center(int l_max, int k_max) {
  if (l_max <= center_l_ && k_max <= center_k_) return;
  l_max = std::max(l_max, center_l_);
  k_max = std::max(k_max, center_k_);
  pq_.ensure_P(std::max(1, l_max));
  const QuadValue one(F_.q, 1), s = QuadValue::sqrt_q(F_.q), si = s.inverse();
  center_.assign(static_cast<std::size_t>(l_max + 1) * k_max * 2, QuadValue(F_.q));
  for (int l = 0; l <= l_max; ++l)
    for (int sg = 0; sg < 2; ++sg) {
      const rings::ParamPoly pc = d4::p_at_center(pq_.P(l), sg ? -1 : 1);
      for (int k = 1; k <= k_max; ++k)
        center_[(static_cast<std::size_t>(l) * k_max + (k - 1)) * 2 + sg] =
            pc.subs_power(k).eval_in<QuadValue>(one, s, si);
    }
  center_l_ = l_max;
  center_k_ = k_max;
}

const QuadValue& Engine::p_center(int l, int k, int sign) const {
  if (l < 0 || l > center_l_ || k < 1 || k > center_k_) throw mds_error("center value outside the prepared range");
  return center_[(static_cast<std::size_t>(l) * center_k_ + (k - 1)) * 2 + (sign < 0 ? 1 : 0)];
}

Poly Engine::with_unit(const Poly& m, bool theta) const {
  return theta ? fq::scale(F_, m, F_.nonsquare_unit) : m;
}

std::vector<int> Engine::prime_ids(const Poly& m) const {
  if (m.deg() > max_deg_) throw mds_error("modulus degree beyond the engine table");
  std::vector<int> out;
  if (m.deg() <= 0) return out;
  for (const auto& [id, e] : table().factor_ids(m.deg(), fq::monic_index(F_, fq::make_monic(F_, m))))
    out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

// ---- formal series ----

FormalTable formal_coefficients(Engine& E, const TwistSpec& t, Route r, const FormalShape& shape,
                                const Poly* sieve_h) {
  const FormalShape sh = normalized(shape);
  if (sh.k_max > E.max_deg() || sh.n_max > E.max_deg()) throw mds_error("formal shape exceeds the engine degree");
  if (sieve_h && r != Route::vers0) throw mds_error("the sieve filter is implemented on vers0 only");
  switch (r) {
    case Route::vers0: return vers0(E, t, sh, sieve_h);
    case Route::vers1: return vers1(E, t, sh);
    case Route::vers2: return vers2(E, t, sh);
  }
  throw mds_error("unknown route");
}

RouteReport check_triple_route(Engine& E, const TwistSpec& t, const FormalShape& shape) {
  RouteReport rep;
  const FormalTable v0 = formal_coefficients(E, t, Route::vers0, shape);
  const FormalTable v1 = formal_coefficients(E, t, Route::vers1, shape);
  const FormalTable v2 = formal_coefficients(E, t, Route::vers2, shape);
  rep.buckets = v0.bucket_count();
  const std::string d01 = v0.first_difference(v1), d12 = v1.first_difference(v2);
  if (!d01.empty()) {
    rep.pass = false;
    rep.detail = "vers0 vs vers1 " + d01;
  } else if (!d12.empty()) {
    rep.pass = false;
    rep.detail = "vers1 vs vers2 " + d12;
  }
  return rep;
}

FormalTable explicit_formal(long q, const FormalShape& shape) {
  const FormalShape sh = normalized(shape);
  const rings::TruncSeries s = rings::expand(d4::explicit_Z(), {1, 1, 1, 1}, sh.total_max);
  FormalTable r(sh.k_max, sh.n_max, sh.total_max);
  const QuadValue one(q, 1), sq = QuadValue::sqrt_q(q);
  for (const auto& [key, c] : s.terms.terms()) {
    const rings::Exps e = rings::unpack(key);
    if (!r.in_range(e[0], e[1], e[2], e[3])) continue;
    r.at(e[0], e[1], e[2], e[3]) = quad_to_rational(c.eval_in<QuadValue>(one, sq, sq.inverse()), "explicit bucket");
  }
  return r;
}

// ---- central series ----

SeriesTable zc_coefficients(Engine& E, const TwistSpec& t, int n_max, const Poly* sieve_h) {
  const Twisted w = twisted(E, t);
  if (sieve_h && (t.a1_theta || w.c_ids.size())) throw mds_error("sieved series need the trivial twist with a1 = 1");
  if (n_max < 0) throw mds_error("negative n_max");
  if (n_max > E.max_deg()) throw mds_error("n_max exceeds the engine degree");
  E.ensure_center(std::max(1, n_max), std::max(1, n_max));
  const std::vector<int> h_ids = sieve_h ? E.prime_ids(*sieve_h) : std::vector<int>{};
  const auto dlist = flatten(coprime_monics(E, n_max, w.c_ids));
  const Poly a2c2 = E.with_unit(w.c2, t.a2_theta);
  const long q = E.q();
  const QuadValue zero(q), one(q, 1), si = QuadValue::sqrt_q(q).inverse();
  std::vector<QuadValue> xk(E.max_deg() + 1, one);  // |p|^{-1/2}
  for (int k = 1; k <= E.max_deg(); ++k) xk[k] = xk[k - 1] * si;
  const int threads = E.threads();
  std::vector<std::vector<QuadValue>> part(resolve_threads(threads), std::vector<QuadValue>(n_max + 1, zero));
  const Engine& cE = E;
  parallel_chunks(dlist.size(), threads, [&](std::size_t b, std::size_t e, int wk) {
    for (std::size_t i = b; i < e; ++i) {
      const MonicRef& d = dlist[i];
      if (sieve_h && !sieve_ok(d.f, h_ids)) continue;
      const Poly d0 = odd_part(cE.field(), cE.table(), d.f);
      const int chi2 = fq::kronecker(cE.field(), a2c2, d0);
      if (chi2 == 0) continue;
      const Poly D1 = cE.with_unit(fq::mul(cE.field(), w.c1, d0), t.a1_theta);
      const lfun::LPolynomial L = lfun::l_polynomial(cE.field(), D1, lfun::LMode::fe_completed, &cE.chars());
      QuadValue lv = lfun::central_value(L);
      for (int id : w.c2c3_ids) {
        const int chi = fq::kronecker(cE.field(), D1, cE.table().primes()[id]);
        lv *= one - xk[cE.table().prime_degree(id)] * Q(chi);
      }
      QuadValue term = lv * lv * lv * Q(chi2);
      for (const auto& [id, l] : d.f) {
        const int sign = (l & 1) ? 1 : fq::kronecker(cE.field(), D1, cE.table().primes()[id]);
        term *= cE.p_center(l, cE.table().prime_degree(id), sign);
      }
      part[wk][d.deg] += term;
    }
  });
  SeriesTable st;
  st.twist = t;
  st.route = Route::vers1;
  st.n_max = n_max;
  st.coeffs.assign(n_max + 1, zero);
  for (const auto& p : part)
    for (int n = 0; n <= n_max; ++n) st.coeffs[n] += p[n];
  st.note = sieve_h ? "sieved by " + fq::to_string(E.field(), *sieve_h) : "";
  return st;
}

std::vector<QuadValue> explicit_center_series(long q, int n_max) {
  const RationalFunction Z = d4::explicit_Z();
  const QuadValue zero(q), one(q, 1), s = QuadValue::sqrt_q(q), si = s.inverse();
  // z1 = z2 = z3 = s^{-1}; the remaining variable is t = z4.
  auto collapse = [&](const rings::ParamPoly& c, const rings::Exps& e) {
    return c.eval_in<QuadValue>(one, s, si) * si.pow(e[0] + e[1] + e[2]);
  };
  std::vector<QuadValue> num(Z.num.degree_in(3) + 1, zero);
  for (const auto& [key, c] : Z.num.terms()) {
    const rings::Exps e = rings::unpack(key);
    num[e[3]] += collapse(c, e);
  }
  std::vector<QuadValue> den{one};
  for (const auto& [key, c] : Z.den_poly.terms()) {
    if (rings::unpack(key) != rings::Exps{0, 0, 0, 0}) throw mds_error("non-constant residual denominator");
    num = series_mul(num, std::vector<QuadValue>{collapse(c, {0, 0, 0, 0}).inverse()}, static_cast<int>(num.size()) - 1, zero);
  }
  for (const auto& f : Z.factors) {
    std::vector<QuadValue> g(f.e[3] + 1, zero);
    g[0] = one;
    g[f.e[3]] -= collapse(f.c, f.e);
    den = series_mul(den, g, static_cast<int>(den.size() + g.size()) - 2, zero);
  }
  return univariate_series(num, den, n_max, zero);
}

QuadValue pd_polynomial(Engine& E, const Poly& d, const Poly& conductor) {
  const fq::Factorization fac = fq::factor(E.field(), d);
  int lmax = 1, kmax = 1;
  for (const auto& [p, l] : fac.factors) {
    lmax = std::max(lmax, l);
    kmax = std::max(kmax, p.deg());
  }
  E.ensure_center(lmax, kmax);
  QuadValue r(E.q(), 1);
  for (const auto& [p, l] : fac.factors) {
    const int sign = (l & 1) ? 1 : fq::kronecker(E.field(), conductor, p);
    if (sign == 0) throw mds_error("pd_polynomial: conductor shares a prime with the square part of d");
    r *= E.p_center(l, p.deg(), sign);
  }
  return r;
}

// ---- sieve ----

SeriesTable sieved_coefficients(Engine& E, const Poly& h, bool a2_theta, int n_max) {
  TwistSpec t;
  t.a2_theta = a2_theta;
  return zc_coefficients(E, t, n_max, &h);
}

FormalTable sieved_formal(Engine& E, const Poly& h, bool a2_theta, const FormalShape& shape) {
  TwistSpec t;
  t.a2_theta = a2_theta;
  return formal_coefficients(E, t, Route::vers0, shape, &h);
}

FormalTable z0_formal(Engine& E, bool a2_theta, const FormalShape& shape) {
  const FormalShape sh = normalized(shape);
  FormalTable r(sh.k_max, sh.n_max, sh.total_max);
  const Poly unit = E.with_unit(fq::constant(1), a2_theta);
  for (int n = 0; n <= sh.n_max; ++n) {
    const int kcap = std::min(sh.k_max, sh.total_max - n);
    if (kcap < 0) continue;
    fq::for_each_monic(E.field(), n, fq::MonicFilter::squarefree, [&](const Poly& d0) {
      const int chi = fq::kronecker(E.field(), unit, d0);
      const std::vector<long long> s = E.chars().sums(d0, kcap);
      for (int a = 0; a <= kcap; ++a)
        for (int b = 0; a + b <= kcap; ++b)
          for (int c = 0; a + b + c <= kcap; ++c) r.at(a, b, c, n) += Q(static_cast<long>(chi * s[a] * s[b] * s[c]));
    });
  }
  return r;
}

SieveReport check_sieve_identity(Engine& E, bool a2_theta, int total_max) {
  SieveReport rep;
  const FormalShape sh{total_max, total_max, total_max};
  FormalTable acc(total_max, total_max, total_max);
  for (int dh = 0; 2 * dh <= total_max; ++dh)
    fq::for_each_monic(E.field(), dh, fq::MonicFilter::squarefree, [&](const Poly& h) {
      const int mu = fq::mobius(fq::factor(E.field(), h));
      FormalTable part = sieved_formal(E, h, a2_theta, sh);
      acc += part.scale(Q(mu));
      ++rep.moduli;
    });
  const FormalTable z0 = z0_formal(E, a2_theta, sh);
  rep.buckets = z0.bucket_count();
  rep.detail = acc.first_difference(z0);
  rep.pass = rep.detail.empty();
  return rep;
}

// ---- fundamental decomposition ----

FundamentalReport check_fundamental_decomposition(Engine& E, const Poly& h, bool a2_theta, int n_max) {
  FundamentalReport rep;
  const FieldSpec& F = E.field();
  const long q = E.q();
  const QuadValue zero(q), one(q, 1), si = QuadValue::sqrt_q(q).inverse();
  E.ensure_center(n_max + 3, std::max(1, n_max));
  rep.lhs = sieved_coefficients(E, h, a2_theta, n_max).coeffs;
  rep.rhs.assign(n_max + 1, zero);
  const fq::Factorization fac = fq::factor(F, h);
  std::vector<Poly> primes;
  for (const auto& [p, e] : fac.factors) {
    if (e != 1) throw mds_error("h must be square-free");
    primes.push_back(p);
  }
  const int w = static_cast<int>(primes.size());
  // Local z-series F_p(z) z, G^(0), G^(1) for |p| = q^k, from the P_l center values.
  auto local = [&](int k, int kind) {
    std::vector<QuadValue> out(n_max + 1, zero);
    const QuadValue x = si.pow(k);
    const QuadValue am = (one - x).pow(-3), ap = (one + x).pow(-3), half(q, Q(1, 2));
    for (int j = 0; (j + (kind == 0 ? 1 : 0)) * k <= n_max; j += 2) {
      if (kind == 0) {
        out[(j + 1) * k] = E.p_center(j + 3, k, +1);
      } else {
        const QuadValue plus = am * E.p_center(j + 2, k, +1) * half, minus = ap * E.p_center(j + 2, k, -1) * half;
        out[j * k] = kind == 2 ? plus - minus : plus + minus;  // kind 1: G^(0), kind 2: G^(1)
      }
    }
    return out;
  };
  long total = 1;
  for (int i = 0; i < w; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    // Prime i goes to c (0), c'_eps (1, eps = 1) or c'/c'_eps (2, eps = 0).
    Poly c = fq::constant(1), c2 = fq::constant(1), c3 = fq::constant(1);
    std::vector<int> role(w);
    long r = code;
    for (int i = 0; i < w; ++i) {
      role[i] = static_cast<int>(r % 3);
      r /= 3;
      Poly& tgt = role[i] == 0 ? c : role[i] == 1 ? c2 : c3;
      tgt = fq::mul(F, tgt, primes[i]);
    }
    const int shift = 2 * h.deg();
    ++rep.terms;
    if (shift > n_max) continue;
    TwistSpec t;
    t.c1 = c;
    t.c2 = c2;
    t.c3 = c3;
    t.a2_theta = a2_theta;
    std::vector<QuadValue> ser = zc_coefficients(E, t, n_max - shift).coeffs;
    const int chi = fq::kronecker(F, E.with_unit(c2, a2_theta), c);
    for (int i = 0; i < w; ++i) {
      const int kind = role[i] == 0 ? 0 : role[i] == 1 ? 2 : 1;
      ser = series_mul(ser, local(primes[i].deg(), kind), n_max - shift, zero);
    }
    for (int n = 0; n + shift <= n_max; ++n) rep.rhs[n + shift] += ser[n] * Q(chi);
  }
  for (int n = 0; n <= n_max; ++n)
    if (rep.lhs[n] != rep.rhs[n]) {
      rep.pass = false;
      rep.detail = "t^" + std::to_string(n) + ": " + rep.lhs[n].str() + " vs " + rep.rhs[n].str();
      break;
    }
  return rep;
}

// ---- residues ----

QuarticValue qpow4(long q, int n) {
  const int whole = n >= 0 ? n / 4 : -((-n + 3) / 4);
  const int frac = n - 4 * whole;
  QuarticValue b = QuarticValue::basis(q, frac, false);
  mpz_class qq(static_cast<unsigned long>(q)), p;
  mpz_pow_ui(p.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(whole >= 0 ? whole : -whole));
  return b * (whole >= 0 ? Q(p) : Q(1) / Q(p));
}

QuarticValue rho_value(long q, int r) {
  switch (((r % 4) + 4) % 4) {
    case 0: return QuarticValue(q, 1);
    case 1: return QuarticValue::basis(q, 0, true);
    case 2: return QuarticValue(q, -1);
    default: return -QuarticValue::basis(q, 0, true);
  }
}

QuarticValue pole_point(long q, int r) { return rho_value(q, r) * qpow4(q, 3); }

QuarticValue gamma_plus(long q, const QuarticValue& X, bool a_theta) {
  const QuarticValue one(q, 1);
  const Q sg = a_theta ? -1 : 1;
  const Q qinv = Q(1) / Q(q);
  return X * X * qinv * (one - X.inverse() * sg) / (one - X * qinv * sg);
}

QuarticValue gamma_minus(long q, const QuarticValue& X) { return X * qpow4(q, -2); }

QuarticValue u_local(long q, int k, const QuarticValue& X) {
  const QuarticValue one(q, 1), Xk = X.pow(k), qk = qpow4(q, 4 * k), qmk = qpow4(q, -4 * k);
  return Xk * qmk * (one - qk * Xk.pow(-2)) / (one - qmk);
}

QuarticValue v_local(long q, int k, const QuarticValue& X) {
  const QuarticValue u = u_local(q, k, X);
  return QuarticValue(q, 1) + u * u * Q(3);
}

QuarticValue w_local(long q, int k, const QuarticValue& X) {
  const QuarticValue u = u_local(q, k, X), one(q, 1);
  return u * (one * Q(3) + u * u) / (one + u * u * Q(3));
}

namespace {

template <class Fn>
QuarticValue mod_product(long q, const std::vector<int>& degs, const QuarticValue& X, Fn fn) {
  QuarticValue r(q, 1);
  for (int k : degs) r *= fn(q, k, X);
  return r;
}

std::vector<int> prime_degrees(const FieldSpec& F, const Poly& m) {
  std::vector<int> out;
  if (m.deg() <= 0) return out;
  for (const auto& [p, e] : fq::factor(F, m).factors) out.push_back(p.deg());
  return out;
}

// chi_{theta'}(p) = (-1)^{deg p} when theta' = theta0.
int chi_vt(bool vt, int k) { return (vt && (k & 1)) ? -1 : 1; }

QuarticValue gamma_row(long q, bool a2_theta, int r) {
  const QuarticValue one(q, 1);
  const QuarticValue A = (one + qpow4(q, 1) + qpow4(q, 2) * Q(10) + qpow4(q, 3) * Q(7) + qpow4(q, 4) * Q(20) +
                          qpow4(q, 5) * Q(7) + qpow4(q, 6) * Q(10) + qpow4(q, 7) + qpow4(q, 8)) *
                         Q(2);
  const QuarticValue Aneg = (one - qpow4(q, 1) + qpow4(q, 2) * Q(10) - qpow4(q, 3) * Q(7) + qpow4(q, 4) * Q(20) -
                             qpow4(q, 5) * Q(7) + qpow4(q, 6) * Q(10) - qpow4(q, 7) + qpow4(q, 8)) *
                            Q(2);
  const QuarticValue I = QuarticValue::basis(q, 0, true);
  const QuarticValue B = (one - I * qpow4(q, 1) - qpow4(q, 2) * Q(4) + I * qpow4(q, 3) * Q(7) + qpow4(q, 4) * Q(6) -
                          I * qpow4(q, 5) * Q(7) - qpow4(q, 6) * Q(4) + I * qpow4(q, 7) + qpow4(q, 8)) *
                         Q(2);
  // Rows of the table keyed by (a2, rho); theta0 rows are the 1-rows with rho negated.
  const int rr = ((r % 4) + 4) % 4;
  const int key = a2_theta ? (rr + 2) % 4 : rr;
  switch (key) {
    case 0: return A;
    case 2: return Aneg;
    case 1: return B;
    default: return B.complex_conj();
  }
}

// Closed-form residue from degree data: chi = chi_{a2 c2}(c1), local products over the prime degrees.
QuarticValue closed_form_core(long q, const QuarticValue& base, int r, int chi, const std::vector<int>& d1,
                              const std::vector<int>& d2, const std::vector<int>& d3) {
  const bool vt = r & 1;
  const QuarticValue one(q, 1);
  QuarticValue v = base * Q(chi);
  int deg1 = 0, deg2 = 0;
  for (int k : d1) {
    deg1 += k;
    const QuarticValue x = qpow4(q, -2 * k) * Q(chi_vt(vt, k));
    const QuarticValue xx = qpow4(q, -4 * k);
    v *= (one - x).pow(8) * (one + x).pow(2) * (one + x * Q(6) + xx);
  }
  for (int k : d2) {
    deg2 += k;
    const QuarticValue x = qpow4(q, -2 * k) * Q(chi_vt(vt, k));
    const QuarticValue xx = qpow4(q, -4 * k);
    v *= (one - x).pow(8) * (one + x) * (one * Q(3) + x * Q(7) + xx * Q(3));
  }
  for (int k : d3) {
    const QuarticValue x = qpow4(q, -2 * k) * Q(chi_vt(vt, k));
    const QuarticValue xx = qpow4(q, -4 * k);
    v *= (one - x).pow(8) * (one + x) * (one + x * Q(7) + xx * Q(13) + x * xx * Q(7) + xx * xx);
  }
  v *= rho_value(q, r).pow(deg1) * qpow4(q, -deg1) * qpow4(q, -2 * deg2);
  return v;
}

QuarticValue residue_base(long q, bool a2_theta, int r) {
  const QuadValue l = l_half_unit(q, r & 1);
  return gamma_value(q, a2_theta, r) * QuarticValue::from_quad(l.pow(7)) * Q(1, 8);
}

}  // namespace

QuarticValue u_mod(long q, const std::vector<int>& degs, const QuarticValue& X) {
  return mod_product(q, degs, X, u_local);
}
QuarticValue v_mod(long q, const std::vector<int>& degs, const QuarticValue& X) {
  return mod_product(q, degs, X, v_local);
}
QuarticValue w_mod(long q, const std::vector<int>& degs, const QuarticValue& X) {
  return mod_product(q, degs, X, w_local);
}

QuarticValue gamma_value(long q, bool a2_theta, int r) {
  const QuarticValue X = pole_point(q, r);
  const QuarticValue gm = gamma_minus(q, X), gm3 = gm.pow(3);
  const int sg_a2vt = ((a2_theta ? -1 : 1) * ((r & 1) ? -1 : 1));
  QuarticValue acc(q);
  for (int th = 0; th < 2; ++th) {
    const Q sth = th ? -1 : 1;
    acc += (gamma_plus(q, X, a2_theta) + gm * sth) * (gamma_plus(q, X, th).pow(3) + gm3 * Q(sg_a2vt));
  }
  return acc;
}

QuarticValue gamma_tabulated(long q, bool a2_theta, int r) { return gamma_row(q, a2_theta, r); }

std::vector<GammaData> gamma_table(long q) {
  std::vector<GammaData> rows;
  for (int a = 0; a < 2; ++a)
    for (int r = 0; r < 4; ++r) {
      GammaData g;
      g.a2_theta = a;
      g.rho = r;
      g.value = gamma_value(q, a, r);
      g.tabulated = gamma_tabulated(q, a, r);
      g.match = g.value == g.tabulated;
      rows.push_back(g);
    }
  return rows;
}

int distinct_gamma_values(const std::vector<GammaData>& rows) {
  std::vector<QuarticValue> seen;
  for (const auto& r : rows)
    if (std::none_of(seen.begin(), seen.end(), [&](const QuarticValue& v) { return v == r.value; }))
      seen.push_back(r.value);
  return static_cast<int>(seen.size());
}

QuadValue l_half_unit(long q, bool theta) {
  const QuadValue one(q, 1), s = QuadValue::sqrt_q(q);
  return (theta ? one + s : one - s).inverse();
}

QuarticValue residue_closed_form(Engine& E, const TwistSpec& t, int r) {
  validate(E.field(), t);
  if (t.a1_theta) throw mds_error("the closed-form residue requires a1 = 1");
  const FieldSpec& F = E.field();
  const int chi = fq::kronecker(F, E.with_unit(t.c2, t.a2_theta), t.c1);
  return closed_form_core(E.q(), residue_base(E.q(), t.a2_theta, r), r, chi, prime_degrees(F, t.c1),
                          prime_degrees(F, t.c2), prime_degrees(F, t.c3));
}

QuarticValue residue_s_sum(Engine& E, const TwistSpec& t, int r) {
  validate(E.field(), t);
  if (t.a1_theta) throw mds_error("the residue S-sum requires a1 = 1");
  const FieldSpec& F = E.field();
  const long q = E.q();
  const bool vt = r & 1;
  const QuarticValue one(q, 1), X = pole_point(q, r);
  const std::vector<int> d1 = prime_degrees(F, t.c1), d2 = prime_degrees(F, t.c2), d3 = prime_degrees(F, t.c3);
  const int degc = t.c1.deg() + t.c2.deg() + t.c3.deg();
  const int chi = fq::kronecker(F, E.with_unit(t.c2, t.a2_theta != vt), t.c1);
  QuarticValue v = one * Q(chi) * Q(1, 8);
  v *= qpow4(q, 6 * degc) * X.pow(-3 * degc);
  v *= qpow4(q, 2 * t.c2.deg()) * X.pow(-t.c2.deg());
  v *= w_mod(q, d2, X);
  std::vector<int> d13 = d1;
  d13.insert(d13.end(), d3.begin(), d3.end());
  std::vector<int> dall = d13;
  dall.insert(dall.end(), d2.begin(), d2.end());
  for (int k : d13) v *= (one - qpow4(q, -4 * k)) / (one - X.pow(2 * k) * qpow4(q, -8 * k));
  // zeta^{(c)}(8 - 6s - 6s4) zeta^{(c)}(3 - 2s - 2s4)^6 / zeta_c(1) at s = 1/2.
  const QuarticValue y1 = X.pow(6) * qpow4(q, -20), y2 = X.pow(2) * qpow4(q, -8);
  QuarticValue z = (one - y1 * Q(q)).inverse() * (one - y2 * Q(q)).inverse().pow(6);
  for (int k : dall) z *= (one - y1.pow(k)) * (one - y2.pow(k)).pow(6) * (one - qpow4(q, -4 * k));
  v *= z;
  v *= gamma_value(q, t.a2_theta, r);
  // S = sum over e | c1, e' | c3 with n = (c3 / e') e c2.
  const int w1 = static_cast<int>(d1.size()), w3 = static_cast<int>(d3.size());
  QuarticValue S(q);
  for (int m1 = 0; m1 < (1 << w1); ++m1)
    for (int m3 = 0; m3 < (1 << w3); ++m3) {
      std::vector<int> ee, n = d2;
      for (int i = 0; i < w1; ++i)
        if ((m1 >> i) & 1) {
          ee.push_back(d1[i]);
          n.push_back(d1[i]);
        }
      for (int i = 0; i < w3; ++i) ((m3 >> i) & 1 ? ee : n).push_back(d3[i]);
      int sgn = 1, degn = 0;
      for (int k : ee) sgn *= chi_vt(vt, k);
      QuarticValue term = u_mod(q, ee, X) * Q(sgn);
      for (int k : n) {
        degn += k;
        const QuarticValue phi = one * Q(static_cast<unsigned long>(fq::ipow(q, k))) - one;
        term *= phi.pow(3) * v_local(q, k, X) * (one - X.pow(2 * k) * qpow4(q, -8 * k)).pow(-3);
      }
      term *= X.pow(3 * degn) * qpow4(q, -18 * degn);
      S += term;
    }
  return v * S;
}

QuarticValue residue_explicit(long q, bool a2_theta, int r) {
  const RationalFunction Z = d4::explicit_Z();
  const QuarticValue one(q, 1), s = qpow4(q, 2), si = qpow4(q, -2);
  const QuarticValue rho = rho_value(q, r), t0 = rho.complex_conj() * qpow4(q, -3);
  const QuarticValue tt = a2_theta ? -t0 : t0;
  auto mono = [&](const rings::ParamPoly& c, const rings::Exps& e) {
    return c.eval_in<QuarticValue>(one, s, si) * si.pow(e[0] + e[1] + e[2]) * tt.pow(e[3]);
  };
  QuarticValue num(q), den = one, dp(q);
  for (const auto& [key, c] : Z.num.terms()) num += mono(c, rings::unpack(key));
  for (const auto& [key, c] : Z.den_poly.terms()) dp += mono(c, rings::unpack(key));
  den *= dp;
  bool found = false;
  for (const auto& f : Z.factors) {
    if (f.e == rings::Exps{2, 2, 2, 4}) {
      if (f.c != rings::ParamPoly::q_power(6) || found) throw mds_error("unexpected pole factor in Z");
      // (1 - q^3 t^4) / (1 - rho q^{3/4} t) evaluated at t0.
      const QuarticValue y = rho * qpow4(q, 3) * t0;
      den *= one + y + y * y + y * y * y;
      found = true;
      continue;
    }
    const QuarticValue v = one - mono(f.c, f.e);
    if (v.is_zero()) throw mds_error("a second factor of Z vanishes at the pole");
    den *= v;
  }
  if (!found) throw mds_error("pole factor (1 - q^6 z1^2 z2^2 z3^2 z4^4) not found");
  return num / den;
}

namespace {

// f at z4 = sign / q with the factor (1 - sign q z4) removed.
RationalFunction residue_at_z4(const RationalFunction& f, int sign) {
  auto sub = [&](const rings::ParamPoly& c, const rings::Exps& e, rings::Exps& out) {
    out = e;
    out[3] = 0;
    return c * rings::ParamPoly::monomial(Q((sign < 0 && (e[3] & 1)) ? -1 : 1), -2 * e[3]);
  };
  RationalFunction r;
  for (const auto& [key, c] : f.num.terms()) {
    rings::Exps e;
    const rings::ParamPoly v = sub(c, rings::unpack(key), e);
    r.num += rings::MultiPoly::monomial(v, e);
  }
  rings::MultiPoly dp;
  for (const auto& [key, c] : f.den_poly.terms()) {
    rings::Exps e;
    const rings::ParamPoly v = sub(c, rings::unpack(key), e);
    dp += rings::MultiPoly::monomial(v, e);
  }
  r.den_poly = dp;
  bool removed = false;
  const rings::ParamPoly pole = rings::ParamPoly::monomial(Q(sign), 2);
  for (const auto& g : f.factors) {
    if (!removed && g.e == rings::Exps{0, 0, 0, 1} && g.c == pole) {
      removed = true;
      continue;
    }
    rings::Exps e;
    const rings::ParamPoly c = sub(g.c, g.e, e);
    if (e == rings::Exps{0, 0, 0, 0}) {
      const rings::ParamPoly k = rings::ParamPoly(1) - c;
      if (k.is_zero()) throw mds_error("double pole at the substitution point");
      r.den_poly = r.den_poly * rings::MultiPoly(k);
    } else {
      r.factors.push_back({c, e});
    }
  }
  if (!removed) throw mds_error("pole factor in z4 not found");
  return r;
}

RationalFunction negate_z4(const RationalFunction& f) {
  auto sg = [](const rings::Exps& e) { return rings::ParamPoly((e[3] & 1) ? -1 : 1); };
  RationalFunction r;
  for (const auto& [key, c] : f.num.terms()) {
    const rings::Exps e = rings::unpack(key);
    r.num += rings::MultiPoly::monomial(c * sg(e), e);
  }
  r.den_poly = rings::MultiPoly();
  for (const auto& [key, c] : f.den_poly.terms()) {
    const rings::Exps e = rings::unpack(key);
    r.den_poly += rings::MultiPoly::monomial(c * sg(e), e);
  }
  for (const auto& g : f.factors) r.factors.push_back({g.c * sg(g.e), g.e});
  return r;
}

}  // namespace

ResidueW1Report check_residue_w1(Engine& E, const rings::EqualityMode& mode) {
  ResidueW1Report rep;
  const RationalFunction Z = d4::explicit_Z();
  const rings::ParamPoly q1 = rings::ParamPoly::q_power(1);
  RationalFunction rhs;
  rhs.num = rings::MultiPoly(rings::ParamPoly(1));
  rhs.factors.push_back({rings::ParamPoly::q_power(2), {2, 2, 2, 0}});
  for (int i = 0; i < 3; ++i) {
    rings::Exps e{0, 0, 0, 0};
    e[i] = 2;
    rhs.factors.push_back({q1, e});
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      rings::Exps e{0, 0, 0, 0};
      e[i] = 1;
      e[j] = 1;
      rhs.factors.push_back({q1, e});
    }
  const RationalFunction lhs1 = residue_at_z4(Z, +1);
  const RationalFunction lhs2 = residue_at_z4(negate_z4(Z), -1);
  const rings::EqualityResult r1 = rings::rat_equal(lhs1, rhs, mode);
  const rings::EqualityResult r2 = rings::rat_equal(lhs2, rhs, mode);
  rep.part1 = r1.equal;
  rep.part2 = r2.equal;
  const std::array<Q, 4> origin{0, 0, 0, 0};
  const Q s0(3, 2);
  rep.origin = lhs1.eval(s0, origin) == rhs.eval(s0, origin) && lhs2.eval(s0, origin) == rhs.eval(s0, origin);
  // The theta0-twisted c = 1 series is Z(z1, z2, z3, -z4).
  const FormalShape sh{2, 3, 4};
  TwistSpec t;
  t.a2_theta = true;
  const FormalTable tw = formal_coefficients(E, t, Route::vers1, sh);
  FormalTable ex = explicit_formal(E.q(), sh);
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b)
      for (int c = 0; a + b + c <= 2; ++c)
        for (int n = 1; n <= 3 && a + b + c + n <= 4; n += 2) ex.at(a, b, c, n) = -ex.at(a, b, c, n);
  const std::string diff = tw.first_difference(ex);
  rep.twist_sign = diff.empty();
  std::ostringstream os;
  os << "part1 " << r1.mode << (r1.equal ? " equal" : " differs " + r1.witness) << "; part2 " << r2.mode
     << (r2.equal ? " equal" : " differs " + r2.witness);
  if (!diff.empty()) os << "; twist sign " << diff;
  rep.detail = os.str();
  return rep;
}

// ---- generic residue at the q^{-3/4} poles ----

namespace {

struct HRouteContext {
  long q;
  bool a2;
  int r;
  QuarticValue base, t0;
  std::map<int, std::array<QuarticValue, 3>> local;  // k -> F(z) z^0, G0(z), G1(z) at z = t0^k

  HRouteContext(long q_, bool a2_, int r_) : q(q_), a2(a2_), r(r_) {
    base = residue_base(q, a2, r);
    t0 = rho_value(q, r).complex_conj() * qpow4(q, -3);
  }
  const std::array<QuarticValue, 3>& at(int k) {
    auto it = local.find(k);
    if (it != local.end()) return it->second;
    const d4::LocalFactorsQuartic lf = d4::local_factors_quartic(q, k);
    const QuarticValue z = t0.pow(k);
    auto ev = [&](const d4::UPoly<QuarticValue>& p) {
      QuarticValue acc(q), zp(q, 1);
      for (const auto& c : p) {
        acc += c * zp;
        zp *= z;
      }
      return acc;
    };
    const QuarticValue den = ev(lf.den);
    return local[k] = {ev(lf.F) / den, ev(lf.G0) / den, ev(lf.G1) / den};
  }
};

// Sum over splits h = c c'_eps (c'/c'_eps) of the residues of the twisted series times the local factors.
QuarticValue h_route_assemble(HRouteContext& ctx, const FieldSpec& F, const Engine& E, const std::vector<Poly>& primes) {
  const int w = static_cast<int>(primes.size());
  int degh = 0;
  for (const auto& p : primes) degh += p.deg();
  long total = 1;
  for (int i = 0; i < w; ++i) total *= 3;
  QuarticValue acc(ctx.q);
  for (long code = 0; code < total; ++code) {
    Poly c1 = fq::constant(1), c2 = fq::constant(1);
    std::vector<int> d1, d2, d3;
    QuarticValue loc(ctx.q, 1);
    long rr = code;
    for (int i = 0; i < w; ++i) {
      const int role = static_cast<int>(rr % 3);
      rr /= 3;
      const int k = primes[i].deg();
      const auto& lv = ctx.at(k);
      if (role == 0) {
        c1 = fq::mul(F, c1, primes[i]);
        d1.push_back(k);
        loc *= lv[0] * ctx.t0.pow(k);
      } else if (role == 1) {
        c2 = fq::mul(F, c2, primes[i]);
        d2.push_back(k);
        loc *= lv[2];
      } else {
        d3.push_back(k);
        loc *= lv[1];
      }
    }
    const int chi = fq::kronecker(F, E.with_unit(c2, ctx.a2), c1);
    if (chi == 0) continue;
    const QuarticValue res = closed_form_core(ctx.q, ctx.base, ctx.r, chi, d1, d2, d3);
    acc += res * loc * Q(chi);
  }
  return acc * ctx.t0.pow(2 * degh);
}

}  // namespace

QuarticValue h_route_term(Engine& E, const Poly& h, bool a2_theta, int r) {
  HRouteContext ctx(E.q(), a2_theta, r);
  std::vector<Poly> primes;
  if (h.deg() > 0)
    for (const auto& [p, e] : fq::factor(E.field(), h).factors) {
      if (e != 1) throw mds_error("h must be square-free");
      primes.push_back(p);
    }
  return h_route_assemble(ctx, E.field(), E, primes);
}

QuarticValue local_residue_factor(long q, int k, bool a2_theta, int r) {
  HRouteContext ctx(q, a2_theta, r);
  const auto& lv = ctx.at(k);
  const QuarticValue tk = ctx.t0.pow(k);
  // For h = p both characters chi_{a2}(p) coincide, so their product is 1.
  QuarticValue term = closed_form_core(q, ctx.base, r, 1, {k}, {}, {}) * lv[0] * tk;
  term += closed_form_core(q, ctx.base, r, 1, {}, {k}, {}) * lv[2];
  term += closed_form_core(q, ctx.base, r, 1, {}, {}, {k}) * lv[1];
  term *= tk.pow(2);
  return QuarticValue(q, 1) - term / ctx.base;
}

Z0Report residue_z0_three_quarters(Engine& E, bool a2_theta, int r, int h_deg_max, int prod_deg_max) {
  if (h_deg_max < 0 || prod_deg_max < 1) throw mds_error("residue_z0: truncations must be positive");
  Z0Report rep;
  rep.a2_theta = a2_theta;
  rep.rho = r;
  const long q = E.q();
  const bool vt = r & 1;
  const QuarticValue base = residue_base(q, a2_theta, r);
  const complex_t base_c = rings::tower_eval(base);
  const real_t base_abs = abs(base_c);
  // Left route: exact partial h-sums.
  QuarticValue partial(q);
  std::vector<QuarticValue> exact_rows;
  for (int n = 0; n <= h_deg_max; ++n) {
    const std::vector<Poly> hs = fq::enumerate_monic(E.field(), n, fq::MonicFilter::squarefree);
    const int threads = E.threads();
    std::vector<QuarticValue> part(resolve_threads(threads), QuarticValue(q));
    const Engine& cE = E;
    parallel_chunks(hs.size(), threads, [&](std::size_t b, std::size_t e, int wk) {
      HRouteContext ctx(q, a2_theta, r);
      for (std::size_t i = b; i < e; ++i) {
        std::vector<Poly> primes;
        if (hs[i].deg() > 0)
          for (const auto& [p, ex] : fq::factor(cE.field(), hs[i]).factors) primes.push_back(p);
        const QuarticValue v = h_route_assemble(ctx, cE.field(), cE, primes);
        if (primes.size() & 1)
          part[wk] -= v;
        else
          part[wk] += v;
      }
    });
    for (const auto& p : part) partial += p;
    exact_rows.push_back(partial);
  }
  // Majorant G(y) = prod_k (1 + |tau_k| y^k)^{Irr(k)}, tau_k = 1 - local factor of a degree-k prime.
  const int k_exact = 40, k_far = 400;
  std::vector<real_t> tau(k_far + 1, real_t(0));
  for (int k = 1; k <= k_far; ++k) {
    if (k <= k_exact)
      tau[k] = abs(rings::tower_eval(QuarticValue(q, 1) - local_residue_factor(q, k, a2_theta, r)));
    else
      tau[k] = asymptotics::zhang_majorant(pow(real_t(q), real_t(-k) / 2));
  }
  const real_t sq = sqrt(real_t(q));
  auto log_g = [&](const real_t& y) {
    real_t acc = 0;
    for (int k = 1; k <= k_far; ++k) acc += asymptotics::irr_real(q, k) * log1p(tau[k] * pow(y, k));
    // Beyond k_far: Irr(k) |tau_k| y^k <= (q^k / k) 20 q^{-3k/2} y^k, a geometric tail.
    const real_t ratio = y / sq;
    acc += real_t(20) * pow(ratio, k_far + 1) / (real_t(k_far + 1) * (1 - ratio));
    return acc;
  };
  // Coefficients of G up to h_deg_max.
  std::vector<real_t> g(h_deg_max + 1, real_t(0));
  g[0] = 1;
  for (int k = 1; k <= h_deg_max; ++k) {
    const real_t I = asymptotics::irr_real(q, k);
    std::vector<real_t> fac(h_deg_max + 1, real_t(0));
    real_t binom = 1;
    for (int j = 0; j * k <= h_deg_max; ++j) {
      fac[j * k] = binom * pow(tau[k], j);
      binom = binom * (I - j) / (j + 1);
    }
    std::vector<real_t> ng(h_deg_max + 1, real_t(0));
    for (int a = 0; a <= h_deg_max; ++a)
      for (int b = 0; a + b <= h_deg_max; ++b) ng[a + b] += g[a] * fac[b];
    g = ng;
  }
  for (int n = 0; n <= h_deg_max; ++n) {
    real_t best = -1;
    for (int i = 1; i < 400; ++i) {
      const real_t y = 1 + (sq - 1) * i / 400;
      real_t partial_g = 0;
      for (int j = 0; j <= n; ++j) partial_g += g[j] * pow(y, j);
      const real_t b = (exp(log_g(y)) - partial_g) / pow(y, n + 1);
      if (b >= 0 && (best < 0 || b < best)) best = b;
    }
    Z0Row row;
    row.trunc = n;
    row.value = rings::tower_eval(exact_rows[n]);
    row.tail_bound = static_cast<double>(best * base_abs);
    rep.h_route.push_back(row);
  }
  // Right route: truncated Euler products of P.
  for (int m = 1; m <= prod_deg_max; ++m) {
    const asymptotics::EulerProductValue ev = asymptotics::euler_product_P(q, vt, m);
    Z0Row row;
    row.trunc = m;
    row.value = base_c * complex_t(ev.value);
    row.tail_bound = static_cast<double>(ev.tail_bound * base_abs);
    rep.p_route.push_back(row);
  }
  std::ostringstream os;
  for (const auto& a : rep.h_route)
    for (const auto& b : rep.p_route) {
      const double diff = static_cast<double>(abs(a.value - b.value));
      const double tol = a.tail_bound + b.tail_bound;
      const double ratio = tol > 0 ? diff / tol : (diff == 0 ? 0 : 1e300);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      if (diff > tol) {
        if (rep.agree) os << "h<=" << a.trunc << " vs p<=" << b.trunc << " differ by " << diff << " > " << tol;
        rep.agree = false;
      }
    }
  for (std::size_t i = 1; i < rep.h_route.size(); ++i)
    if (rep.h_route[i].tail_bound > rep.h_route[i - 1].tail_bound) rep.tails_monotone = false;
  for (std::size_t i = 1; i < rep.p_route.size(); ++i)
    if (rep.p_route[i].tail_bound > rep.p_route[i - 1].tail_bound) rep.tails_monotone = false;
  rep.detail = os.str();
  return rep;
}

}  // namespace mdsforge::mds
