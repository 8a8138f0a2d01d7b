#include "mdsforge/fq.hpp"

#include <algorithm>
#include <sstream>

namespace mdsforge::fq {

namespace {

// Dense polynomials over the prime field F_p, used only to build the extension tables.
using ipoly = std::vector<int>;

void trim(ipoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ipoly imod(ipoly a, const ipoly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int f = a.back();  // m is monic
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - f * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

bool iirreducible(const ipoly& m, int p) {
  const int n = static_cast<int>(m.size()) - 1;
  for (int k = 1; 2 * k <= n; ++k) {
    long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      ipoly g(k + 1, 0);
      long t = idx;
      for (int i = 0; i < k; ++i) {
        g[i] = static_cast<int>(t % p);
        t /= p;
      }
      g[k] = 1;
      if (imod(m, g, p).empty()) return false;
    }
  }
  return true;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void trim(Poly& a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

}  // namespace

elem FieldSpec::inv(elem a) const {
  if (a == 0) throw field_error("inverse of zero in F_q");
  return inv_[a];
}

elem FieldSpec::pow(elem a, unsigned long n) const {
  elem r = 1;
  while (n) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

elem FieldSpec::from_int(long v) const {
  return static_cast<elem>(((v % p) + p) % p);
}

FieldSpec build_field(int p, int e) {
  if (p == 2) throw field_error("characteristic 2 is not supported");
  if (!is_prime(p)) throw field_error("p = " + std::to_string(p) + " is not prime");
  if (e < 1) throw field_error("extension degree must be positive");
  long q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  if (q % 4 != 1)
    throw field_error("q = " + std::to_string(q) + " violates q = 1 (mod 4) (q mod 4 = " +
                      std::to_string(q % 4) + ")");
  if (q > 2048) throw field_error("q = " + std::to_string(q) + " exceeds the table limit 2048");

  FieldSpec F;
  F.p = p;
  F.e = e;
  F.q = q;
  if (e == 1) {
    F.modulus = {0, 1};
  } else {
    long count = q;
    for (long idx = 0; idx < count; ++idx) {
      ipoly m(e + 1, 0);
      long t = idx;
      for (int i = 0; i < e; ++i) {
        m[i] = static_cast<int>(t % p);
        t /= p;
      }
      m[e] = 1;
      if (iirreducible(m, p)) {
        F.modulus = m;
        break;
      }
    }
  }

  auto decode = [&](long code) {
    ipoly a(e, 0);
    for (int i = 0; i < e; ++i) {
      a[i] = static_cast<int>(code % p);
      code /= p;
    }
    return a;
  };
  auto encode = [&](const ipoly& a) {
    long code = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) code = code * p + a[i];
    return static_cast<elem>(code);
  };

  F.add_.assign(q * q, 0);
  F.mul_.assign(q * q, 0);
  F.neg_.assign(q, 0);
  F.inv_.assign(q, 0);
  F.chi_.assign(q, 0);
  for (long a = 0; a < q; ++a) {
    const ipoly da = decode(a);
    ipoly na(e);
    for (int i = 0; i < e; ++i) na[i] = (p - da[i]) % p;
    F.neg_[a] = encode(na);
    for (long b = 0; b < q; ++b) {
      const ipoly db = decode(b);
      ipoly s(e);
      for (int i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
      F.add_[a * q + b] = encode(s);
      ipoly prod(2 * e, 0);
      for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      ipoly r = imod(prod, F.modulus, p);
      r.resize(e, 0);
      F.mul_[a * q + b] = encode(r);
    }
  }
  for (long a = 1; a < q; ++a)
    for (long b = 1; b < q; ++b)
      if (F.mul_[a * q + b] == 1) {
        F.inv_[a] = static_cast<elem>(b);
        break;
      }
  for (long a = 1; a < q; ++a) {
    const elem t = F.pow(static_cast<elem>(a), (q - 1) / 2);
    F.chi_[a] = (t == 1) ? 1 : -1;
  }
  for (long a = 1; a < q; ++a)
    if (F.chi_[a] == -1) {
      F.nonsquare_unit = static_cast<elem>(a);
      break;
    }
  if (F.pow(F.nonsquare_unit, (q - 1) / 2) != F.neg(1))
    throw field_error("failed to verify the non-square unit");
  return F;
}

Poly::Poly(std::vector<elem> coeffs) : c(std::move(coeffs)) { trim(*this); }

bool Poly::operator<(const Poly& o) const {
  if (c.size() != o.c.size()) return c.size() < o.c.size();
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != o.c[i]) return c[i] < o.c[i];
  return false;
}

Poly constant(elem a) { return Poly(std::vector<elem>{a}); }
Poly x_poly() { return Poly(std::vector<elem>{0, 1}); }

Poly poly_from_ints(const FieldSpec& F, const std::vector<long>& coeffs) {
  std::vector<elem> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) c.push_back(F.from_int(v));
  return Poly(std::move(c));
}

Poly add(const FieldSpec& F, const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    const elem x = i < a.c.size() ? a.c[i] : 0;
    const elem y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F.add(x, y);
  }
  trim(r);
  return r;
}

Poly sub(const FieldSpec& F, const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    const elem x = i < a.c.size() ? a.c[i] : 0;
    const elem y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F.sub(x, y);
  }
  trim(r);
  return r;
}

Poly mul(const FieldSpec& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  trim(r);
  return r;
}

Poly scale(const FieldSpec& F, const Poly& a, elem s) {
  Poly r;
  r.c.resize(a.c.size());
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = F.mul(a.c[i], s);
  trim(r);
  return r;
}

void divmod(const FieldSpec& F, const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  if (b.is_zero()) throw field_error("polynomial division by zero");
  rem = a;
  const int db = b.deg();
  const elem li = F.inv(b.lead());
  quo.c.assign(a.deg() >= db ? a.deg() - db + 1 : 0, 0);
  while (!rem.is_zero() && rem.deg() >= db) {
    const int shift = rem.deg() - db;
    const elem f = F.mul(rem.lead(), li);
    quo.c[shift] = f;
    for (int i = 0; i <= db; ++i) rem.c[shift + i] = F.sub(rem.c[shift + i], F.mul(f, b.c[i]));
    trim(rem);
  }
  trim(quo);
}

Poly mod(const FieldSpec& F, const Poly& a, const Poly& b) {
  Poly q, r;
  divmod(F, a, b, q, r);
  return r;
}

Poly exact_div(const FieldSpec& F, const Poly& a, const Poly& b) {
  Poly q, r;
  divmod(F, a, b, q, r);
  if (!r.is_zero()) throw field_error("exact_div: nonzero remainder");
  return q;
}

Poly make_monic(const FieldSpec& F, const Poly& a) {
  if (a.is_zero()) return a;
  return scale(F, a, F.inv(a.lead()));
}

Poly gcd(const FieldSpec& F, const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = mod(F, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return make_monic(F, x);
}

Poly derivative(const FieldSpec& F, const Poly& a) {
  Poly r;
  if (a.c.size() <= 1) return r;
  r.c.resize(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    elem acc = 0;
    for (std::size_t k = 0; k < i % static_cast<std::size_t>(F.p); ++k) acc = F.add(acc, a.c[i]);
    r.c[i - 1] = acc;
  }
  trim(r);
  return r;
}

Poly powmod(const FieldSpec& F, const Poly& base, unsigned long long n, const Poly& m) {
  Poly r = mod(F, constant(1), m);
  Poly b = mod(F, base, m);
  while (n) {
    if (n & 1) r = mod(F, mul(F, r, b), m);
    b = mod(F, mul(F, b, b), m);
    n >>= 1;
  }
  return r;
}

Poly pow(const FieldSpec& F, const Poly& a, unsigned n) {
  Poly r = constant(1);
  for (unsigned i = 0; i < n; ++i) r = mul(F, r, a);
  return r;
}

std::string to_string(const FieldSpec& F, const Poly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = a.deg(); i >= 0; --i) {
    const elem c = a.c[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    const bool show_coeff = (c != 1) || i == 0;
    if (show_coeff) {
      if (F.e == 1)
        os << c;
      else
        os << "[" << c << "]";
    }
    if (i >= 1) os << (show_coeff ? "*" : "") << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

unsigned long long ipow(unsigned long long b, unsigned n) {
  unsigned long long r = 1;
  for (unsigned i = 0; i < n; ++i) r *= b;
  return r;
}

unsigned long long norm(const FieldSpec& F, const Poly& m) {
  if (m.is_zero()) throw field_error("norm of zero polynomial");
  return ipow(static_cast<unsigned long long>(F.q), static_cast<unsigned>(m.deg()));
}

Poly monic_from_index(const FieldSpec& F, int deg, unsigned long long idx) {
  Poly r;
  r.c.resize(deg + 1);
  for (int i = 0; i < deg; ++i) {
    r.c[i] = static_cast<elem>(idx % F.q);
    idx /= F.q;
  }
  r.c[deg] = 1;
  return r;
}

unsigned long long monic_index(const FieldSpec& F, const Poly& m) {
  if (!m.is_monic()) throw field_error("monic_index: polynomial is not monic");
  unsigned long long idx = 0;
  for (int i = m.deg() - 1; i >= 0; --i) idx = idx * F.q + m.c[i];
  return idx;
}

int sgn(const FieldSpec& F, const Poly& d) {
  if (d.is_zero()) throw field_error("sgn of the zero polynomial");
  return F.chi(d.lead());
}

int kronecker(const FieldSpec& F, const Poly& d, const Poly& m) {
  if (!m.is_monic()) throw field_error("kronecker: modulus must be monic");
  Poly a = d, b = m;
  int result = 1;
  while (b.deg() > 0) {
    Poly r = mod(F, a, b);
    if (r.is_zero()) return 0;
    const elem lc = r.lead();
    if ((b.deg() & 1) && F.chi(lc) == -1) result = -result;
    a = std::move(b);
    b = make_monic(F, r);
  }
  return result;
}

int legendre(const FieldSpec& F, const Poly& d, const Poly& p) {
  Poly r = mod(F, d, p);
  if (r.is_zero()) return 0;
  const unsigned long long n = (norm(F, p) - 1) / 2;
  Poly t = powmod(F, r, n, p);
  if (t == constant(1)) return 1;
  if (t == constant(F.neg(1))) return -1;
  throw field_error("legendre: modulus is not irreducible");
}

int kronecker_bruteforce(const FieldSpec& F, const Poly& d, const Poly& m) {
  if (!m.is_monic()) throw field_error("kronecker: modulus must be monic");
  int result = 1;
  for (const auto& [p, k] : factor(F, m).factors) {
    const int l = legendre(F, d, p);
    if (l == 0) return 0;
    if ((k & 1) && l == -1) result = -result;
  }
  return result;
}

Factorization factor(const FieldSpec& F, const Poly& m) {
  if (m.is_zero()) throw field_error("factor of the zero polynomial");
  Factorization fac;
  fac.unit = m.lead();
  Poly cur = make_monic(F, m);
  for (int k = 1; 2 * k <= cur.deg(); ++k) {
    const unsigned long long count = ipow(F.q, k);
    for (unsigned long long idx = 0; idx < count && 2 * k <= cur.deg(); ++idx) {
      Poly g = monic_from_index(F, k, idx);
      int mult = 0;
      while (true) {
        Poly quo, rem;
        divmod(F, cur, g, quo, rem);
        if (!rem.is_zero()) break;
        cur = std::move(quo);
        ++mult;
      }
      if (mult) fac.factors.emplace_back(std::move(g), mult);
    }
  }
  if (cur.deg() >= 1) {
    bool merged = false;
    for (auto& f : fac.factors)
      if (f.first == cur) {
        ++f.second;
        merged = true;
      }
    if (!merged) fac.factors.emplace_back(cur, 1);
  }
  std::sort(fac.factors.begin(), fac.factors.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return fac;
}

Poly reconstruct(const FieldSpec& F, const Factorization& fac) {
  Poly r = constant(fac.unit);
  for (const auto& [p, k] : fac.factors) r = mul(F, r, pow(F, p, k));
  return r;
}

int mobius(const Factorization& fac) {
  for (const auto& f : fac.factors)
    if (f.second > 1) return 0;
  return (fac.factors.size() % 2) ? -1 : 1;
}

int omega(const Factorization& fac) { return static_cast<int>(fac.factors.size()); }

bool is_squarefree(const FieldSpec& F, const Poly& m) {
  if (m.is_zero()) throw field_error("square-free test of zero");
  if (m.deg() <= 1) return true;
  const Poly dm = derivative(F, m);
  if (dm.is_zero()) return false;
  return gcd(F, m, dm).deg() == 0;
}

SquareDecomposition square_decompose(const FieldSpec& F, const Poly& d) {
  SquareDecomposition sd{constant(1), constant(1)};
  for (const auto& [p, k] : factor(F, d).factors) {
    if (k & 1) sd.d0 = mul(F, sd.d0, p);
    sd.d1 = mul(F, sd.d1, pow(F, p, k / 2));
  }
  return sd;
}

bool is_irreducible(const FieldSpec& F, const Poly& f) {
  if (f.deg() < 1) return false;
  const Poly g = make_monic(F, f);
  const int n = g.deg();
  const Poly x = x_poly();
  auto frob_power = [&](int k) {
    Poly y = mod(F, x, g);
    for (int i = 0; i < k; ++i) y = powmod(F, y, F.q, g);
    return y;
  };
  if (!sub(F, frob_power(n), mod(F, x, g)).is_zero()) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0) continue;
    bool prime = true;
    for (int t = 2; t * t <= r; ++t)
      if (r % t == 0) prime = false;
    if (!prime) continue;
    const Poly h = sub(F, frob_power(n / r), mod(F, x, g));
    if (gcd(F, h, g).deg() != 0) return false;
  }
  return true;
}

unsigned long long euler_phi(const FieldSpec& F, const Poly& m) {
  unsigned long long phi = 1;
  for (const auto& [p, k] : factor(F, m).factors) {
    const unsigned long long np = norm(F, p);
    phi *= ipow(np, k - 1) * (np - 1);
  }
  return phi;
}

void for_each_monic(const FieldSpec& F, int n, MonicFilter filter,
                    const std::function<void(const Poly&)>& fn, unsigned long long begin,
                    unsigned long long end) {
  const unsigned long long count = ipow(F.q, n);
  end = std::min(end, count);
  for (unsigned long long idx = begin; idx < end; ++idx) {
    Poly m = monic_from_index(F, n, idx);
    bool keep = true;
    if (filter == MonicFilter::squarefree) keep = is_squarefree(F, m);
    if (filter == MonicFilter::irreducible) keep = is_irreducible(F, m);
    if (keep) fn(m);
  }
}

std::vector<Poly> enumerate_monic(const FieldSpec& F, int n, MonicFilter filter) {
  std::vector<Poly> out;
  for_each_monic(F, n, filter, [&](const Poly& m) { out.push_back(m); });
  return out;
}

long long irreducible_count(long q, int m) {
  auto mu = [](int n) {
    int r = 1;
    for (int d = 2; d * d <= n; ++d) {
      if (n % d) continue;
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
    if (n > 1) r = -r;
    return r;
  };
  long long s = 0;
  for (int d = 1; d <= m; ++d)
    if (m % d == 0) s += mu(d) * static_cast<long long>(ipow(q, m / d));
  return s / m;
}

FactorTable::FactorTable(const FieldSpec& F, int max_deg) : F_(F), max_deg_(max_deg) {
  if (max_deg < 0 || ipow(F.q, max_deg) > (1ULL << 28))
    throw field_error("FactorTable: degree bound too large");
  spf_.resize(max_deg + 1);
  pid_.resize(max_deg + 1);
  for (int n = 0; n <= max_deg; ++n) {
    spf_[n].assign(ipow(F.q, n), 0);
    pid_[n].assign(ipow(F.q, n), -1);
  }
  std::vector<elem> a(max_deg + 1), g(max_deg + 1), prod(2 * max_deg + 2);
  for (int k = 1; k <= max_deg; ++k) {
    const unsigned long long cnt = ipow(F.q, k);
    for (unsigned long long i = 0; i < cnt; ++i) {
      if (spf_[k][i] != 0) continue;
      const int id = static_cast<int>(primes_.size());
      primes_.push_back(monic_from_index(F, k, i));
      prime_deg_.push_back(k);
      pid_[k][i] = id;
      const Poly& pp = primes_.back();
      for (int j = k; j + k <= max_deg; ++j) {
        const unsigned long long gc = ipow(F.q, j);
        const int n = j + k;
        for (unsigned long long gi = 0; gi < gc; ++gi) {
          unsigned long long t = gi;
          for (int r = 0; r < j; ++r) {
            g[r] = static_cast<elem>(t % F.q);
            t /= F.q;
          }
          g[j] = 1;
          std::fill(prod.begin(), prod.begin() + n + 1, 0);
          for (int r = 0; r <= k; ++r) {
            if (pp.c[r] == 0) continue;
            for (int s = 0; s <= j; ++s) prod[r + s] = F.add(prod[r + s], F.mul(pp.c[r], g[s]));
          }
          unsigned long long hi = 0;
          for (int r = n - 1; r >= 0; --r) hi = hi * F.q + prod[r];
          if (spf_[n][hi] == 0) spf_[n][hi] = static_cast<std::uint32_t>(id + 1);
        }
      }
    }
  }
}

int FactorTable::prime_id(int deg, unsigned long long idx) const {
  if (deg < 1 || deg > max_deg_) throw field_error("FactorTable: degree out of range");
  return pid_[deg][idx];
}

std::vector<std::pair<int, int>> FactorTable::factor_ids(int deg, unsigned long long idx) const {
  if (deg > max_deg_) throw field_error("FactorTable: degree out of range");
  std::vector<std::pair<int, int>> out;
  Poly cur = monic_from_index(F_, deg, idx);
  while (cur.deg() > 0) {
    const unsigned long long ci = monic_index(F_, cur);
    const std::uint32_t s = spf_[cur.deg()][ci];
    int id;
    if (s == 0) {
      id = pid_[cur.deg()][ci];
      cur = constant(1);
    } else {
      id = static_cast<int>(s - 1);
      cur = exact_div(F_, cur, primes_[id]);
    }
    bool found = false;
    for (auto& pr : out)
      if (pr.first == id) {
        ++pr.second;
        found = true;
      }
    if (!found) out.emplace_back(id, 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Factorization FactorTable::factor(const Poly& m) const {
  if (m.is_zero()) throw field_error("factor of the zero polynomial");
  Factorization fac;
  fac.unit = m.lead();
  const Poly mm = make_monic(F_, m);
  for (const auto& [id, k] : factor_ids(mm.deg(), monic_index(F_, mm)))
    fac.factors.emplace_back(primes_[id], k);
  return fac;
}

}  // namespace mdsforge::fq
