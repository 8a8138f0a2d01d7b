#include "mdsforge/rings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mdsforge::rings {

std::string q_to_string(const Q& x) {
  Q y = x;
  y.canonicalize();
  return y.get_str();
}

Q q_from_string(const std::string& s) {
  Q x;
  if (x.set_str(s, 10) != 0) throw ring_error("invalid rational string: " + s);
  x.canonicalize();
  return x;
}

real_t to_real(const Q& x) {
  return real_t(x.get_num().get_str()) / real_t(x.get_den().get_str());
}

std::optional<long> exact_sqrt(long n) {
  if (n < 0) return std::nullopt;
  long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long c = std::max(0L, r - 2); c <= r + 2; ++c)
    if (c * c == n) return c;
  return std::nullopt;
}

// ---------------- ParamPoly ----------------

ParamPoly::ParamPoly(long v) {
  if (v != 0) c_.push_back(Q(v));
}

ParamPoly::ParamPoly(const Q& v) {
  if (v != 0) c_.push_back(v);
}

ParamPoly ParamPoly::monomial(const Q& c, int s_exp) {
  ParamPoly r;
  if (c != 0) {
    r.lo_ = s_exp;
    r.c_.push_back(c);
  }
  return r;
}

void ParamPoly::normalize() {
  std::size_t b = 0;
  while (b < c_.size() && c_[b] == 0) ++b;
  if (b == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  std::size_t e = c_.size();
  while (c_[e - 1] == 0) --e;
  if (b > 0 || e < c_.size()) {
    std::vector<Q> nc(c_.begin() + static_cast<long>(b), c_.begin() + static_cast<long>(e));
    c_ = std::move(nc);
    lo_ += static_cast<int>(b);
  }
}

Q ParamPoly::coeff(int s_exp) const {
  const int i = s_exp - lo_;
  if (i < 0 || i >= static_cast<int>(c_.size())) return Q(0);
  return c_[i];
}

bool ParamPoly::has_odd_powers() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0 && ((lo_ + static_cast<int>(i)) & 1)) return true;
  return false;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  if (o.c_.empty()) return *this;
  if (c_.empty()) return *this = o;
  const int lo = std::min(lo_, o.lo_);
  const int hi = std::max(high(), o.high());
  std::vector<Q> nc(hi - lo + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) nc[lo_ - lo + i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) nc[o.lo_ - lo + i] += o.c_[i];
  c_ = std::move(nc);
  lo_ = lo;
  normalize();
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) { return *this += -o; }

ParamPoly ParamPoly::operator-() const {
  ParamPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly r;
  if (a.c_.empty() || b.c_.empty()) return r;
  r.lo_ = a.lo_ + b.lo_;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Q(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.normalize();
  return r;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& o) { return *this = *this * o; }

ParamPoly ParamPoly::subs_power(int k) const {
  ParamPoly r;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) r += monomial(c_[i], (lo_ + static_cast<int>(i)) * k);
  return r;
}

ParamPoly ParamPoly::inverse_monomial() const {
  if (!is_monomial()) throw ring_error("inverse of a non-monomial ParamPoly");
  return monomial(Q(1) / c_[0], -lo_);
}

Q ParamPoly::eval(const Q& s) const {
  if (s == 0) throw ring_error("ParamPoly evaluated at s = 0");
  const Q si = Q(1) / s;
  return eval_in<Q>(Q(1), s, si);
}

std::string ParamPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    if (c_[i] == 0) continue;
    const int e = lo_ + i;
    Q c = c_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    if (first && c < 0) os << "-";
    first = false;
    Q ac = abs(c);
    const bool one = (ac == 1);
    if (!one || e == 0) os << q_to_string(ac);
    if (e != 0) {
      if (!one) os << "*";
      if (e % 2 == 0)
        os << "q^" << (e / 2);
      else
        os << "q^(" << e << "/2)";
    }
  }
  return os.str();
}

// ---------------- keys ----------------

Key pack(const Exps& e) {
  Key k = 0;
  for (int i = 3; i >= 0; --i) {
    if (e[i] < 0 || e[i] > 0xFFFF) throw ring_error("exponent out of packable range");
    k = (k << 16) | static_cast<Key>(e[i]);
  }
  return k;
}

Exps unpack(Key k) {
  Exps e{};
  for (int i = 0; i < 4; ++i) {
    e[i] = static_cast<int>(k & 0xFFFF);
    k >>= 16;
  }
  return e;
}

int weighted_degree(const Exps& e, const Exps& w) {
  return e[0] * w[0] + e[1] * w[1] + e[2] * w[2] + e[3] * w[3];
}

// ---------------- MultiPoly ----------------

MultiPoly::MultiPoly(const ParamPoly& c) {
  if (!c.is_zero()) t_.emplace(pack({0, 0, 0, 0}), c);
}

MultiPoly MultiPoly::monomial(const ParamPoly& c, const Exps& e) {
  MultiPoly r;
  if (!c.is_zero()) r.t_.emplace(pack(e), c);
  return r;
}

MultiPoly MultiPoly::variable(int i) {
  Exps e{};
  e[i] = 1;
  return monomial(ParamPoly(1), e);
}

ParamPoly MultiPoly::coeff(const Exps& e) const {
  auto it = t_.find(pack(e));
  return it == t_.end() ? ParamPoly() : it->second;
}

void MultiPoly::add_term(const Exps& e, const ParamPoly& c) {
  if (c.is_zero()) return;
  const Key k = pack(e);
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) t_.erase(it);
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& kv : t_) {
    const Exps e = unpack(kv.first);
    d = std::max(d, e[0] + e[1] + e[2] + e[3]);
  }
  return d;
}

int MultiPoly::degree_in(int var) const {
  int d = 0;
  for (const auto& kv : t_) d = std::max(d, unpack(kv.first)[var]);
  return d;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [k, c] : o.t_) add_term(unpack(k), c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [k, c] : o.t_) add_term(unpack(k), -c);
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& kv : r.t_) kv.second = -kv.second;
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r;
  for (const auto& [ka, ca] : a.t_)
    for (const auto& [kb, cb] : b.t_) r.add_term(unpack(ka + kb), ca * cb);
  return r;
}

MultiPoly MultiPoly::scaled(const ParamPoly& c) const {
  MultiPoly r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : t_) r.t_.emplace(k, v * c);
  return r;
}

MultiPoly MultiPoly::shifted(const Exps& e) const {
  MultiPoly r;
  const Key ke = pack(e);
  for (const auto& [k, v] : t_) r.t_.emplace(k + ke, v);
  return r;
}

MultiPoly MultiPoly::divide_one_minus(int var) const {
  // Group by the exponents of the other variables; the quotient along z_var is the running sum.
  std::map<Key, std::map<int, ParamPoly>> groups;
  for (const auto& [k, c] : t_) {
    Exps e = unpack(k);
    const int d = e[var];
    e[var] = 0;
    groups[pack(e)][d] = c;
  }
  MultiPoly r;
  for (const auto& [base, line] : groups) {
    ParamPoly run;
    const int top = line.rbegin()->first;
    for (int d = 0; d <= top; ++d) {
      auto it = line.find(d);
      if (it != line.end()) run += it->second;
      if (d < top) {
        Exps e = unpack(base);
        e[var] = d;
        r.add_term(e, run);
      }
    }
    if (!run.is_zero()) throw ring_error("divide_one_minus: division is not exact");
  }
  return r;
}

MultiPoly MultiPoly::slice(int var, int k) const {
  MultiPoly r;
  for (const auto& [key, c] : t_) {
    Exps e = unpack(key);
    if (e[var] != k) continue;
    e[var] = 0;
    r.t_.emplace(pack(e), c);
  }
  return r;
}

Q MultiPoly::eval(const Q& s, const std::array<Q, 4>& z) const {
  if (s == 0) throw ring_error("MultiPoly evaluated at s = 0");
  return eval_in<Q>(Q(1), s, Q(1) / s, z);
}

std::string MultiPoly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    const Exps e = unpack(k);
    for (int v = 0; v < 4; ++v)
      if (e[v]) os << "*z" << (v + 1) << (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
  }
  return os.str();
}

// ---------------- RationalFunction ----------------

MultiPoly RationalFunction::den_expanded() const {
  MultiPoly d = den_poly;
  for (const auto& f : factors)
    d = d * (MultiPoly(ParamPoly(1)) - MultiPoly::monomial(f.c, f.e));
  return d;
}

Q RationalFunction::eval(const Q& s, const std::array<Q, 4>& z) const {
  Q den = den_poly.eval(s, z);
  const Q si = Q(1) / s;
  for (const auto& f : factors) {
    Q m = f.c.eval_in<Q>(Q(1), s, si);
    for (int v = 0; v < 4; ++v)
      for (int k = 0; k < f.e[v]; ++k) m *= z[v];
    den *= (1 - m);
  }
  if (den == 0) throw ring_error("rational function evaluated at a pole");
  return num.eval(s, z) / den;
}

// ---------------- truncated series ----------------

MultiPoly truncate(const MultiPoly& p, const Exps& w, int cutoff) {
  MultiPoly r;
  for (const auto& [k, c] : p.terms())
    if (weighted_degree(unpack(k), w) <= cutoff) r.add_term(unpack(k), c);
  return r;
}

MultiPoly mul_truncated(const MultiPoly& a, const MultiPoly& b, const Exps& w, int cutoff) {
  MultiPoly r;
  for (const auto& [ka, ca] : a.terms()) {
    const int da = weighted_degree(unpack(ka), w);
    if (da > cutoff) continue;
    for (const auto& [kb, cb] : b.terms()) {
      const Exps e = unpack(ka + kb);
      if (weighted_degree(e, w) <= cutoff) r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiPoly div_geometric(const MultiPoly& p, const ParamPoly& c, const Exps& e, const Exps& w,
                        int cutoff) {
  const int de = weighted_degree(e, w);
  if (de <= 0) throw ring_error("geometric factor has non-positive weighted degree");
  MultiPoly result = truncate(p, w, cutoff);
  MultiPoly term = result;
  while (true) {
    term = truncate(term.shifted(e).scaled(c), w, cutoff);
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

TruncSeries TruncSeries::truncated(int new_cutoff) const {
  if (new_cutoff > cutoff) throw ring_error("cannot raise the cutoff of a truncated series");
  TruncSeries r;
  r.terms = truncate(terms, weights, new_cutoff);
  r.weights = weights;
  r.cutoff = new_cutoff;
  r.provenance = provenance + " | truncated to " + std::to_string(new_cutoff);
  return r;
}

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b) {
  if (a.weights != b.weights) throw ring_error("series_mul: weight mismatch");
  TruncSeries r;
  r.weights = a.weights;
  r.cutoff = std::min(a.cutoff, b.cutoff);
  r.terms = mul_truncated(a.terms, b.terms, r.weights, r.cutoff);
  r.provenance = "(" + a.provenance + ") * (" + b.provenance + ")";
  return r;
}

TruncSeries expand(const RationalFunction& f, const Exps& weights, int cutoff) {
  const ParamPoly c0 = f.den_poly.coeff({0, 0, 0, 0});
  if (c0.is_zero()) throw ring_error("expand: denominator vanishes at the origin");
  if (!c0.is_monomial()) throw ring_error("expand: constant term of denominator is not a unit");
  const ParamPoly c0i = c0.inverse_monomial();
  MultiPoly rest = f.den_poly;
  rest.add_term({0, 0, 0, 0}, -c0);
  rest = -rest.scaled(c0i);
  for (const auto& [k, c] : rest.terms())
    if (weighted_degree(unpack(k), weights) <= 0)
      throw ring_error("expand: denominator term of non-positive weighted degree");
  // num / (c0 (1 - rest)) = c0^{-1} num * sum rest^j
  MultiPoly acc = truncate(f.num.scaled(c0i), weights, cutoff);
  MultiPoly term = acc;
  while (!rest.is_zero()) {
    term = mul_truncated(term, rest, weights, cutoff);
    if (term.is_zero()) break;
    acc += term;
  }
  for (const auto& g : f.factors) acc = div_geometric(acc, g.c, g.e, weights, cutoff);
  TruncSeries r;
  r.terms = std::move(acc);
  r.weights = weights;
  r.cutoff = cutoff;
  r.provenance = "expand(rational function, cutoff " + std::to_string(cutoff) + ")";
  return r;
}

SamplePoint random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 60), den(1, 23), zn(-50, 50), zd(1, 53);
  SamplePoint p;
  p.s = Q(1) + Q(num(rng), den(rng));
  p.s.canonicalize();
  for (auto& z : p.z) {
    long a = 0;
    while (a == 0) a = zn(rng);
    z = Q(a, zd(rng));
    z.canonicalize();
  }
  return p;
}

EqualityResult rat_equal(const RationalFunction& f, const RationalFunction& g,
                         const EqualityMode& mode) {
  EqualityResult res;
  if (mode.exact) {
    res.mode = "exact";
    const MultiPoly diff = f.num * g.den_expanded() - g.num * f.den_expanded();
    res.equal = diff.is_zero();
    if (!res.equal) res.witness = "nonzero cross-multiplied term count " + std::to_string(diff.size());
    return res;
  }
  res.mode = "randomized";
  res.seed = mode.seed;
  std::mt19937_64 rng(mode.seed);
  int valid = 0, attempts = 0;
  while (valid < mode.trials && attempts < 10 * mode.trials) {
    ++attempts;
    const SamplePoint pt = random_point(rng);
    Q fv, gv;
    try {
      fv = f.eval(pt.s, pt.z);
      gv = g.eval(pt.s, pt.z);
    } catch (const ring_error&) {
      continue;
    }
    ++valid;
    if (fv != gv) {
      std::ostringstream os;
      os << "s=" << q_to_string(pt.s);
      for (int v = 0; v < 4; ++v) os << " z" << (v + 1) << "=" << q_to_string(pt.z[v]);
      res.witness = os.str();
      res.trials = valid;
      res.equal = false;
      return res;
    }
  }
  res.trials = valid;
  res.inconclusive = valid < mode.trials;
  res.equal = !res.inconclusive;
  return res;
}

// ---------------- QuadValue ----------------

QuadValue::QuadValue(long q, const Q& a, const Q& b) : q_(q), a_(a), b_(b) { canon(); }

void QuadValue::canon() {
  a_.canonicalize();
  b_.canonicalize();
  if (q_ > 0 && b_ != 0) {
    if (auto r = exact_sqrt(q_)) {
      a_ += b_ * Q(*r);
      b_ = 0;
    }
  }
}

namespace {
long merge_q(long a, long b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw ring_error("mixing values with different q");
}
}  // namespace

QuadValue& QuadValue::operator+=(const QuadValue& o) {
  q_ = merge_q(q_, o.q_);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadValue& QuadValue::operator-=(const QuadValue& o) {
  q_ = merge_q(q_, o.q_);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadValue& QuadValue::operator*=(const QuadValue& o) {
  q_ = merge_q(q_, o.q_);
  const Q na = a_ * o.a_ + Q(q_) * b_ * o.b_;
  const Q nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  canon();
  return *this;
}

QuadValue& QuadValue::operator*=(const Q& c) {
  a_ *= c;
  b_ *= c;
  return *this;
}

QuadValue QuadValue::inverse() const {
  if (is_zero()) throw ring_error("inverse of zero in Q(sqrt q)");
  const Q n = a_ * a_ - Q(q_) * b_ * b_;
  if (n == 0) throw ring_error("zero norm in Q(sqrt q)");
  return QuadValue(q_, a_ / n, -b_ / n);
}

QuadValue QuadValue::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  QuadValue r(q_, 1, 0), b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

bool QuadValue::operator==(const QuadValue& o) const {
  if (q_ != 0 && o.q_ != 0 && q_ != o.q_) return false;
  return a_ == o.a_ && b_ == o.b_;
}

std::string QuadValue::str() const {
  const std::string tail = "*sqrt(" + std::to_string(q_) + ")";
  if (b_ < 0) return q_to_string(a_) + " - " + q_to_string(-b_) + tail;
  return q_to_string(a_) + " + " + q_to_string(b_) + tail;
}

// ---------------- QuarticValue ----------------

QuarticValue::QuarticValue(long q) : q_(q) {}

QuarticValue::QuarticValue(long q, const Q& re) : q_(q) { v_[0] = re; }

QuarticValue QuarticValue::basis(long q, int j, bool imag) {
  QuarticValue r(q);
  r.v_[2 * j + (imag ? 1 : 0)] = 1;
  r.canon();
  return r;
}

QuarticValue QuarticValue::from_quad(const QuadValue& x) {
  QuarticValue r(x.q());
  r.v_[0] = x.a();
  r.v_[4] = x.b();
  r.canon();
  return r;
}

bool QuarticValue::is_zero() const {
  for (const auto& x : v_)
    if (x != 0) return false;
  return true;
}

void QuarticValue::canon() {
  for (auto& x : v_) x.canonicalize();
  if (q_ <= 0) return;
  if (auto r = exact_sqrt(q_)) {
    for (int im = 0; im < 2; ++im) {
      v_[0 + im] += v_[4 + im] * Q(*r);
      v_[4 + im] = 0;
      v_[2 + im] += v_[6 + im] * Q(*r);
      v_[6 + im] = 0;
    }
    if (auto t = exact_sqrt(*r)) {
      for (int im = 0; im < 2; ++im) {
        v_[0 + im] += v_[2 + im] * Q(*t);
        v_[2 + im] = 0;
      }
    }
  }
}

QuarticValue& QuarticValue::operator+=(const QuarticValue& o) {
  q_ = merge_q(q_, o.q_);
  for (int k = 0; k < 8; ++k) v_[k] += o.v_[k];
  return *this;
}

QuarticValue& QuarticValue::operator-=(const QuarticValue& o) {
  q_ = merge_q(q_, o.q_);
  for (int k = 0; k < 8; ++k) v_[k] -= o.v_[k];
  return *this;
}

QuarticValue& QuarticValue::operator*=(const QuarticValue& o) {
  q_ = merge_q(q_, o.q_);
  std::array<Q, 8> r{};
  const Q qq(q_);
  for (int j1 = 0; j1 < 4; ++j1)
    for (int i1 = 0; i1 < 2; ++i1) {
      const Q& x = v_[2 * j1 + i1];
      if (x == 0) continue;
      for (int j2 = 0; j2 < 4; ++j2)
        for (int i2 = 0; i2 < 2; ++i2) {
          const Q& y = o.v_[2 * j2 + i2];
          if (y == 0) continue;
          Q t = x * y;
          int j = j1 + j2;
          if (j >= 4) {
            j -= 4;
            t *= qq;
          }
          if (i1 && i2) t = -t;
          r[2 * j + (i1 ^ i2)] += t;
        }
    }
  v_ = r;
  canon();
  return *this;
}

QuarticValue& QuarticValue::operator*=(const Q& c) {
  for (auto& x : v_) x *= c;
  return *this;
}

QuarticValue QuarticValue::operator-() const {
  QuarticValue r = *this;
  for (auto& x : r.v_) x = -x;
  return r;
}

QuarticValue QuarticValue::inverse() const {
  if (is_zero()) throw ring_error("inverse of zero in Q(i, q^(1/4))");
  std::vector<int> active;
  int jmax = 4;
  if (auto r = exact_sqrt(q_)) jmax = exact_sqrt(*r) ? 1 : 2;
  for (int j = 0; j < jmax; ++j)
    for (int im = 0; im < 2; ++im) active.push_back(2 * j + im);
  const int n = static_cast<int>(active.size());
  // Column k of M is (*this) * basis(active[k]); solve M y = e_0.
  std::vector<std::vector<Q>> M(n, std::vector<Q>(n + 1));
  for (int k = 0; k < n; ++k) {
    const QuarticValue col = (*this) * basis(q_, active[k] / 2, active[k] & 1);
    for (int r = 0; r < n; ++r) M[r][k] = col.v_[active[r]];
  }
  M[0][n] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw ring_error("singular multiplication matrix in Q(i, q^(1/4))");
    std::swap(M[piv], M[col]);
    const Q inv = Q(1) / M[col][col];
    for (int c = col; c <= n; ++c) M[col][c] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || M[r][col] == 0) continue;
      const Q f = M[r][col];
      for (int c = col; c <= n; ++c) M[r][c] -= f * M[col][c];
    }
  }
  QuarticValue y(q_);
  for (int k = 0; k < n; ++k) y.v_[active[k]] = M[k][n];
  y.canon();
  return y;
}

QuarticValue QuarticValue::complex_conj() const {
  QuarticValue r = *this;
  for (int j = 0; j < 4; ++j) r.v_[2 * j + 1] = -r.v_[2 * j + 1];
  return r;
}

QuarticValue QuarticValue::real_part() const {
  QuarticValue r = *this;
  for (int j = 0; j < 4; ++j) r.v_[2 * j + 1] = 0;
  return r;
}

QuarticValue QuarticValue::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  QuarticValue r(q_, 1), b = *this;
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

bool QuarticValue::operator==(const QuarticValue& o) const {
  if (q_ != 0 && o.q_ != 0 && q_ != o.q_) return false;
  return v_ == o.v_;
}

std::string QuarticValue::str() const {
  std::ostringstream os;
  bool first = true;
  static const char* pw[4] = {"", "*q^(1/4)", "*q^(1/2)", "*q^(3/4)"};
  for (int j = 0; j < 4; ++j)
    for (int im = 0; im < 2; ++im) {
      const Q& x = v_[2 * j + im];
      if (x == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << q_to_string(x) << ")" << (im ? "*i" : "") << pw[j];
    }
  if (first) os << "0";
  return os.str();
}

real_t tower_eval(const QuadValue& x) {
  if (x.is_zero()) return real_t(0);
  return to_real(x.a()) + to_real(x.b()) * boost::multiprecision::sqrt(real_t(x.q()));
}

complex_t tower_eval(const QuarticValue& x) {
  if (x.is_zero()) return complex_t(0);
  const real_t r4 = boost::multiprecision::sqrt(boost::multiprecision::sqrt(real_t(x.q())));
  real_t re = 0, im = 0, p = 1;
  for (int j = 0; j < 4; ++j) {
    re += to_real(x.coord(j, false)) * p;
    im += to_real(x.coord(j, true)) * p;
    p *= r4;
  }
  return complex_t(re, im);
}

std::string format_real(const real_t& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::string format_complex(const complex_t& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x.real() << (x.imag() < 0 ? " - " : " + ") << boost::multiprecision::abs(x.imag()) << "i";
  return os.str();
}

}  // namespace mdsforge::rings
