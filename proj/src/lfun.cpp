#include "mdsforge/lfun.hpp"

#include <cmath>
#include <sstream>

namespace mdsforge::lfun {

using rings::real_t;

namespace {

// Primes with more residues than this use the reciprocity symbol instead of a table.
constexpr unsigned long long kTableLimit = 1024;

complex_t q_pow(long q, const complex_t& s) { return exp(s * complex_t(log(real_t(q)))); }

std::vector<long long> direct_sums(const FieldSpec& F, const Poly& d, int n_max) {
  std::vector<long long> out(n_max + 1, 0);
  for (int n = 0; n <= n_max; ++n)
    fq::for_each_monic(F, n, fq::MonicFilter::all, [&](const Poly& m) { out[n] += fq::kronecker(F, d, m); });
  return out;
}

}  // namespace

CharSumEngine::CharSumEngine(const FieldSpec& F, int max_deg) : F_(F), max_deg_(max_deg), table_(F, max_deg) {
  const auto& primes = table_.primes();
  legendre_.resize(primes.size());
  for (std::size_t id = 0; id < primes.size(); ++id) {
    const int k = table_.prime_degree(static_cast<int>(id));
    const unsigned long long cnt = fq::ipow(F.q, k);
    if (cnt > kTableLimit) continue;
    legendre_[id].assign(cnt, 0);
    // Residue index i encodes the polynomial of degree < k with base-q digits of i.
    for (unsigned long long i = 1; i < cnt; ++i) {
      std::vector<fq::elem> c(k);
      unsigned long long t = i;
      for (int r = 0; r < k; ++r) {
        c[r] = static_cast<fq::elem>(t % F.q);
        t /= F.q;
      }
      legendre_[id][i] = static_cast<signed char>(fq::legendre(F, Poly(c), primes[id]));
    }
  }
  mfac_.resize(max_deg + 1);
  for (int n = 0; n <= max_deg; ++n) {
    const unsigned long long cnt = fq::ipow(F.q, n);
    mfac_[n].resize(cnt);
    for (unsigned long long i = 0; i < cnt; ++i) mfac_[n][i] = table_.factor_ids(n, i);
  }
}

std::vector<int> CharSumEngine::prime_characters(const Poly& d, int max_prime_deg) const {
  const auto& primes = table_.primes();
  std::vector<int> chi(primes.size(), 0);
  std::vector<fq::elem> buf;
  for (std::size_t id = 0; id < primes.size(); ++id) {
    const int k = table_.prime_degree(static_cast<int>(id));
    if (k > max_prime_deg) break;
    const Poly& p = primes[id];
    // Remainder of d modulo the monic p, in place.
    buf.assign(d.c.begin(), d.c.end());
    for (int i = static_cast<int>(buf.size()) - 1; i >= k; --i) {
      const fq::elem t = buf[i];
      if (t == 0) continue;
      for (int j = 0; j <= k; ++j) buf[i - k + j] = F_.sub(buf[i - k + j], F_.mul(t, p.c[j]));
    }
    if (static_cast<int>(buf.size()) > k) buf.resize(k);
    unsigned long long idx = 0;
    for (int i = static_cast<int>(buf.size()) - 1; i >= 0; --i) idx = idx * F_.q + buf[i];
    if (idx == 0)
      chi[id] = 0;
    else if (!legendre_[id].empty())
      chi[id] = legendre_[id][idx];
    else
      chi[id] = fq::kronecker(F_, Poly(buf), p);
  }
  return chi;
}

std::vector<long long> CharSumEngine::sums(const Poly& d, int n_max) const {
  if (n_max > max_deg_) throw lfun_error("CharSumEngine: degree beyond the table");
  const std::vector<int> chi = prime_characters(d, n_max);
  std::vector<long long> out(n_max + 1, 0);
  for (int n = 0; n <= n_max; ++n) {
    long long acc = 0;
    for (const auto& fac : mfac_[n]) {
      int v = 1;
      for (const auto& [id, e] : fac) {
        const int c = chi[id];
        if (c == 0) {
          v = 0;
          break;
        }
        if ((e & 1) && c < 0) v = -v;
      }
      acc += v;
    }
    out[n] = acc;
  }
  return out;
}

std::vector<long long> complete_from_half(long q, int deg, int sgn, const std::vector<long long>& low) {
  if (deg < 1) throw lfun_error("complete_from_half: constant conductor");
  const int h = deg / 2;  // ceil((deg - 1) / 2)
  if (static_cast<int>(low.size()) < h + 1) throw lfun_error("complete_from_half: too few coefficients");
  const bool even = deg % 2 == 0;
  const int two_g = even ? deg - 2 : deg - 1, g = two_g / 2;
  std::vector<long long> p(two_g + 1, 0);
  for (int n = 0; n <= g; ++n) {
    if (even) {
      long long acc = 0, sg = 1;
      for (int j = n; j >= 0; --j, sg *= sgn) acc += sg * low[j];
      p[n] = acc;
    } else {
      p[n] = low[n];
    }
  }
  // P(u) = q^g u^{2g} P(1/(q u)).
  for (int n = 0; n < g; ++n) p[two_g - n] = p[n] * static_cast<long long>(fq::ipow(q, g - n));
  if (!even) return p;
  std::vector<long long> c(deg, 0);
  for (int n = 0; n < deg; ++n) c[n] = (n <= two_g ? p[n] : 0) - (n >= 1 ? sgn * p[n - 1] : 0);
  return c;
}

LPolynomial l_polynomial(const FieldSpec& F, const Poly& d0, LMode mode, const CharSumEngine* engine) {
  if (d0.is_zero()) throw lfun_error("zero conductor");
  if (!fq::is_squarefree(F, d0)) throw lfun_error("conductor is not square-free: " + fq::to_string(F, d0));
  LPolynomial L;
  L.d0 = d0;
  L.q = F.q;
  L.deg = d0.deg();
  L.sgn = fq::sgn(F, d0);
  if (L.deg == 0) {
    L.special = L.sgn == 1 ? SpecialKind::zeta : SpecialKind::zeta_twisted;
    return L;
  }
  L.two_g = L.deg % 2 ? L.deg - 1 : L.deg - 2;
  const int top = mode == LMode::full ? L.deg - 1 : L.deg / 2;
  std::vector<long long> c;
  if (engine && top <= engine->max_deg())
    c = engine->sums(d0, top);
  else
    c = direct_sums(F, d0, top);
  L.coeffs = mode == LMode::full ? c : complete_from_half(F.q, L.deg, L.sgn, c);
  return L;
}

QuadValue central_value(const LPolynomial& L) {
  const QuadValue one(L.q, 1), s = QuadValue::sqrt_q(L.q);
  if (L.special == SpecialKind::zeta) return (one - s).inverse();
  if (L.special == SpecialKind::zeta_twisted) return (one + s).inverse();
  const QuadValue u = s.inverse();
  QuadValue acc(L.q), pw = one;
  for (long long c : L.coeffs) {
    acc += pw * rings::Q(static_cast<long>(c));
    pw *= u;
  }
  return acc;
}

QuadValue central_value(const FieldSpec& F, const Poly& d0) { return central_value(l_polynomial(F, d0, LMode::full)); }

complex_t eval_l(const LPolynomial& L, const complex_t& s) {
  const complex_t one(1);
  if (L.special == SpecialKind::zeta) return one / (one - q_pow(L.q, one - s));
  if (L.special == SpecialKind::zeta_twisted) return one / (one + q_pow(L.q, one - s));
  const complex_t u = q_pow(L.q, -s);
  complex_t acc(0);
  for (int n = static_cast<int>(L.coeffs.size()) - 1; n >= 0; --n) acc = acc * u + complex_t(L.coeffs[n]);
  return acc;
}

complex_t gamma_q(long q, int deg, int sgn, const complex_t& s) {
  const int par = deg % 2 == 0 ? 1 : -1;
  const complex_t half = complex_t(real_t(1) / 2), one(1), sg(sgn);
  complex_t g = q_pow(q, complex_t(real_t(3 + par) / 2) * (s - half));
  const int e = (1 + par) / 2;
  if (e == 1) g = g * (one - sg * q_pow(q, -s)) / (one - sg * q_pow(q, s - one));
  return g;
}

LindelofReport check_lindelof(const FieldSpec& F, const std::vector<Poly>& conductors, int t_samples,
                              const CharSumEngine* engine) {
  LindelofReport r;
  r.samples = t_samples;
  const real_t pi = boost::math::constants::pi<real_t>(), lq = log(real_t(F.q));
  for (const Poly& d : conductors) {
    const int D = d.deg();
    if (D < 3) {
      r.skipped = true;
      r.notice = "conductors of degree < 3 skipped (theorem requires D >= 3)";
      continue;
    }
    const LPolynomial L = l_polynomial(F, d, LMode::fe_completed, engine);
    const real_t bound = 4 * exp(real_t(D) * lq * 10 / log(real_t(D)));
    ++r.conductors;
    for (int j = 0; j < t_samples; ++j) {
      const real_t t = 2 * pi / lq * j / t_samples;
      const real_t v = abs(eval_l(L, complex_t(real_t(1) / 2, t)));
      const double ratio = static_cast<double>(v / bound);
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (!(ratio < 1.0)) {
        r.pass = false;
        std::ostringstream os;
        os << "d0 = " << fq::to_string(F, d) << ", t = " << static_cast<double>(t);
        r.violations.push_back(os.str());
      }
    }
  }
  return r;
}

std::vector<complex_t> poly_roots(const std::vector<real_t>& coeffs) {
  int n = static_cast<int>(coeffs.size()) - 1;
  while (n > 0 && coeffs[n] == 0) --n;
  if (n <= 0) return {};
  std::vector<complex_t> a(n + 1);
  for (int i = 0; i <= n; ++i) a[i] = complex_t(coeffs[i] / coeffs[n]);
  auto eval = [&](const complex_t& z) {
    complex_t acc(0);
    for (int i = n; i >= 0; --i) acc = acc * z + a[i];
    return acc;
  };
  const real_t radius = pow(abs(a[0]) + real_t(1e-30), real_t(1) / n);
  std::vector<complex_t> z(n);
  const complex_t seed(real_t(4) / 10, real_t(9) / 10);
  complex_t pw(radius);
  for (int i = 0; i < n; ++i) {
    pw = pw * seed / abs(seed);
    z[i] = pw;
  }
  const real_t eps = real_t("1e-60");
  for (int it = 0; it < 2000; ++it) {
    real_t move = 0;
    for (int i = 0; i < n; ++i) {
      complex_t den(1);
      for (int j = 0; j < n; ++j)
        if (j != i) den = den * (z[i] - z[j]);
      const complex_t step = eval(z[i]) / den;
      z[i] = z[i] - step;
      move = std::max(move, real_t(abs(step)));
    }
    if (move < eps * radius) return z;
  }
  throw lfun_error("poly_roots: Durand-Kerner did not converge");
}

WeilReport check_weil(const FieldSpec& F, const std::vector<Poly>& conductors, double tol,
                      const CharSumEngine* engine) {
  WeilReport r;
  const real_t sq = sqrt(real_t(F.q));
  for (const Poly& d : conductors) {
    if (d.deg() < 1) continue;
    const LPolynomial L = l_polynomial(F, d, LMode::fe_completed, engine);
    ++r.conductors;
    // Unitary part: divide out (1 - sgn u) for even degree.
    std::vector<real_t> p(L.two_g + 1);
    real_t carry = 0;
    for (int n = 0; n <= L.two_g; ++n) {
      carry = real_t(L.coeffs[n]) + (n ? L.sgn * carry : real_t(0));
      p[n] = carry;
    }
    if (L.deg % 2) p.assign(L.coeffs.begin(), L.coeffs.end()), p.resize(L.two_g + 1);
    try {
      for (const complex_t& z : poly_roots(p)) {
        const double dev = static_cast<double>(abs(1 / abs(z) - sq));
        r.max_deviation = std::max(r.max_deviation, dev);
        if (!(dev <= tol)) {
          r.pass = false;
          r.failures.push_back("d0 = " + fq::to_string(F, d) + ": inverse root off the circle");
        }
      }
    } catch (const lfun_error& e) {
      r.pass = false;
      r.failures.push_back("d0 = " + fq::to_string(F, d) + ": " + e.what());
    }
  }
  return r;
}

}  // namespace mdsforge::lfun
