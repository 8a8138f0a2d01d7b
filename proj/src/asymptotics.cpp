#include "mdsforge/asymptotics.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "mdsforge/d4.hpp"
#include "mdsforge/parallel.hpp"

namespace mdsforge::asymptotics {

namespace {

int int_mobius(int n) {
  int r = 1;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  return n > 1 ? -r : r;
}

std::vector<long> poly_mul(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Part of every cache hash; bump when the moment computation changes.
constexpr const char* kCacheVersion = "mdsforge-moments-1";

}  // namespace

std::vector<long> zhang_coefficients() {
  std::vector<long> p{1};
  for (int i = 0; i < 5; ++i) p = poly_mul(p, {1, -1});
  p = poly_mul(p, {1, 1});
  return poly_mul(p, {1, 4, 11, 10, -11, 0, 11, -4, -1});
}

QuarticValue zhang_eval(const QuarticValue& x) {
  const std::vector<long> c = zhang_coefficients();
  QuarticValue acc(x.q()), p(x.q(), 1);
  for (long v : c) {
    acc += p * Q(v);
    p *= x;
  }
  return acc;
}

real_t zhang_majorant(const real_t& x) {
  const std::vector<long> c = zhang_coefficients();
  real_t acc = 0, p = x;
  for (std::size_t j = 1; j < c.size(); ++j) {
    acc += std::labs(c[j]) * p;
    p *= x;
  }
  return acc;
}

real_t irr_real(long q, int k) {
  if (k < 1) throw asymptotics_error("irr_real: degree must be positive");
  real_t acc = 0;
  for (int d = 1; d <= k; ++d)
    if (k % d == 0) {
      const int mu = int_mobius(d);
      if (mu) acc += mu * pow(real_t(q), k / d);
    }
  return acc / k;
}

real_t euler_tail_exponent(long q, int deg_max) {
  const std::vector<long> c = zhang_coefficients();
  if (c[1] != 0 || c[2] != 0) throw asymptotics_error("P has terms below x^3");
  long csum = 0;
  for (std::size_t j = 1; j < c.size(); ++j) csum += std::labs(c[j]);
  const real_t sq = sqrt(real_t(q));
  real_t acc = 0;
  int k = deg_max + 1;
  for (;; ++k) {
    const real_t x = pow(sq, -k);
    const real_t b = zhang_majorant(x);
    if (b >= 1) throw asymptotics_error("tail bound undefined: B(q^{-k/2}) >= 1");
    acc += pow(real_t(q), k) / k * -log1p(-b);
    // Remainder: B(x) <= csum x^3 <= 1/2 gives -log(1 - B) <= 2 csum x^3, so terms <= 2 csum q^{-k/2} / k.
    if (csum * pow(x, 3) <= real_t(1) / 2 && pow(sq, -k) < real_t("1e-80")) break;
  }
  acc += 2 * real_t(csum) * pow(sq, -(k + 1)) / (1 - 1 / sq);
  return acc;
}

EulerProductValue euler_product_P(long q, bool theta, int deg_max) {
  if (deg_max < 1) throw asymptotics_error("euler_product_P: deg_max must be positive");
  EulerProductValue ev;
  ev.q = q;
  ev.theta = theta;
  ev.deg_max = deg_max;
  const std::vector<long> c = zhang_coefficients();
  const real_t sq = sqrt(real_t(q));
  real_t log_abs = 0;
  int sign = 1;
  for (int k = 1; k <= deg_max; ++k) {
    const real_t x = (theta && (k & 1) ? -1 : 1) * pow(sq, -k);
    real_t v = 0, p = 1;
    for (long cj : c) {
      v += cj * p;
      p *= x;
    }
    if (v == 0) {
      ev.value = 0;
      ev.tail_bound = 0;
      return ev;
    }
    const real_t irr = irr_real(q, k);
    if (v < 0 && fmod(irr, real_t(2)) != 0) sign = -sign;
    log_abs += irr * log(abs(v));
  }
  ev.value = sign * exp(log_abs);
  ev.tail_bound = abs(ev.value) * (exp(euler_tail_exponent(q, deg_max)) - 1);
  return ev;
}

// ---- moments ----

QuadValue moment_sum(const FieldSpec& F, int D, int threads, const lfun::CharSumEngine* engine) {
  if (D < 0) throw asymptotics_error("moment_sum: negative degree");
  const unsigned long long count = fq::ipow(F.q, D);
  const long double budget = 4.0e9L;
  if (static_cast<long double>(count) > budget) {
    std::ostringstream os;
    os << "moment_sum: q^D = " << count << " conductors exceeds the budget of " << static_cast<double>(budget);
    throw asymptotics_error(os.str());
  }
  std::unique_ptr<lfun::CharSumEngine> own;
  const int need = std::max(1, D / 2 + 1);
  if (!engine || engine->max_deg() < need) {
    own = std::make_unique<lfun::CharSumEngine>(F, need);
    engine = own.get();
  }
  const int t = resolve_threads(threads);
  std::vector<QuadValue> part(t, QuadValue(F.q));
  const std::size_t chunks = static_cast<std::size_t>(std::min<unsigned long long>(count, 4096ULL * t));
  parallel_chunks(chunks, t, [&](std::size_t b, std::size_t e, int wk) {
    for (std::size_t ch = b; ch < e; ++ch) {
      const unsigned long long lo = count * ch / chunks, hi = count * (ch + 1) / chunks;
      fq::for_each_monic(
          F, D, fq::MonicFilter::squarefree,
          [&](const fq::Poly& d0) {
            const QuadValue l = lfun::central_value(lfun::l_polynomial(F, d0, lfun::LMode::fe_completed, engine));
            part[wk] += l * l * l;
          },
          lo, hi);
    }
  });
  QuadValue acc(F.q);
  for (const auto& p : part) acc += p;
  return acc;
}

QuadValue moment_by_sieve(mds::Engine& E, int D) {
  QuadValue acc(E.q());
  for (int dh = 0; 2 * dh <= D; ++dh)
    for (const fq::Poly& h : fq::enumerate_monic(E.field(), dh, fq::MonicFilter::squarefree)) {
      const int mu = fq::mobius(fq::factor(E.field(), h));
      acc += mds::sieved_coefficients(E, h, false, D).coeffs[D] * Q(mu);
    }
  return acc;
}

MomentCache::MomentCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path MomentCache::file_for(long q, int D) const {
  return root_ / "moments" / ("q" + std::to_string(q)) / ("D" + std::to_string(D) + ".json");
}

std::string MomentCache::content_hash(long q, int D, const QuadValue& v) {
  const std::string msg =
      std::string(kCacheVersion) + "|" + std::to_string(q) + "|" + std::to_string(D) + "|" + rings::q_to_string(v.a()) + "|" + rings::q_to_string(v.b());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(msg.data(), msg.size(), md, &len, EVP_sha256(), nullptr))
    throw asymptotics_error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::optional<MomentEntry> MomentCache::load(long q, int D) const {
  const auto path = file_for(q, D);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  MomentEntry e;
  e.q = j.at("q").get<long>();
  e.D = j.at("D").get<int>();
  if (e.q != q || e.D != D) throw asymptotics_error("moment cache entry " + path.string() + " has wrong keys");
  e.value = QuadValue(q, rings::q_from_string(j.at("a").get<std::string>()),
                      rings::q_from_string(j.at("b").get<std::string>()));
  e.hash = j.at("hash").get<std::string>();
  if (e.hash != content_hash(q, D, e.value)) throw asymptotics_error("moment cache hash mismatch in " + path.string());
  return e;
}

void MomentCache::store(const MomentEntry& e) const {
  const auto path = file_for(e.q, e.D);
  std::filesystem::create_directories(path.parent_path());
  nlohmann::json j;
  j["q"] = e.q;
  j["D"] = e.D;
  j["a"] = rings::q_to_string(e.value.a());
  j["b"] = rings::q_to_string(e.value.b());
  j["hash"] = content_hash(e.q, e.D, e.value);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

MomentTable fill_moments(const FieldSpec& F, int d_min, int d_max, int threads, const MomentCache* cache) {
  MomentTable t;
  t.q = F.q;
  t.threads = resolve_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  std::unique_ptr<lfun::CharSumEngine> engine;
  for (int D = d_min; D <= d_max; ++D) {
    if (cache)
      if (auto e = cache->load(F.q, D)) {
        t.entries[D] = e->value;
        t.from_cache[D] = true;
        continue;
      }
    const int need = std::max(1, D / 2 + 1);
    if (!engine || engine->max_deg() < need) engine = std::make_unique<lfun::CharSumEngine>(F, need);
    const QuadValue v = moment_sum(F, D, threads, engine.get());
    t.entries[D] = v;
    t.from_cache[D] = false;
    if (cache) cache->store({F.q, D, v, std::string()});
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

// ---- secondary term ----

RTerm r_term(long q, int D, int prod_deg_max) {
  RTerm rt;
  rt.q = q;
  rt.D = D;
  rt.prod_deg_max = prod_deg_max;
  const QuarticValue one(q, 1), I = QuarticValue::basis(q, 0, true);
  auto q4 = [&](int n) { return mds::qpow4(q, n); };
  // Bracketed constants of the three lines.
  const QuarticValue b1 = one + q4(1) + q4(2) * Q(10) + q4(3) * Q(7) + q4(4) * Q(20) + q4(5) * Q(7) +
                          q4(6) * Q(10) + q4(7) + q4(8);
  const QuarticValue b2 = one - q4(1) + q4(2) * Q(10) - q4(3) * Q(7) + q4(4) * Q(20) - q4(5) * Q(7) +
                          q4(6) * Q(10) - q4(7) + q4(8);
  const QuarticValue b3 = one - I * q4(1) - q4(2) * Q(4) + I * q4(3) * Q(7) + q4(4) * Q(6) - I * q4(5) * Q(7) -
                          q4(6) * Q(4) + I * q4(7) + q4(8);
  const QuarticValue g0 = mds::gamma_value(q, false, 0), g2 = mds::gamma_value(q, false, 2),
                     g1 = mds::gamma_value(q, false, 1);
  rt.brackets_match = b1 * Q(2) == g0 && b2 * Q(2) == g2 && b3 * Q(2) == g1;
  if (!rt.brackets_match) {
    rt.detail = "bracket constants differ from Gamma / 2";
    throw asymptotics_error("r_term: " + rt.detail);
  }
  const EulerProductValue p1 = euler_product_P(q, false, prod_deg_max);
  const EulerProductValue pt = euler_product_P(q, true, prod_deg_max);
  const real_t zeta7 = pow(rings::tower_eval(mds::l_half_unit(q, false)), 7);
  const real_t lt7 = pow(rings::tower_eval(mds::l_half_unit(q, true)), 7);
  const real_t sgnD = (D & 1) ? -1 : 1;
  const complex_t iD = rings::tower_eval(mds::rho_value(q, D));
  rt.value = rings::tower_eval(b1).real() / 4 * zeta7 * p1.value + sgnD * rings::tower_eval(b2).real() / 4 * zeta7 * p1.value +
             (iD * rings::tower_eval(b3)).real() / 2 * lt7 * pt.value;
  // Residues at xi = conj(rho) q^{-3/4}: R = sum over rho of rho^D (1/8) Gamma(1, rho) L^7 prod P.
  complex_t acc(0);
  for (int r = 0; r < 4; ++r) {
    const bool vt = r & 1;
    const complex_t base = rings::tower_eval(mds::gamma_value(q, false, r)) / complex_t(8);
    const complex_t rhoD = rings::tower_eval(mds::rho_value(q, r * D));
    acc += rhoD * base * complex_t((vt ? lt7 : zeta7) * (vt ? pt.value : p1.value));
  }
  rt.residue_route = acc.real();
  rt.tail_bound = (abs(rings::tower_eval(b1)) + abs(rings::tower_eval(b2))) / 4 * abs(zeta7) * p1.tail_bound +
                  abs(rings::tower_eval(b3)) / 2 * abs(lt7) * pt.tail_bound;
  return rt;
}

namespace {

// Least squares by normal equations with partial pivoting; returns the coefficient vector and the pivot ratio.
std::vector<real_t> least_squares(const std::vector<std::vector<real_t>>& A, const std::vector<real_t>& y,
                                  double& pivot_ratio) {
  const std::size_t n = A.at(0).size();
  std::vector<std::vector<real_t>> M(n, std::vector<real_t>(n + 1, real_t(0)));
  for (std::size_t r = 0; r < A.size(); ++r)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) M[i][j] += A[r][i] * A[r][j];
      M[i][n] += A[r][i] * y[r];
    }
  real_t pmax = 0, pmin = -1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(M[r][c]) > abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    const real_t p = abs(M[c][c]);
    if (p == 0) throw asymptotics_error("singular fit");
    pmax = std::max(pmax, p);
    pmin = pmin < 0 ? p : std::min(pmin, p);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const real_t f = M[r][c] / M[c][c];
      for (std::size_t k = c; k <= n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  pivot_ratio = static_cast<double>(pmax / pmin);
  std::vector<real_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n] / M[i][i];
  return x;
}

}  // namespace

SecondaryReport secondary_term_report(long q, const std::map<int, QuadValue>& moments, int prod_deg_max) {
  SecondaryReport rep;
  rep.q = q;
  rep.d_max = moments.empty() ? -1 : moments.rbegin()->first;
  std::ostringstream os;
  os << "diagnostic only: the error term q^{(2/3+delta)D} and the secondary term q^{3D/4} do not separate at D <= "
     << rep.d_max;
  rep.lines.push_back(os.str());
  const real_t qr = q;
  real_t w = 0;
  for (const auto& [D, v] : moments) {
    const real_t s = rings::tower_eval(v);
    rep.growth.push_back(static_cast<double>(s / (pow(qr, D) * pow(real_t(D + 1), 6))));
    w += s * pow(qr, -2 * D);
    rep.w_partial.push_back(static_cast<double>(w));
  }
  for (std::size_t i = 0; i < rep.growth.size(); ++i) {
    std::ostringstream g;
    g << "D=" << (moments.begin()->first + static_cast<int>(i)) << " S/(q^D (D+1)^6)=" << rep.growth[i]
      << " W partial at q^-2=" << rep.w_partial[i];
    rep.lines.push_back(g.str());
  }
  if (rep.d_max < 3 || moments.size() < 4) {
    rep.lines.push_back("fewer than four moments: the fit is underdetermined and is not attempted");
    return rep;
  }
  // S(D) / q^D = sum_j a_j D^j + (-1)^D sum_j b_j D^j [+ q^{-D/4} R(D, q)].
  std::map<int, real_t> rterm;
  for (const auto& [D, v] : moments) rterm[D] = r_term(q, D, prod_deg_max).value;
  const int npts = static_cast<int>(moments.size());
  for (int with_r = 0; with_r < 2; ++with_r)
    for (int deg = 0; 2 * (deg + 1) < npts; ++deg) {
      std::vector<std::vector<real_t>> A;
      std::vector<real_t> y;
      for (const auto& [D, v] : moments) {
        std::vector<real_t> row;
        for (int j = 0; j <= deg; ++j) row.push_back(pow(real_t(D), j));
        for (int j = 0; j <= deg; ++j) row.push_back(((D & 1) ? -1 : 1) * pow(real_t(D), j));
        A.push_back(row);
        real_t target = rings::tower_eval(v) / pow(qr, D);
        if (with_r) target -= pow(qr, -real_t(D) / 4) * rterm[D];
        y.push_back(target);
      }
      SecondaryFit fit;
      fit.degree = deg;
      fit.with_r_term = with_r;
      const std::vector<real_t> x = least_squares(A, y, fit.condition);
      real_t ss = 0;
      for (std::size_t r = 0; r < A.size(); ++r) {
        real_t pred = 0;
        for (std::size_t j = 0; j < x.size(); ++j) pred += A[r][j] * x[j];
        ss += (y[r] - pred) * (y[r] - pred);
      }
      fit.rms_residual = static_cast<double>(sqrt(ss / A.size()));
      rep.fits.push_back(fit);
      std::ostringstream f;
      f << "fit degree " << deg << (with_r ? " with" : " without") << " q^{3D/4} R(D,q): rms residual "
        << fit.rms_residual << ", pivot ratio " << fit.condition;
      rep.lines.push_back(f.str());
    }
  rep.fitted = true;
  rep.lines.push_back("caveat: Q(D,q) is modelled by a free polynomial of the stated degree; residual changes are "
                      "not evidence for or against the secondary term at this scale");
  return rep;
}

// ---- inequality suite ----

real_t f_odd_constant(long q) {
  const real_t x = real_t(1) / q;
  return (1 + 7 * x + 7 * x * x + x * x * x) / pow(1 - x, 8);
}

BoundItem dirichlet_da_check(long q, double A, double sigma, int deg_max) {
  BoundItem it;
  std::ostringstream name;
  name << "D_A(s) partial sums bounded, A=" << A << " Re(s)=" << sigma << " q=" << q;
  it.name = name.str();
  // Coefficients of prod_m (1 + A y^m)^{Irr(m)} give sum over square-free h of degree n of A^omega(h).
  std::vector<real_t> c(deg_max + 1, real_t(0));
  c[0] = 1;
  for (int m = 1; m <= deg_max; ++m) {
    const real_t irr = irr_real(q, m);
    std::vector<real_t> f(deg_max + 1, real_t(0));
    real_t binom = 1;
    for (int j = 0; j * m <= deg_max; ++j) {
      f[j * m] = binom * pow(real_t(A), j);
      binom = binom * (irr - j) / (j + 1);
    }
    std::vector<real_t> n(deg_max + 1, real_t(0));
    for (int a = 0; a <= deg_max; ++a)
      for (int b = 0; a + b <= deg_max; ++b) n[a + b] += c[a] * f[b];
    c = n;
  }
  // Majorant: log D_A(sigma) <= sum_m (q^m / m) A q^{-m sigma}, finite for sigma > 1.
  const real_t ratio = pow(real_t(q), real_t(1) - real_t(sigma));
  const real_t bound = exp(real_t(A) * -log1p(-ratio));
  real_t partial = 0, prev = -1;
  bool monotone = true;
  for (int n = 0; n <= deg_max; ++n) {
    partial += c[n] * pow(real_t(q), -real_t(sigma) * n);
    if (partial < prev) monotone = false;
    prev = partial;
  }
  it.worst = static_cast<double>(partial / bound);
  it.pass = monotone && partial < bound;
  std::ostringstream d;
  d << "partial sum to degree " << deg_max << " = " << static_cast<double>(partial) << ", majorant "
    << static_cast<double>(bound);
  it.detail = d.str();
  return it;
}

BoundSuiteReport bound_suite(const std::vector<long>& q_list, const BoundGrid& grid) {
  BoundSuiteReport rep;
  auto add = [&](BoundItem it) {
    if (!it.pass) rep.pass = false;
    rep.items.push_back(std::move(it));
  };
  auto from_d4 = [&](const d4::BoundReport& b) {
    BoundItem it;
    it.name = b.name + " q=" + std::to_string(b.q);
    it.pass = b.pass;
    it.worst = b.max_ratio;
    it.detail = std::to_string(b.points) + " grid points";
    add(it);
  };
  for (long q : q_list) {
    for (const auto& b : d4::check_zloc_bounds(q)) from_d4(b);
    for (const auto& b : d4::check_zeven_bounds(q)) from_d4(b);
    d4::PQTable pq;
    from_d4(d4::check_p_estimate(pq, q, grid.p_l_max, grid.eta));
    BoundItem c17;
    c17.name = "(1 + 7/q + 7/q^2 + 1/q^3)/(1 - 1/q)^8 < 17, q=" + std::to_string(q);
    const real_t v = f_odd_constant(q);
    c17.worst = static_cast<double>(v);
    c17.pass = v < 17;
    std::ostringstream d;
    d << std::fixed << std::setprecision(6) << static_cast<double>(v);
    c17.detail = "value " + d.str();
    add(c17);
    add(dirichlet_da_check(q, 3.0, 1.2, 40));
  }
  // Lindelof and Weil bounds, exhaustive over F_5 square-free conductors.
  const FieldSpec F = fq::build_field(5, 1);
  const lfun::CharSumEngine engine(F, std::max(1, grid.lindelof_max_deg / 2 + 1));
  for (int deg = grid.lindelof_min_deg; deg <= grid.lindelof_max_deg; ++deg) {
    const std::vector<fq::Poly> conds = fq::enumerate_monic(F, deg, fq::MonicFilter::squarefree);
    const int t = resolve_threads(grid.threads);
    std::vector<lfun::LindelofReport> lr(t);
    std::vector<lfun::WeilReport> wr(t);
    parallel_chunks(conds.size(), t, [&](std::size_t b, std::size_t e, int wk) {
      const std::vector<fq::Poly> part(conds.begin() + b, conds.begin() + e);
      lr[wk] = lfun::check_lindelof(F, part, grid.t_samples, &engine);
      wr[wk] = lfun::check_weil(F, part, 1e-30, &engine);
    });
    BoundItem li, wi;
    li.name = "|L(1/2+it)| < 4|d|^{10/log D}, F_5, deg " + std::to_string(deg);
    wi.name = "inverse roots of modulus sqrt q, F_5, deg " + std::to_string(deg);
    long n = 0;
    for (int w = 0; w < t; ++w) {
      li.pass = li.pass && lr[w].pass;
      li.worst = std::max(li.worst, lr[w].max_ratio);
      wi.pass = wi.pass && wr[w].pass;
      wi.worst = std::max(wi.worst, wr[w].max_deviation);
      n += lr[w].conductors;
      if (!lr[w].violations.empty() && li.detail.empty()) li.detail = lr[w].violations.front();
      if (lr[w].skipped) li.detail = lr[w].notice;
    }
    if (li.detail.empty()) li.detail = std::to_string(n) + " conductors, " + std::to_string(grid.t_samples) + " t-samples";
    wi.detail = "max deviation " + std::to_string(wi.worst);
    add(li);
    add(wi);
  }
  return rep;
}

}  // namespace mdsforge::asymptotics
