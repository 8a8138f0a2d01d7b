#include "mdsforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "mdsforge/asymptotics.hpp"
#include "mdsforge/cg.hpp"
#include "mdsforge/d4.hpp"
#include "mdsforge/fq.hpp"
#include "mdsforge/mds.hpp"

namespace mdsforge::cli {

using nlohmann::ordered_json;
using rings::Q;
using rings::QuadValue;
using rings::QuarticValue;

namespace {

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

std::string repro(const std::string& cmd, const RunConfig& c) {
  std::ostringstream os;
  os << "mdsforge " << cmd << " --q " << c.q << " --cutoff " << c.cutoff << " --n-max " << c.n_max << " --d-max "
     << c.d_max << " --h-deg-max " << c.h_deg_max << " --prod-deg-max " << c.prod_deg_max << " --trials " << c.trials
     << " --seed " << c.seed;
  return os.str();
}

ReportItem item(const std::string& name, bool pass) {
  ReportItem it;
  it.name = name;
  it.pass = pass;
  return it;
}

std::string real_string(const rings::real_t& x, int digits) { return rings::format_real(x, digits); }

fq::Poly linear(const fq::FieldSpec& F, long a) { return fq::poly_from_ints(F, {a, 1}); }

// ---- subcommands ----

Report verify_cg(const RunConfig& c) {
  Report r;
  cg::VerifyOptions opt;
  opt.trials = c.trials;
  opt.seed = c.seed;
  const rings::EqualityResult eq = cg::verify_against_explicit(d4::explicit_f(), opt);
  ReportItem a = item("D4 Weyl average equals the explicit f", eq.equal && !eq.inconclusive);
  a.data["mode"] = eq.mode;
  a.data["trials"] = eq.trials;
  a.data["seed"] = std::to_string(eq.seed);
  if (!a.pass) a.witness = eq.witness;
  r.items.push_back(a);

  const cg::RootSystem rs = cg::build_root_system(cg::RootType::D4);
  const rings::EqualityResult inv = cg::check_invariance(rs, cg::point_fn(d4::explicit_f()), opt);
  ReportItem b = item("explicit f is invariant under each simple reflection", inv.equal && !inv.inconclusive);
  b.data["trials"] = inv.trials;
  if (!b.pass) b.witness = inv.witness;
  r.items.push_back(b);

  bool lim = true;
  for (int i = 0; i < 4; ++i) lim = lim && cg::check_limiting_condition(rs, d4::explicit_f(), i);
  r.items.push_back(item("limiting condition at every simple root", lim));

  const rings::EqualityResult bad = cg::verify_against_explicit(d4::perturbed_f(5, 1), opt);
  ReportItem m = item("a mutated explicit f is rejected", !bad.equal);
  m.data["witness"] = bad.witness;
  r.items.push_back(m);
  return r;
}

Report extract(const RunConfig& c) {
  Report r;
  const d4::ACoeffTable a(c.cutoff);
  const int T = c.cutoff;
  bool init = true, odd = true;
  long checked = 0;
  for (int k1 = 0; k1 <= T; ++k1)
    for (int k2 = 0; k1 + k2 <= T; ++k2)
      for (int k3 = 0; k1 + k2 + k3 <= T; ++k3) {
        init = init && a.a(k1, k2, k3, 0) == rings::ParamPoly(1);
        for (int l = 1; k1 + k2 + k3 + l <= T; l += 2)
          if ((k1 + k2 + k3) % 2 == 1) {
            odd = odd && a.a(k1, k2, k3, l).is_zero();
            ++checked;
          }
      }
  for (int l = 0; l <= T; ++l) init = init && a.a(0, 0, 0, l) == rings::ParamPoly(1);
  ReportItem i1 = item("a(k, 0) = a(0, l) = 1", init);
  i1.data["total_max"] = T;
  r.items.push_back(i1);
  ReportItem i2 = item("a(k, l) = 0 for odd l and odd |k|", odd);
  i2.data["coefficients"] = checked;
  r.items.push_back(i2);

  d4::PQTable t;
  const int fe_max = std::min(8, T);
  const d4::FeReport fe = d4::check_pq_functional_eqs(t, fe_max, fe_max);
  ReportItem i3 = item("functional equations of P_l and Q_k", fe.pass);
  i3.data["l_max"] = fe_max;
  i3.data["k_max"] = fe_max;
  i3.data["checked"] = fe.checked;
  if (!fe.pass) i3.witness = fe.failures.front();
  r.items.push_back(i3);

  const d4::ReconstructionReport rec = d4::check_reconstruction(t, a, T);
  ReportItem i4 = item("P_l and Q_k reconstruct the expansion of f", rec.p_route && rec.q_route);
  i4.data["cutoff"] = rec.cutoff;
  i4.data["p_route"] = rec.p_route;
  i4.data["q_route"] = rec.q_route;
  r.items.push_back(i4);

  ReportItem i5 = item("P_l term counts", true);
  i5.diagnostic = true;
  for (int l = 0; l <= std::min(T, 8); ++l) i5.data["P_" + std::to_string(l)] = t.P(l).terms().size();
  r.items.push_back(i5);
  return r;
}

Report verify_series(const RunConfig& c) {
  Report r;
  const fq::FieldSpec F = fq::build_field(c.p, c.ext_degree);
  mds::Engine E(F, std::max(c.n_max, 6), c.threads);
  const mds::FormalShape shape{c.n_max, c.n_max, c.n_max + 2};

  const std::vector<mds::TwistSpec> twists = mds::enumerate_twists(F, 2);
  ReportItem tr = item("three expressions agree for every twist with deg c <= 2", true);
  long buckets = 0;
  for (const auto& t : twists) {
    const mds::RouteReport rep = mds::check_triple_route(E, t, shape);
    buckets += rep.buckets;
    if (!rep.pass && tr.pass) {
      tr.pass = false;
      tr.witness = mds::describe(F, t) + " " + rep.detail;
    }
  }
  tr.data["twists"] = twists.size();
  tr.data["buckets"] = buckets;
  tr.data["k_max"] = shape.k_max;
  tr.data["n_max"] = shape.n_max;
  r.items.push_back(tr);

  const mds::FormalTable ex = mds::explicit_formal(c.q, shape);
  ReportItem un = item("untwisted buckets equal the explicit rational function", true);
  for (auto route : {mds::Route::vers0, mds::Route::vers1, mds::Route::vers2}) {
    const std::string d = mds::formal_coefficients(E, mds::TwistSpec{}, route, shape).first_difference(ex);
    if (!d.empty() && un.pass) {
      un.pass = false;
      un.witness = mds::route_name(route) + " " + d;
    }
  }
  r.items.push_back(un);

  const int center_n = std::min(6, E.max_deg());
  const mds::SeriesTable zc = mds::zc_coefficients(E, mds::TwistSpec{}, center_n);
  const std::vector<QuadValue> oracle = mds::explicit_center_series(c.q, center_n);
  ReportItem ce = item("central series equals Z(q^-1/2, q^-1/2, q^-1/2, t)", true);
  for (int n = 0; n <= center_n; ++n) {
    ce.data["t^" + std::to_string(n)] = quad_json(zc.coeffs[n], c.precision);
    if (zc.coeffs[n] != oracle[n] && ce.pass) {
      ce.pass = false;
      ce.witness = "t^" + std::to_string(n) + ": " + zc.coeffs[n].str() + " vs " + oracle[n].str();
    }
  }
  r.items.push_back(ce);

  for (bool a2 : {false, true}) {
    const int total = std::min(5, c.n_max + 1);
    const mds::SieveReport s = mds::check_sieve_identity(E, a2, total);
    ReportItem si = item(std::string("sieve identity, a2 = ") + (a2 ? "theta0" : "1"), s.pass);
    si.data["total_max"] = total;
    si.data["moduli"] = s.moduli;
    si.data["buckets"] = s.buckets;
    si.witness = s.detail;
    r.items.push_back(si);
  }

  const std::vector<std::pair<std::string, fq::Poly>> hs{
      {"x", linear(F, 0)}, {"x(x+1)", fq::mul(F, linear(F, 0), linear(F, 1))}};
  for (const auto& [label, h] : hs)
    for (bool a2 : {false, true}) {
      const int n = std::min(E.max_deg(), c.n_max + 1);
      const mds::FundamentalReport f = mds::check_fundamental_decomposition(E, h, a2, n);
      ReportItem fi = item("fundamental decomposition, h = " + label + ", a2 = " + (a2 ? "theta0" : "1"), f.pass);
      fi.data["n_max"] = n;
      fi.data["terms"] = f.terms;
      fi.witness = f.detail;
      r.items.push_back(fi);
    }
  return r;
}

Report gamma(const RunConfig& c) {
  Report r;
  const std::vector<mds::GammaData> rows = mds::gamma_table(c.q);
  for (const auto& g : rows) {
    ReportItem it = item(std::string("Gamma(") + (g.a2_theta ? "theta0" : "1") + ", i^" + std::to_string(g.rho) + ")",
                         g.match);
    it.data["value"] = quartic_json(g.value, c.precision);
    it.data["tabulated"] = quartic_json(g.tabulated, c.precision);
    r.items.push_back(it);
  }
  ReportItem d = item("four distinct values", mds::distinct_gamma_values(rows) == 4);
  d.data["distinct"] = mds::distinct_gamma_values(rows);
  r.items.push_back(d);
  return r;
}

Report residues(const RunConfig& c) {
  Report r;
  const fq::FieldSpec F = fq::build_field(c.p, c.ext_degree);
  mds::Engine E(F, 4, c.threads);
  rings::EqualityMode mode;
  mode.trials = c.trials;
  mode.seed = c.seed;
  const mds::ResidueW1Report w = mds::check_residue_w1(E, mode);
  ReportItem a = item("w = 1 residue identities", w.part1 && w.part2 && w.origin && w.twist_sign);
  a.data["part1"] = w.part1;
  a.data["part2"] = w.part2;
  a.data["origin"] = w.origin;
  a.data["twist_sign"] = w.twist_sign;
  a.witness = w.detail;
  r.items.push_back(a);

  ReportItem b = item("closed form equals the S-sum for every twist with a1 = 1, deg c <= 2", true);
  long n = 0;
  for (const auto& t : mds::enumerate_twists(F, 2)) {
    if (t.a1_theta) continue;
    for (int rho = 0; rho < 4; ++rho) {
      ++n;
      if (mds::residue_closed_form(E, t, rho) != mds::residue_s_sum(E, t, rho) && b.pass) {
        b.pass = false;
        b.witness = mds::describe(F, t) + " rho=i^" + std::to_string(rho);
      }
    }
  }
  b.data["cases"] = n;
  r.items.push_back(b);

  for (bool a2 : {false, true})
    for (int rho = 0; rho < 4; ++rho) {
      mds::TwistSpec t;
      t.a2_theta = a2;
      const QuarticValue cf = mds::residue_closed_form(E, t, rho), ex = mds::residue_explicit(c.q, a2, rho);
      ReportItem it = item(std::string("c = 1 residue, a2 = ") + (a2 ? "theta0" : "1") + ", rho = i^" +
                               std::to_string(rho),
                           cf == ex);
      it.data["closed_form"] = quartic_json(cf, c.precision);
      it.data["explicit"] = quartic_json(ex, c.precision);
      r.items.push_back(it);
    }
  return r;
}

Report residue_z0(const RunConfig& c) {
  Report r;
  const fq::FieldSpec F = fq::build_field(c.p, c.ext_degree);
  mds::Engine E(F, std::max(1, c.h_deg_max), c.threads);
  for (int rho = 0; rho < 4; ++rho) {
    const mds::Z0Report z = mds::residue_z0_three_quarters(E, false, rho, c.h_deg_max, c.prod_deg_max);
    ReportItem it = item("h-sum and Euler product, rho = i^" + std::to_string(rho), z.agree && z.tails_monotone);
    it.data["theta_prime"] = (rho & 1) ? "theta0" : "1";
    it.data["max_ratio"] = z.max_ratio;
    it.data["tails_monotone"] = z.tails_monotone;
    auto rows = [&](const std::vector<mds::Z0Row>& v) {
      ordered_json a = ordered_json::array();
      for (const auto& row : v)
        a.push_back({{"trunc", row.trunc},
                     {"value", rings::format_complex(row.value, c.precision)},
                     {"tail_bound", row.tail_bound}});
      return a;
    };
    it.data["h_route"] = rows(z.h_route);
    it.data["p_route"] = rows(z.p_route);
    it.witness = z.agree && z.tails_monotone ? "" : z.detail;
    r.items.push_back(it);
  }
  return r;
}

Report moments(const RunConfig& c) {
  Report r;
  const fq::FieldSpec F = fq::build_field(c.p, c.ext_degree);
  const asymptotics::MomentCache cache(c.cache_dir);
  const asymptotics::MomentTable m = asymptotics::fill_moments(F, c.d_min, c.d_max, c.threads, &cache);
  const int sieve_max = std::min(c.d_max, 5);
  std::unique_ptr<mds::Engine> E;
  if (c.d_min <= sieve_max) E = std::make_unique<mds::Engine>(F, std::max(1, sieve_max), c.threads);
  const QuadValue zeta = (QuadValue(c.q, 1) - QuadValue::sqrt_q(c.q)).inverse();
  for (const auto& [D, v] : m.entries) {
    bool pass = true;
    ReportItem it = item("S(" + std::to_string(D) + ")", true);
    it.data["value"] = quad_json(v, c.precision);
    it.data["hash"] = asymptotics::MomentCache::content_hash(c.q, D, v);
    if (D == 0) {
      pass = v == zeta.pow(3);
      it.data["check"] = "S(0) = zeta(1/2)^3";
    } else if (D == 1) {
      pass = v == QuadValue(c.q, c.q);
      it.data["check"] = "S(1) = q";
    }
    if (E && D <= sieve_max) {
      const bool sv = asymptotics::moment_by_sieve(*E, D) == v;
      it.data["sieve_reconstruction"] = sv;
      pass = pass && sv;
    }
    it.pass = pass;
    if (!pass) it.witness = "D=" + std::to_string(D);
    std::cerr << "S(" << D << ") " << (m.from_cache.at(D) ? "read from cache" : "computed") << "\n";
    r.items.push_back(it);
  }
  return r;
}

Report rterm(const RunConfig& c) {
  Report r;
  for (int D = c.d_min; D <= c.d_max; ++D) {
    const asymptotics::RTerm t = asymptotics::r_term(c.q, D, c.prod_deg_max);
    const rings::real_t diff = abs(t.value - t.residue_route);
    const bool agree = diff <= t.tail_bound + rings::real_t(1e-40) * (1 + abs(t.value));
    ReportItem it = item("R(" + std::to_string(D) + ", q)", t.brackets_match && agree);
    it.data["value"] = real_string(t.value, c.precision);
    it.data["residue_route"] = real_string(t.residue_route, c.precision);
    it.data["tail_bound"] = real_string(t.tail_bound, 6);
    it.data["brackets_match"] = t.brackets_match;
    if (!it.pass) it.witness = t.detail;
    r.items.push_back(it);
  }
  return r;
}

Report bounds(const RunConfig& c) {
  Report r;
  std::vector<long> qs{5, 9, 13, 17, 25, 29};
  if (std::find(qs.begin(), qs.end(), c.q) == qs.end()) qs.push_back(c.q);
  asymptotics::BoundGrid grid;
  grid.threads = c.threads;
  grid.t_samples = 32;
  const asymptotics::BoundSuiteReport b = asymptotics::bound_suite(qs, grid);
  for (const auto& x : b.items) {
    ReportItem it = item(x.name, x.pass);
    it.data["worst"] = x.worst;
    it.data["detail"] = x.detail;
    if (!x.pass) it.witness = x.detail;
    r.items.push_back(it);
  }
  ReportItem k = item("(1 + 7/q + 7/q^2 + 1/q^3)/(1 - 1/q)^8 at q = 5", true);
  k.diagnostic = true;
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << static_cast<double>(asymptotics::f_odd_constant(5));
  k.data["value"] = os.str();
  r.items.push_back(k);
  return r;
}

Report report_secondary(const RunConfig& c) {
  Report r;
  const fq::FieldSpec F = fq::build_field(c.p, c.ext_degree);
  const asymptotics::MomentCache cache(c.cache_dir);
  const asymptotics::MomentTable m = asymptotics::fill_moments(F, 0, c.d_max, c.threads, &cache);
  const asymptotics::SecondaryReport s = asymptotics::secondary_term_report(c.q, m.entries, c.prod_deg_max);
  ReportItem it = item("secondary-term diagnostics", true);
  it.diagnostic = true;
  it.data["fitted"] = s.fitted;
  it.data["lines"] = s.lines;
  it.data["growth"] = s.growth;
  it.data["w_partial"] = s.w_partial;
  ordered_json fits = ordered_json::array();
  for (const auto& f : s.fits)
    fits.push_back({{"degree", f.degree},
                    {"with_r_term", f.with_r_term},
                    {"rms_residual", f.rms_residual},
                    {"pivot_ratio", f.condition}});
  it.data["fits"] = fits;
  r.items.push_back(it);
  return r;
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void flatten(const std::string& prefix, const ordered_json& j, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(prefix.empty() ? k : prefix + "." + k, v, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(prefix + "[" + std::to_string(i) + "]", j[i], out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return r + "\"";
}

}  // namespace

void resolve_field(RunConfig& cfg, long q, int ext_degree) {
  if (q < 3) throw cli_error("invalid q = " + std::to_string(q));
  for (int e = 1; e <= 30; ++e) {
    if (ext_degree > 0 && e != ext_degree) continue;
    long p = std::lround(std::pow(static_cast<double>(q), 1.0 / e));
    for (long cand = std::max(2L, p - 1); cand <= p + 1; ++cand) {
      long v = 1;
      for (int i = 0; i < e && v <= q; ++i) v *= cand;
      if (v == q && is_odd_prime(cand)) {
        cfg.q = q;
        cfg.p = static_cast<int>(cand);
        cfg.ext_degree = e;
        fq::build_field(cfg.p, cfg.ext_degree);  // validates q = 1 (mod 4) and the size limit
        return;
      }
    }
  }
  throw cli_error("invalid q = " + std::to_string(q) + ": not a power of an odd prime" +
                  (ext_degree > 0 ? " with extension degree " + std::to_string(ext_degree) : std::string()));
}

RunConfig profile_defaults(const std::string& profile) {
  RunConfig c;
  c.profile = profile;
  if (profile == "quick") return c;
  if (profile == "full") {
    c.cutoff = 12;
    c.n_max = 6;
    c.d_max = 9;
    c.h_deg_max = 5;
    c.prod_deg_max = 12;
    c.trials = 48;
    return c;
  }
  throw cli_error("unknown profile " + profile);
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"verify-cg", "extract", "verify-series", "gamma", "residues",
                                              "residue-z0", "moments", "rterm", "bounds", "report-secondary"};
  return names;
}

Report run(const std::string& subcommand, const RunConfig& cfg) {
  if (cfg.precision < 1 || cfg.precision > 90) throw cli_error("precision must lie in 1..90 digits");
  if (cfg.d_min < 0 || cfg.d_min > cfg.d_max) throw cli_error("invalid moment range");
  Report r;
  if (subcommand == "verify-cg") r = verify_cg(cfg);
  else if (subcommand == "extract") r = extract(cfg);
  else if (subcommand == "verify-series") r = verify_series(cfg);
  else if (subcommand == "gamma") r = gamma(cfg);
  else if (subcommand == "residues") r = residues(cfg);
  else if (subcommand == "residue-z0") r = residue_z0(cfg);
  else if (subcommand == "moments") r = moments(cfg);
  else if (subcommand == "rterm") r = rterm(cfg);
  else if (subcommand == "bounds") r = bounds(cfg);
  else if (subcommand == "report-secondary") r = report_secondary(cfg);
  else throw cli_error("unknown subcommand " + subcommand);
  r.command = subcommand;
  r.config = config_json(cfg);
  r.timestamp = now_utc();
  bool fail = false, all_diag = !r.items.empty();
  for (auto& it : r.items) {
    if (!it.diagnostic) all_diag = false;
    if (!it.pass && !it.diagnostic) {
      fail = true;
      if (it.witness.empty()) it.witness = it.name;
      it.data["repro"] = repro(subcommand, cfg);
    }
    if (it.pass) it.witness.clear();
  }
  r.status = fail ? "fail" : all_diag ? "diagnostic" : "pass";
  return r;
}

int exit_code(const Report& r) { return r.status == "fail" ? 1 : 0; }

ordered_json config_json(const RunConfig& c) {
  return {{"version", kVersion},     {"profile", c.profile},       {"q", c.q},
          {"p", c.p},                {"ext_degree", c.ext_degree}, {"cutoff", c.cutoff},
          {"n_max", c.n_max},        {"d_min", c.d_min},           {"d_max", c.d_max},
          {"h_deg_max", c.h_deg_max}, {"prod_deg_max", c.prod_deg_max}, {"trials", c.trials},
          {"seed", std::to_string(c.seed)}, {"threads", c.threads}, {"cache_dir", c.cache_dir},
          {"format", c.format},      {"precision", c.precision}};
}

std::string rational_string(const Q& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }

ordered_json quad_json(const QuadValue& x, int digits) {
  return {{"a", rational_string(x.a())},
          {"b", rational_string(x.b())},
          {"basis", "a + b sqrt(" + std::to_string(x.q()) + ")"},
          {"numeric", rings::format_real(rings::tower_eval(x), digits)}};
}

ordered_json quartic_json(const QuarticValue& x, int digits) {
  ordered_json coords = ordered_json::array();
  for (int j = 0; j < 4; ++j)
    for (bool im : {false, true}) coords.push_back(rational_string(x.coord(j, im)));
  return {{"coords", coords},
          {"basis", "q^(j/4) * {1, i}, j = 0..3"},
          {"numeric", rings::format_complex(rings::tower_eval(x), digits)}};
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["command"] = r.command;
    j["status"] = r.status;
    j["version"] = kVersion;
    j["timestamp"] = r.timestamp;
    j["config"] = r.config;
    ordered_json items = ordered_json::array();
    for (const auto& it : r.items) {
      ordered_json o;
      o["name"] = it.name;
      o["pass"] = it.pass;
      if (it.diagnostic) o["diagnostic"] = true;
      o["data"] = it.data;
      if (!it.witness.empty()) o["witness"] = it.witness;
      items.push_back(o);
    }
    j["items"] = items;
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream os;
    os << "command,item,pass,key,value\n";
    for (const auto& it : r.items) {
      std::vector<std::pair<std::string, std::string>> kv;
      flatten("", it.data, kv);
      if (!it.witness.empty()) kv.emplace_back("witness", it.witness);
      if (kv.empty()) kv.emplace_back("", "");
      for (const auto& [k, v] : kv)
        os << r.command << "," << csv_field(it.name) << "," << (it.pass ? "true" : "false") << "," << csv_field(k)
           << "," << csv_field(v) << "\n";
    }
    return os.str();
  }
  if (format == "text") {
    std::ostringstream os;
    os << r.command << ": " << r.status << " (mdsforge " << kVersion << ", q = " << r.config.value("q", 0L) << ")\n";
    for (const auto& it : r.items) {
      os << (it.diagnostic ? "INFO " : it.pass ? "PASS " : "FAIL ") << it.name << "\n";
      std::vector<std::pair<std::string, std::string>> kv;
      flatten("", it.data, kv);
      for (const auto& [k, v] : kv) os << "     " << k << " = " << v << "\n";
      if (!it.witness.empty()) os << "     witness: " << it.witness << "\n";
    }
    return os.str();
  }
  throw cli_error("unknown format " + format + " (json | csv | text)");
}

}  // namespace mdsforge::cli
