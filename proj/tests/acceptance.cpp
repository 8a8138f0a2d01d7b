// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "mdsforge/asymptotics.hpp"
#include "mdsforge/cg.hpp"
#include "mdsforge/d4.hpp"
#include "mdsforge/mds.hpp"

using namespace mdsforge;
using rings::Q;
using rings::QuadValue;
using rings::QuarticValue;

namespace {

struct Profile {
  bool full = false;
  int cg_trials = 24;
  int a_cutoff = 10;
  int center_n = 6;
  mds::FormalShape route_shape{4, 4, 8};
  int moment_d_max = 8;
  int threads = 0;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += " (time limit " + std::to_string(static_cast<int>(limit_seconds)) + "s exceeded)";
  }
  if (!o.pass) ++failures;
  std::cout << "CRITERION " << std::setw(2) << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << "  ["
            << std::fixed << std::setprecision(1) << secs << "s]";
  if (!o.detail.empty()) std::cout << "  " << o.detail;
  std::cout << std::endl;
}

std::string fmt(const char* f, long a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fq::Poly lin(const fq::FieldSpec& F, long a) { return fq::poly_from_ints(F, {a, 1}); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  Profile prof;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--profile") && i + 1 < argc) {
      const std::string v = argv[++i];
      if (v == "full") prof.full = true;
      else if (v != "quick") {
        std::cerr << "unknown profile " << v << "\n";
        return 2;
      }
    } else if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      prof.threads = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--profile quick|full] [--threads N]\n";
      return 2;
    }
  }
  if (prof.full) {
    prof.cg_trials = 48;
    prof.a_cutoff = 12;
    prof.route_shape = {5, 4, 9};
    prof.moment_d_max = 9;
  }
  std::cout << "mdsforge acceptance, profile " << (prof.full ? "full" : "quick") << std::endl;

  const fq::FieldSpec F5 = fq::build_field(5, 1);
  mds::Engine E5(F5, 6, prof.threads);

  criterion(1, "D4 Weyl average equals the explicit rational function", 300, [&] {
    cg::VerifyOptions opt;
    opt.trials = prof.cg_trials;
    opt.seed = 20240601;
    const rings::EqualityResult r = cg::verify_against_explicit(d4::explicit_f(), opt);
    const rings::EqualityResult bad = cg::verify_against_explicit(d4::perturbed_f(5, 1), opt);
    Outcome o;
    o.pass = r.equal && !r.inconclusive && r.trials >= 20 && !bad.equal;
    o.detail = r.mode + ", " + std::to_string(r.trials) + " points, seed " + std::to_string(r.seed) +
               (bad.equal ? ", mutated f NOT rejected" : ", mutated f rejected");
    return o;
  });

  const d4::ACoeffTable atab(prof.a_cutoff);
  criterion(2, "a(k,0) = a(0,l) = 1 and odd-l vanishing", 0, [&] {
    Outcome o;
    const int T = prof.a_cutoff;
    long n = 0;
    for (int k1 = 0; k1 <= T; ++k1)
      for (int k2 = 0; k1 + k2 <= T; ++k2)
        for (int k3 = 0; k1 + k2 + k3 <= T; ++k3) {
          if (atab.a(k1, k2, k3, 0) != rings::ParamPoly(1)) o.pass = false;
          for (int l = 1; k1 + k2 + k3 + l <= T; l += 2)
            if ((k1 + k2 + k3) & 1) {
              ++n;
              if (!atab.a(k1, k2, k3, l).is_zero()) o.pass = false;
            }
        }
    for (int l = 0; l <= T; ++l)
      if (atab.a(0, 0, 0, l) != rings::ParamPoly(1)) o.pass = false;
    o.detail = "total <= " + std::to_string(T) + ", " + std::to_string(n) + " odd coefficients";
    return o;
  });

  d4::PQTable pq;
  criterion(3, "P/Q functional equations (l, |k| <= 8) and reconstruction", 0, [&] {
    const d4::FeReport fe = d4::check_pq_functional_eqs(pq, 8, 8);
    const d4::ReconstructionReport rec = d4::check_reconstruction(pq, atab, prof.a_cutoff);
    Outcome o;
    o.pass = fe.pass && rec.p_route && rec.q_route;
    o.detail = std::to_string(fe.checked) + " functional equations, reconstruction to cutoff " +
               std::to_string(rec.cutoff) + (rec.p_route ? "" : " [P-route mismatch]") +
               (rec.q_route ? "" : " [Q-route mismatch]");
    if (!fe.pass) o.detail += " first failure: " + fe.failures.front();
    return o;
  });

  criterion(4, "central series equals the explicit function at q = 5 and q = 9", 0, [&] {
    Outcome o;
    const int n = prof.center_n;
    const mds::SeriesTable s5 = mds::zc_coefficients(E5, mds::TwistSpec{}, n);
    const std::vector<QuadValue> o5 = mds::explicit_center_series(5, n);
    const fq::FieldSpec F9 = fq::build_field(3, 2);
    mds::Engine E9(F9, n, prof.threads);
    const mds::SeriesTable s9 = mds::zc_coefficients(E9, mds::TwistSpec{}, n);
    const std::vector<QuadValue> o9 = mds::explicit_center_series(9, n);
    for (int j = 0; j <= n; ++j) {
      if (s5.coeffs[j] != o5[j] && o.pass) {
        o.pass = false;
        o.detail = "q=5 t^" + std::to_string(j) + ": " + s5.coeffs[j].str() + " vs " + o5[j].str();
      }
      if (s9.coeffs[j] != o9[j] && o.pass) {
        o.pass = false;
        o.detail = "q=9 t^" + std::to_string(j) + ": " + s9.coeffs[j].str() + " vs " + o9[j].str();
      }
    }
    if (o.pass) o.detail = "n <= " + std::to_string(n) + ", t^" + std::to_string(n) + " at q=5: " + s5.coeffs[n].str();
    return o;
  });

  criterion(5, "three expressions agree for all twists with deg c <= 2 (q = 5)", 0, [&] {
    Outcome o;
    const std::vector<mds::TwistSpec> tw = mds::enumerate_twists(F5, 2);
    long buckets = 0;
    for (const auto& t : tw) {
      const mds::RouteReport r = mds::check_triple_route(E5, t, prof.route_shape);
      buckets += r.buckets;
      if (!r.pass && o.pass) {
        o.pass = false;
        o.detail = mds::describe(F5, t) + ": " + r.detail;
      }
    }
    const mds::FormalTable ex = mds::explicit_formal(5, prof.route_shape);
    const std::string d = mds::formal_coefficients(E5, mds::TwistSpec{}, mds::Route::vers0, prof.route_shape)
                              .first_difference(ex);
    if (!d.empty() && o.pass) {
      o.pass = false;
      o.detail = "c = 1 against the explicit function: " + d;
    }
    if (o.pass)
      o.detail = std::to_string(tw.size()) + " twists, " + std::to_string(buckets) + " buckets per route, |k| <= " +
                 std::to_string(prof.route_shape.k_max) + ", n <= " + std::to_string(prof.route_shape.n_max);
    return o;
  });

  criterion(6, "sieve identity at total <= 5, q = 5, both a2", 0, [&] {
    Outcome o;
    int moduli = 0;
    for (bool a2 : {false, true}) {
      const mds::SieveReport r = mds::check_sieve_identity(E5, a2, 5);
      moduli = r.moduli;
      if (!r.pass && o.pass) {
        o.pass = false;
        o.detail = std::string("a2=") + (a2 ? "theta0 " : "1 ") + r.detail;
      }
    }
    if (o.pass) o.detail = std::to_string(moduli) + " square-free h per a2";
    return o;
  });

  criterion(7, "fundamental decomposition for h = x and h = x(x+1), q = 5", 0, [&] {
    Outcome o;
    const std::vector<std::pair<std::string, fq::Poly>> hs{{"x", lin(F5, 0)},
                                                           {"x(x+1)", fq::mul(F5, lin(F5, 0), lin(F5, 1))}};
    for (const auto& [label, h] : hs)
      for (bool a2 : {false, true}) {
        const mds::FundamentalReport r = mds::check_fundamental_decomposition(E5, h, a2, 5);
        if (!r.pass && o.pass) {
          o.pass = false;
          o.detail = "h=" + label + (a2 ? " a2=theta0 " : " a2=1 ") + r.detail;
        }
      }
    if (o.pass) o.detail = "t-degree <= 5, both a2";
    return o;
  });

  criterion(8, "Gamma table: 8 rows exact, 4 distinct values", 0, [&] {
    Outcome o;
    const std::vector<mds::GammaData> rows = mds::gamma_table(5);
    int ok = 0;
    for (const auto& r : rows) ok += r.match;
    o.pass = rows.size() == 8 && ok == 8 && mds::distinct_gamma_values(rows) == 4;
    o.detail = std::to_string(ok) + "/8 rows match, " + std::to_string(mds::distinct_gamma_values(rows)) + " distinct";
    return o;
  });

  criterion(9, "residues: w = 1 identities, closed form vs S-sum, c = 1 direct residue", 0, [&] {
    Outcome o;
    const mds::ResidueW1Report w = mds::check_residue_w1(E5, rings::EqualityMode{});
    if (!(w.part1 && w.part2 && w.origin && w.twist_sign)) {
      o.pass = false;
      o.detail = "(a) " + w.detail;
    }
    long cases = 0;
    for (const auto& t : mds::enumerate_twists(F5, 2)) {
      if (t.a1_theta) continue;
      for (int rho = 0; rho < 4; ++rho) {
        ++cases;
        if (mds::residue_closed_form(E5, t, rho) != mds::residue_s_sum(E5, t, rho) && o.pass) {
          o.pass = false;
          o.detail = "(b) " + mds::describe(F5, t) + " rho=i^" + std::to_string(rho);
        }
      }
    }
    for (bool a2 : {false, true})
      for (int rho = 0; rho < 4; ++rho) {
        mds::TwistSpec t;
        t.a2_theta = a2;
        if (mds::residue_closed_form(E5, t, rho) != mds::residue_explicit(5, a2, rho) && o.pass) {
          o.pass = false;
          o.detail = std::string("(c) a2=") + (a2 ? "theta0" : "1") + " rho=i^" + std::to_string(rho);
        }
      }
    if (o.pass) o.detail = "(a) exact, (b) " + std::to_string(cases) + " twist/rho cases, (c) 8 cases";
    return o;
  });

  criterion(10, "h-sum and Euler product agree within tail bounds (q = 5, h <= 4, p <= 8)", 1800, [&] {
    Outcome o;
    std::ostringstream os;
    for (int rho = 0; rho < 4; ++rho) {
      const mds::Z0Report z = mds::residue_z0_three_quarters(E5, false, rho, 4, 8);
      if (!(z.agree && z.tails_monotone)) {
        o.pass = false;
        os << "rho=i^" << rho << ": " << z.detail << "; ";
      } else {
        os << "rho=i^" << rho << " max ratio " << std::setprecision(3) << z.max_ratio << "; ";
      }
    }
    o.detail = os.str();
    return o;
  });

  criterion(11, "inequality suite with zero violations", 900, [&] {
    asymptotics::BoundGrid grid;
    grid.threads = prof.threads;
    grid.t_samples = 32;
    const asymptotics::BoundSuiteReport b = asymptotics::bound_suite({5, 9, 13, 17, 25, 29}, grid);
    Outcome o;
    int bad = 0;
    for (const auto& it : b.items)
      if (!it.pass) {
        ++bad;
        if (o.detail.empty()) o.detail = "first violation: " + it.name + " " + it.detail;
      }
    std::ostringstream k;
    k << std::fixed << std::setprecision(4) << static_cast<double>(asymptotics::f_odd_constant(5));
    const bool constant_ok = k.str() == "16.0217";
    o.pass = b.pass && bad == 0 && constant_ok;
    if (o.detail.empty())
      o.detail = std::to_string(b.items.size()) + " checks, 0 violations, odd constant at q = 5: " + k.str();
    return o;
  });

  criterion(12, "moments: S(0), S(1), sieve reconstruction, cache, secondary report", 0, [&] {
    Outcome o;
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "mdsforge_acceptance_cache";
    std::filesystem::remove_all(dir);
    const asymptotics::MomentCache cache(dir);
    const asymptotics::MomentTable m = asymptotics::fill_moments(F5, 0, prof.moment_d_max, prof.threads, &cache);
    const QuadValue zeta = (QuadValue(5, 1) - QuadValue::sqrt_q(5)).inverse();
    std::ostringstream os;
    if (m.entries.at(0) != zeta.pow(3)) {
      o.pass = false;
      os << "S(0) != zeta(1/2)^3; ";
    }
    if (m.entries.at(1) != QuadValue(5, 5)) {
      o.pass = false;
      os << "S(1) != q; ";
    }
    for (int D = 0; D <= 5; ++D)
      if (asymptotics::moment_by_sieve(E5, D) != m.entries.at(D)) {
        o.pass = false;
        os << "S(" << D << ") differs from the sieve; ";
      }
    const asymptotics::MomentTable again = asymptotics::fill_moments(F5, 0, prof.moment_d_max, prof.threads, &cache);
    for (int D = 0; D <= prof.moment_d_max; ++D) {
      const std::string before = slurp(cache.file_for(5, D));
      const auto e = cache.load(5, D);
      cache.store(*e);
      if (!again.from_cache.at(D) || again.entries.at(D) != m.entries.at(D) || slurp(cache.file_for(5, D)) != before) {
        o.pass = false;
        os << "cache round trip failed at D=" << D << "; ";
      }
    }
    const asymptotics::SecondaryReport s = asymptotics::secondary_term_report(5, m.entries, 8);
    if (s.lines.empty() || s.growth.size() != m.entries.size()) {
      o.pass = false;
      os << "secondary report incomplete; ";
    }
    std::filesystem::remove_all(dir);
    if (o.pass)
      os << "D <= " << prof.moment_d_max << ", S(" << prof.moment_d_max << ") = " << m.entries.at(prof.moment_d_max).str()
         << ", " << s.fits.size() << " fits";
    o.detail = os.str();
    return o;
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : fmt("%ld CRITERIA FAIL", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
