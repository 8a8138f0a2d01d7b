#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mdsforge/cli.hpp"

using namespace mdsforge;

namespace {

// "a..b" or "b"; a single value is the range b..b.
void parse_range(const std::string& s, int& lo, int& hi) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, dots));
      hi = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw cli::cli_error("invalid range " + s + " (expected a..b)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdsforge: exact verification of the cubic-moment multiple Dirichlet series over F_q[x]"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", cli::kVersion);

  std::string profile = "quick";
  std::optional<long> q;
  std::optional<int> ext, cutoff, n_max, d_max, h_deg, prod_deg, trials, threads, precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> cache_dir, format, d_range;
  bool quick = false, full = false;

  app.add_option("--profile", profile, "quick | full")->envname("MDSFORGE_PROFILE");
  app.add_flag("--quick", quick, "same as --profile quick");
  app.add_flag("--full", full, "same as --profile full");
  app.add_option("--q", q, "field size q = p^e, q = 1 (mod 4)")->envname("MDSFORGE_Q");
  app.add_option("--ext-degree", ext, "e in q = p^e (inferred when omitted)")->envname("MDSFORGE_EXT_DEGREE");
  app.add_option("--cutoff", cutoff, "total degree of the a-table")->envname("MDSFORGE_CUTOFF");
  app.add_option("--n-max", n_max, "t-degree of formal and central series")->envname("MDSFORGE_N_MAX");
  app.add_option("--d-max", d_max, "largest moment degree D")->envname("MDSFORGE_D_MAX");
  app.add_option("--D", d_range, "moment degrees as a..b")->envname("MDSFORGE_D");
  app.add_option("--h-deg-max", h_deg, "h-route truncation degree")->envname("MDSFORGE_H_DEG_MAX");
  app.add_option("--prod-deg-max", prod_deg, "Euler-product truncation degree")->envname("MDSFORGE_PROD_DEG_MAX");
  app.add_option("--trials", trials, "sample points for randomized identity checks")->envname("MDSFORGE_TRIALS");
  app.add_option("--seed", seed, "RNG seed")->envname("MDSFORGE_SEED");
  app.add_option("--threads", threads, "worker count (0: all cores)")->envname("MDSFORGE_THREADS");
  app.add_option("--cache-dir", cache_dir, "moment cache directory")->envname("MDSFORGE_CACHE_DIR");
  app.add_option("--format", format, "json | csv | text")->envname("MDSFORGE_FORMAT");
  app.add_option("--precision", precision, "digits in numeric renderings")->envname("MDSFORGE_PRECISION");
  app.fallthrough();

  std::string chosen;
  for (const std::string& name : cli::subcommands())
    app.add_subcommand(name)->fallthrough()->callback([&chosen, name] { chosen = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (quick && full) throw cli::cli_error("--quick and --full are exclusive");
    if (quick) profile = "quick";
    if (full) profile = "full";
    cli::RunConfig cfg = cli::profile_defaults(profile);
    cli::resolve_field(cfg, q.value_or(cfg.q), ext.value_or(0));
    if (cutoff) cfg.cutoff = *cutoff;
    if (n_max) cfg.n_max = *n_max;
    if (d_max) cfg.d_max = *d_max;
    if (d_range) parse_range(*d_range, cfg.d_min, cfg.d_max);
    if (h_deg) cfg.h_deg_max = *h_deg;
    if (prod_deg) cfg.prod_deg_max = *prod_deg;
    if (trials) cfg.trials = *trials;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (cache_dir) cfg.cache_dir = *cache_dir;
    if (format) cfg.format = *format;
    if (precision) cfg.precision = *precision;
    const cli::Report r = cli::run(chosen, cfg);
    std::cout << cli::render(r, cfg.format);
    return cli::exit_code(r);
  } catch (const std::exception& e) {
    std::cerr << "mdsforge: " << e.what() << "\n";
    return 2;
  }
}
