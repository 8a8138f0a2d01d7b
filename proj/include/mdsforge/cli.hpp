#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdsforge/rings.hpp"

namespace mdsforge::cli {

inline constexpr const char* kVersion = "0.1.0";

class cli_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  long q = 5;
  int p = 5;
  int ext_degree = 1;
  int cutoff = 10;        // a-table and series total degree
  int n_max = 4;          // formal and central series degree in t
  int d_min = 0;
  int d_max = 5;          // moments S(D)
  int h_deg_max = 4;      // h-route truncation
  int prod_deg_max = 8;   // Euler-product truncation
  int trials = 24;        // randomized identity checks
  std::uint64_t seed = 1;
  int threads = 0;        // 0: hardware concurrency
  std::string cache_dir = "mdsforge-cache";
  std::string format = "json";
  int precision = 50;     // digits in numeric renderings
  std::string profile = "quick";
};

// q = p^e with p an odd prime; ext_degree 0 infers e.
void resolve_field(RunConfig& cfg, long q, int ext_degree);
// Defaults of the named profile (quick or full) for the given q.
RunConfig profile_defaults(const std::string& profile);

struct ReportItem {
  std::string name;
  bool pass = true;
  bool diagnostic = false;  // informational; never fails the run
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  std::string witness;      // set on failure: smallest reproducing parameters
};

struct Report {
  std::string command;
  std::string status;  // pass | fail | diagnostic
  std::vector<ReportItem> items;
  nlohmann::ordered_json config;
  std::string timestamp;
};

const std::vector<std::string>& subcommands();
Report run(const std::string& subcommand, const RunConfig& cfg);
std::string render(const Report& r, const std::string& format);
int exit_code(const Report& r);

nlohmann::ordered_json config_json(const RunConfig& cfg);
// Exact values as "num/den" strings, with numeric renderings at the given precision.
std::string rational_string(const rings::Q& x);
nlohmann::ordered_json quad_json(const rings::QuadValue& x, int digits);
nlohmann::ordered_json quartic_json(const rings::QuarticValue& x, int digits);

}  // namespace mdsforge::cli
