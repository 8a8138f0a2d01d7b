#include "doctest.h"
#include "mdsforge/cli.hpp"

using namespace mdsforge;
using namespace mdsforge::cli;

TEST_CASE("q resolves to p^e and rejects invalid fields") {
  RunConfig c;
  resolve_field(c, 25, 0);
  CHECK(c.p == 5);
  CHECK(c.ext_degree == 2);
  resolve_field(c, 9, 0);
  CHECK(c.p == 3);
  CHECK(c.ext_degree == 2);
  resolve_field(c, 13, 1);
  CHECK(c.p == 13);
  CHECK_THROWS(resolve_field(c, 7, 0));   // q = 3 (mod 4)
  CHECK_THROWS(resolve_field(c, 15, 0));  // not a prime power
  CHECK_THROWS(resolve_field(c, 25, 1));  // wrong extension degree
}

TEST_CASE("profiles and argument validation") {
  CHECK(profile_defaults("full").d_max == 9);
  CHECK(profile_defaults("quick").q == 5);
  CHECK_THROWS_AS(profile_defaults("slow"), cli_error);
  CHECK_THROWS_AS(run("no-such-command", RunConfig{}), cli_error);
  RunConfig bad;
  bad.precision = 0;
  CHECK_THROWS_AS(run("gamma", bad), cli_error);
}

TEST_CASE("exact values serialize as num/den strings") {
  CHECK(rational_string(rings::Q(-3, 4)) == "-3/4");
  CHECK(rational_string(rings::Q(5)) == "5/1");
  const auto j = quad_json(rings::QuadValue(5, rings::Q(1, 2), rings::Q(-1, 8)), 10);
  CHECK(j["a"] == "1/2");
  CHECK(j["b"] == "-1/8");
}

TEST_CASE("gamma report passes, embeds the config and is deterministic") {
  RunConfig c;
  const Report a = run("gamma", c), b = run("gamma", c);
  CHECK(a.status == "pass");
  CHECK(exit_code(a) == 0);
  CHECK(a.items.size() == 9);
  CHECK(a.config["version"] == kVersion);
  CHECK(a.config["q"] == 5);
  Report a2 = a, b2 = b;
  a2.timestamp = b2.timestamp = "";
  CHECK(render(a2, "json") == render(b2, "json"));
  CHECK(render(a, "csv").rfind("command,item,pass,key,value\n", 0) == 0);
  CHECK(render(a, "text").find("PASS Gamma(1, i^0)") != std::string::npos);
  CHECK_THROWS_AS(render(a, "xml"), cli_error);
}

TEST_CASE("a failing item sets the fail status and carries reproducing parameters") {
  Report r;
  r.command = "gamma";
  ReportItem it;
  it.name = "synthetic";
  it.pass = false;
  r.items.push_back(it);
  r.status = "fail";
  CHECK(exit_code(r) == 1);
}
