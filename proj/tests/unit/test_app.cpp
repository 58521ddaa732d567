#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ruinrk/app/commands.hpp"
#include "ruinrk/app/config.hpp"
#include "ruinrk/app/output.hpp"
#include "ruinrk/app/reference.hpp"
#include "ruinrk/errors.hpp"

using namespace ruinrk;
using namespace ruinrk::app;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RUINRK_CLI_PATH) + " --quiet " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("distribution grammar") {
  CHECK(parse_distribution("gamma2:beta=2.4").spec() == "gamma2:beta=2.4");
  CHECK(parse_distribution("pareto:m=3").spec() == "pareto:m=3");
  CHECK(parse_distribution("exponential:beta=0.5").spec() == "exponential:beta=0.5");
  CHECK_THROWS_AS(parse_distribution("gamma2"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gamma2:rate=2"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gamma2:beta=2,beta=3"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gamma2:beta=2,m=1"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("pareto:m=1.5"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("weibull:k=2"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gamma2:beta=-1"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gamma2:beta=x"), ConfigError);
}

TEST_CASE("point lists") {
  CHECK(parse_points("0,0.5,2") == std::vector<double>{0.0, 0.5, 2.0});
  const auto r = parse_points("10:10:100");
  REQUIRE(r.size() == 10);
  CHECK(r.back() == 100.0);
  CHECK(parse_points("0:1:2,7") == std::vector<double>{0.0, 1.0, 2.0, 7.0});
  CHECK_THROWS_AS(parse_points(""), ConfigError);
  CHECK_THROWS_AS(parse_points("1,,2"), ConfigError);
  CHECK_THROWS_AS(parse_points("1:0:3"), ConfigError);
  CHECK_THROWS_AS(parse_points("1:2"), ConfigError);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  c.report = {0.0, 5.0};
  CHECK_NOTHROW(validate(c));

  RunConfig far = c;
  far.report = {11.5};
  try {
    validate(far);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("11.5") != std::string::npos);
  }

  RunConfig wrong = c;
  wrong.method = Method::tsrk4_phl;
  CHECK_THROWS_AS(validate(wrong), ConfigError);
  RunConfig heavy = c;
  heavy.dist = "pareto:m=1";
  heavy.method = Method::tsrk4_g;
  CHECK_THROWS_AS(validate(heavy), ConfigError);
  RunConfig m2 = c;
  m2.method = Method::tsrk6_g;
  CHECK_THROWS_AS(validate(m2), ConfigError);
  RunConfig short_grid = c;
  short_grid.method = Method::tsrk4_g;
  short_grid.u_max = 0.002;
  short_grid.report = {0.0};
  CHECK_THROWS_AS(validate(short_grid), ConfigError);
  RunConfig bad_q = c;
  bad_q.q = 4;
  CHECK_THROWS_AS(validate(bad_q), ConfigError);
  RunConfig bad_theta = c;
  bad_theta.theta = 0.0;
  CHECK_THROWS_AS(validate(bad_theta), ConfigError);

  CHECK(parse_method("tsrk4-improper") == Method::tsrk4_improper);
  CHECK(to_string(Method::rk4_s13) == "rk4-s13");
  CHECK(nominal_order(Method::tsrk6_g) == 6);
  CHECK_THROWS_AS(parse_method("rk5"), ConfigError);
}

TEST_CASE("numbers round-trip through JSON and CSV") {
  RunConfig c;
  c.report = {0.0, 0.1, 1.0 / 3.0, 2.5};
  c.u_max = 3.0;
  c.h = 0.01;
  const CommandResult res = cmd_solve(c);
  REQUIRE(res.status == kExitOk);
  REQUIRE(res.report.rows.size() == 4);

  std::ostringstream js;
  write_json(res.report, js);
  const Json parsed = Json::parse(js.str());
  REQUIRE(parsed.contains("config"));
  REQUIRE(parsed.contains("metadata"));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(parsed["rows"][i]["psi"].get<double>() == res.report.rows[i].psi);
    CHECK(parsed["rows"][i]["u"].get<double>() == res.report.rows[i].u);
    CHECK(parsed["rows"][i]["survival"].get<double>() == 1.0 - res.report.rows[i].psi);
  }

  std::ostringstream cs;
  write_csv(res.report, cs);
  std::istringstream in(cs.str());
  std::string line;
  std::vector<std::string> data;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      CHECK(line == "u,psi,survival,method,h,extra");
      header_seen = true;
      continue;
    }
    data.push_back(line);
  }
  REQUIRE(data.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto cols = split(data[i], ',');
    REQUIRE(cols.size() == 6);
    double psi = 0.0;
    std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), psi);
    CHECK(psi == res.report.rows[i].psi);
    CHECK(cols[3] == "rk4-s13");
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("reference tables carry their tolerances") {
  const ReferenceTable t = load_reference_table(std::filesystem::path(RUINRK_DATA_DIR) / "table3.csv");
  CHECK(t.rows.size() == 30);
  CHECK(t.tolerance("ram_abs_phl") == 5e-4);
  CHECK(t.at(0, "ram") == 0.627128);
  CHECK_THROWS(t.column("nope"));
  const ReferenceTable p = parse_reference_table("# tol a 1e-3\nx,y\n1,2\n");
  CHECK(p.at(0, "y") == 2.0);
  CHECK_THROWS_AS(parse_reference_table("x,y\n1\n"), ConfigError);
}

TEST_CASE("converge needs two step sizes") {
  RunConfig c;
  c.report = {1.0};
  CHECK_THROWS_AS(cmd_converge(c, {0.01}), ConfigError);
}

TEST_CASE("mc check needs paths") {
  RunConfig c;
  c.dist = "pareto:m=1";
  c.theta = 1.0;
  c.method = Method::tsrk4_phl;
  c.h = 0.01;
  c.u_max = 1.0;
  c.report = {1.0};
  McCheckOptions mc;
  mc.n_paths = 0;
  CHECK_THROWS_AS(cmd_mc_check(c, mc), ConfigError);
}

TEST_CASE("command line exit codes") {
  CHECK(run_cli("solve --dist gamma2:beta=2.4 --theta 0.2 --h 0.01 --umax 2 --report 0,1,2") == 0);
  CHECK(run_cli("solve --umax 1 --report 2") == 2);
  CHECK(run_cli("solve --dist pareto:m=1 --method tsrk4-g") == 2);
  CHECK(run_cli("solve --dist bogus:x=1") == 2);
  CHECK(run_cli("solve --no-such-flag") == 2);
  CHECK(run_cli("table 4") == 2);
  CHECK(run_cli("converge --h-list 0.01") == 2);
  CHECK(run_cli("mc-check --dist pareto:m=1 --theta 1 --method tsrk4-phl --h 0.01 --umax 1 --report 1 --paths 0") == 2);
  CHECK(run_cli("solve --method tsrk6-g --m2-coefficients /nonexistent.txt --umax 1 --report 1") == 2);
  // a non-convergent ladder is a tolerance failure
  CHECK(run_cli("converge --dist exponential:beta=1 --method rk4-s13 --umax 1 --report 1 --h-list 0.1,0.1") == 4);
}

TEST_CASE("command line writes files") {
  const auto dir = std::filesystem::temp_directory_path() / "ruinrk_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "solve.json";
  REQUIRE(run_cli("--format json --out " + out.string() + " solve --h 0.01 --umax 1 --report 0.5") == 0);
  std::ifstream in(out);
  const Json j = Json::parse(in);
  CHECK(j["rows"].size() == 1);
  CHECK(j["config"]["method"] == "rk4-s13");
  std::filesystem::remove_all(dir);
}
