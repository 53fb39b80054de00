#include "doctest.h"
#include "cli.hpp"
#include "cli_suite.hpp"
#include "oracles.hpp"

#include <json.hpp>
#include <cstdio>
#include <sstream>

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = shofa::cli::run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("suite exit codes and schema") {
  for (auto& c : clisuite::cases()) {
    CAPTURE(c.name);
    auto r = run(c.args);
    CHECK(r.code == c.exit_code);
    REQUIRE(!r.out.empty());
    auto d = r.doc();
    CHECK(d["schema"] == "sphere-hofa/1");
    CHECK(d["command"] == c.args[0]);
    CHECK(d.contains("params"));
    CHECK_FALSE(d["params"].contains("threads"));
  }
}

TEST_CASE("frozen results") {
  auto count = run({"count", "--prime", "5", "--dim", "3"}).doc()["result"];
  CHECK(count["exact"] == 30);
  CHECK(count["main_term"] == 25);
  auto roots = run({"count", "--json", clisuite::data("count_roots.json")}).doc()["result"];
  oracle::i64 squares = 0;
  oracle::for_all(5, 3, [&](const oracle::Vec& x) { squares += oracle::is_square(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 5); });
  CHECK(roots["quadratic_roots"]["exact"] == squares);
  CHECK(roots["exact"] == 25);
  auto hyper = run({"count", "--json", clisuite::data("count_hyperplane.json")}).doc()["result"];
  CHECK(hyper["exact"] == 30);
  CHECK(hyper["main_term"] == 25);
  auto es = run({"expsum", "--json", clisuite::data("expsum.json")}).doc()["result"];
  CHECK(std::abs(es["abs"].get<double>() - 0.10300) < 1e-5);
  auto gw = run({"gowers", "--json", clisuite::data("gowers.json")}).doc()["result"];
  CHECK(gw["count"] == 900);
  auto ms = run({"mset-repr", "--prime", "7", "--json", clisuite::data("mset_box2.json")}).doc()["result"];
  CHECK(ms["dimension_vector"] == json({1, 1, 2}));
  CHECK(ms["total_codim"] == 4);
  auto w = run({"weyl", "--json", clisuite::data("weyl_sphere.json")}).doc()["result"];
  CHECK(w["branch"] == "constant");
  CHECK(w["value"] == 1.0);
  CHECK(w["certificate_verified"] == true);
  auto eq = run({"equidist", "--freq-budget", "4", "--json", clisuite::data("equidist.json")}).doc()["result"];
  CHECK(eq["verdict"] == "equidistributed");
  auto eq5 = run({"equidist", "--freq-budget", "5", "--json", clisuite::data("equidist.json")});
  CHECK(eq5.code == 1);
  CHECK(eq5.doc()["result"]["verdict"] == "obstructed");
  auto lift = run({"decompose", "--json", clisuite::data("decompose_lift.json")}).doc()["result"];
  CHECK(lift["status"] == "decomposed");
  auto b1 = run({"decompose", "--json", clisuite::data("decompose_basicpp1.json")}).doc()["result"];
  CHECK(b1["verified"] == true);
  auto b2 = run({"decompose", "--json", clisuite::data("decompose_basicpp2.json")}).doc()["result"];
  CHECK(b2["verified"] == true);
}

TEST_CASE("error exit codes") {
  CHECK(run({"count", "--prime", "9"}).code == 2);
  CHECK(run({"count", "--prime", "3"}).code == 2);
  CHECK(run({"count", "--delta", "1.5"}).code == 2);
  auto rank2 = run({"count", "--dim", "2"});
  CHECK(rank2.code == 2);
  CHECK(rank2.err.find("RankHypothesisFailed") != std::string::npos);
  CHECK(run({"nosuch"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count", "--json", clisuite::data("bad.json")}).code == 2);
  CHECK(run({"count", "--json", clisuite::data("missing.json")}).code == 2);
  auto b = run({"count", "--prime", "11", "--dim", "5", "--budget", "1000"});
  CHECK(b.code == 3);
  CHECK(b.err.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("threads do not change output") {
  for (auto& c : clisuite::cases()) {
    CAPTURE(c.name);
    auto a = c.args, b = c.args;
    a.insert(a.end(), {"--threads", "1"});
    b.insert(b.end(), {"--threads", "8"});
    CHECK(run(a).out == run(b).out);
  }
}

TEST_CASE("--out writes the report") {
  std::string path = std::string(SHOFA_TEST_OUT) + "/out_report.json";
  auto r = run({"count", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::remove(path.c_str());
}

}
