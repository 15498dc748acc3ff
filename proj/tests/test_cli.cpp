#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uprod/cli.hpp"

using uprod::run_cli;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("chw normalize prints the canonical key") {
  CliRun r = cli({"chw", "normalize", "--n", "2", "x2^2 x1"});
  CHECK(r.code == 0);
  CHECK(r.out == "w:1;a:0,-1\n");
}

TEST_CASE("json envelope is stable and parseable") {
  CliRun r = cli({"--json", "chw", "normalize", "--n", "2", "x2^2 x1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "ok");
  CHECK(j["command"] == "chw.normalize");
  CHECK(j["payload"]["key"] == "w:1;a:0,-1");

  CliRun again = cli({"--json", "chw", "normalize", "--n", "2", "x2^2 x1"});
  CHECK(again.out == r.out);  // byte-identical on identical input
}

TEST_CASE("exit codes: domain errors are 1, usage errors are 2") {
  CliRun bad_word = cli({"chw", "normalize", "--n", "2", "x3"});
  CHECK(bad_word.code == 1);
  CHECK(bad_word.err.find("error") != std::string::npos);

  CliRun bad_cmd = cli({"frobnicate"});
  CHECK(bad_cmd.code == 2);

  CliRun no_args = cli({});
  CHECK(no_args.code == 2);

  CliRun json_err = cli({"--json", "chw", "normalize", "--n", "2", "x9"});
  CHECK(json_err.code == 1);
  auto j = nlohmann::json::parse(json_err.out);
  CHECK(j["status"] == "error");
}

TEST_CASE("chw subcommands") {
  CHECK(cli({"chw", "mul", "--n", "2", "x1", "x1"}).out == "w:;a:1,0\n");
  CHECK(cli({"chw", "inv", "--n", "2", "x1^-1"}).out == "w:1;a:0,0\n");
  CHECK(cli({"chw", "pow", "--n", "2", "x1", "2"}).out == "w:;a:1,0\n");
  CHECK(cli({"chw", "comm", "--n", "2", "x1", "x2^2"}).out == "w:;a:0,-2\n");
  CHECK(cli({"chw", "embed", "--m", "2", "--n", "3", "x1 x2"}).out == "w:1.2;a:0,0,0\n");
  CHECK(cli({"chw", "relators", "--n", "6"}).out ==
        "checked 30 relators: all reduce to identity\n");
  CHECK(cli({"chw", "project", "--n", "2", "x1 x2^3"}).out == "x1 x2\n");
  CHECK(cli({"chw", "dihedral", "--n", "2", "--d", "1", "x1^2"}).out == "(ba)^2\n");
  CHECK(cli({"chw", "spotcheck", "--n", "2", "--bound", "12", "x1 x2"}).code == 0);
}

TEST_CASE("fp subcommands") {
  CHECK(cli({"fp", "reduce", "--n", "2", "x1 x1 x2"}).out == "x2\n");
  CHECK(cli({"fp", "parity", "--n", "3", "x1 x2"}).out == "0\n");
  CHECK(cli({"fp", "torsion", "--n", "2", "x2 x1 x2"}).out ==
        "torsion of order 2, conjugate to x1\n");
  CHECK(cli({"fp", "cyclic", "--n", "2", "x2 x1 x2"}).out ==
        "core: x1\nconjugator: x2\n");
  CHECK(cli({"fp", "to-free", "--n", "3", "x1 x3"}).out == "x1 x2\n");
  CHECK(cli({"fp", "from-free", "--n", "3", "x1 x2"}).out == "x1 x3\n");
  CHECK(cli({"fp", "to-free", "--n", "3", "x3"}).code == 1);  // odd parity
}

TEST_CASE("hw validate rejects bad data with exit code 1") {
  {
    std::ofstream bad("/tmp/uprod_hw_bad.json");
    bad << "{\"n\": 2, \"b2\": [[1, 0], [0, 1]]}";
  }
  CliRun r = cli({"--json", "hw", "validate", "--file", "/tmp/uprod_hw_bad.json"});
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "error");
  CHECK(std::string(j["error"]).find("dimension") != std::string::npos);
}

TEST_CASE("hw subcommands against the bundled datum") {
  CliRun v = cli({"--json", "hw", "validate", "--file", "data/hw3.json"});
  CHECK(v.code == 0);
  auto j = nlohmann::json::parse(v.out);
  CHECK(j["payload"]["valid"] == true);

  CliRun t = cli({"--json", "hw", "torsion", "--file", "data/hw3.json"});
  CHECK(nlohmann::json::parse(t.out)["payload"]["torsion_found"] == false);

  CliRun s = cli({"--json", "hw", "surject", "--file", "data/hw3.json"});
  auto sj = nlohmann::json::parse(s.out);
  CHECK(sj["payload"]["verified"] == true);
  CHECK(sj["payload"]["sign"] == 1);

  CliRun p = cli({"--json", "hw", "phi", "--file", "data/hw3.json", "x1^2"});
  auto pj = nlohmann::json::parse(p.out);
  CHECK(pj["payload"]["isometry"]["t2"] == nlohmann::json({2, 0, 0}));

  // the five-dimensional bundled datum goes through the same pipeline
  CHECK(cli({"hw", "validate", "--file", "data/hw5.json"}).code == 0);
  CliRun s5 = cli({"--json", "hw", "surject", "--file", "data/hw5.json"});
  CHECK(nlohmann::json::parse(s5.out)["payload"]["verified"] == true);
}

TEST_CASE("padic subcommands") {
  CliRun root = cli({"--json", "padic", "root", "--p", "3", "--prec", "3", "--m", "3",
                     "--value", "10"});
  CHECK(root.code == 0);
  auto j = nlohmann::json::parse(root.out);
  CHECK(j["payload"]["value"] == 4);
  CHECK(j["payload"]["report"]["output_precision"] == 2);

  CHECK(cli({"padic", "member", "--p", "2", "--prec", "4", "--value", "3"}).code == 0);
  CHECK(cli({"padic", "valcheck", "--p", "3", "--prec", "3", "--value", "4"}).out ==
        "pass at a = 1\n");
  CHECK(cli({"padic", "powerful", "--p", "3", "--prec", "8", "--dim", "2", "--trials",
             "5", "--seed", "3"})
            .code == 0);
  CHECK(cli({"padic", "unique-roots", "--p", "3", "--prec", "8", "--m", "3", "--dim",
             "1", "--trials", "10", "--seed", "4"})
            .code == 0);
  // root of something outside the subgroup is a domain error
  CHECK(cli({"padic", "root", "--p", "3", "--prec", "4", "--m", "3", "--value", "2"})
            .code == 1);
}

TEST_CASE("padic log and exp subcommands") {
  CliRun lg = cli({"--json", "padic", "log", "--p", "3", "--prec", "8", "--value", "4"});
  CHECK(lg.code == 0);
  auto j = nlohmann::json::parse(lg.out);
  CHECK(j["payload"]["report"]["input_precision"] == 8);
  long long logval = j["payload"]["value"].get<long long>();
  int prec = j["payload"]["report"]["output_precision"].get<int>();
  CliRun ex = cli({"--json", "padic", "exp", "--p", "3", "--prec",
                   std::to_string(prec), "--value", std::to_string(logval)});
  CHECK(ex.code == 0);
  auto je = nlohmann::json::parse(ex.out);
  long long modulus = 1;
  for (int i = 0; i < je["payload"]["report"]["output_precision"].get<int>(); ++i)
    modulus *= 3;
  CHECK(je["payload"]["value"].get<long long>() % modulus == 4 % modulus);
}

TEST_CASE("up check with word-list files") {
  {
    std::ofstream x("/tmp/uprod_x.txt"), y("/tmp/uprod_y.txt");
    x << "group: chw:2\nx1^0\nx1\n";
    y << "group: chw:2\nx1^0\nx1^2\n";
  }
  CliRun r = cli({"--json", "up", "check", "--group", "chw:2", "--x",
                  "/tmp/uprod_x.txt", "--y", "/tmp/uprod_y.txt"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["payload"]["unique_count"] == 4);

  // header mismatch is rejected
  CliRun bad = cli({"up", "check", "--group", "chw:3", "--x", "/tmp/uprod_x.txt",
                    "--y", "/tmp/uprod_y.txt"});
  CHECK(bad.code == 1);

  CliRun two = cli({"--json", "up", "two", "--group", "chw:2", "--x",
                    "/tmp/uprod_x.txt", "--y", "/tmp/uprod_y.txt"});
  CHECK(nlohmann::json::parse(two.out)["payload"]["at_least_two"] == true);
}

TEST_CASE("search output is independent of the worker count") {
  std::vector<std::string> base{"--json", "up",      "search", "--group", "chw:2",
                                "--size", "14",      "--radius", "3",     "--seed",
                                "2",      "--restarts", "16"};
  CliRun one = cli(base);
  std::vector<std::string> multi = base;
  multi.push_back("--workers");
  multi.push_back("3");
  CliRun three = cli(multi);
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  auto j1 = nlohmann::json::parse(one.out);
  auto j3 = nlohmann::json::parse(three.out);
  CHECK(j1["payload"]["witness"] == j3["payload"]["witness"]);
  CHECK(j1["payload"]["unique_count"] == j3["payload"]["unique_count"]);
}

TEST_CASE("up subcommands") {
  CliRun sq = cli({"--json", "up", "square", "--group", "chw:2", "--set",
                   "data/witness_g2_14.txt"});
  CHECK(sq.code == 0);
  auto j = nlohmann::json::parse(sq.out);
  CHECK(j["payload"]["unique_count"] == 0);
  CHECK(j["payload"]["total"] == 196);

  CliRun b = cli({"--json", "up", "ball", "--group", "chw:1", "--radius", "2"});
  CHECK(nlohmann::json::parse(b.out)["payload"]["size"] == 5);

  // square is a verifier gate: sets with unique products exit 1, payload kept
  {
    std::ofstream f("/tmp/uprod_notwitness.txt");
    f << "group: chw:2\nx1\nx2\n";
  }
  CliRun nw = cli({"--json", "up", "square", "--group", "chw:2", "--set",
                   "/tmp/uprod_notwitness.txt"});
  CHECK(nw.code == 1);
  auto nj = nlohmann::json::parse(nw.out);
  CHECK(nj["status"] == "error");
  CHECK(nj["payload"]["unique_count"].get<long long>() > 0);

  // search exits 0 only when a verified witness is produced
  CliRun search = cli({"--json", "up", "search", "--group", "chw:2", "--size", "14",
                       "--radius", "3", "--seed", "1", "--restarts", "40"});
  CHECK(search.code == 0);
  auto js = nlohmann::json::parse(search.out);
  CHECK(js["payload"]["found"] == true);
  CHECK(js["payload"]["unique_count"] == 0);

  CliRun hopeless = cli({"--json", "up", "search", "--group", "z", "--size", "4",
                         "--radius", "3", "--restarts", "2", "--moves", "500"});
  CHECK(hopeless.code == 1);
}
