#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "smatch/cli.hpp"

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("smatch_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static inline int counter = 0;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
  json report;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = smatch::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (!r.out.empty() && r.out.front() == '{') r.report = json::parse(r.out);
  return r;
}

json strip_timing(json report) {
  report.erase("timing");
  return report;
}

}  // namespace

TEST_CASE("gen + maxmatch reproduces the appendix_c1 report") {
  TempDir dir;
  const std::string x = dir.file("x.csv");
  const std::string y = dir.file("y.csv");
  CHECK(run({"gen", "--kind", "appendix_c1", "--out-x", x, "--out-y", y}).code == 0);

  const CliResult r = run({"maxmatch", "--x", x, "--y", y, "--eps", "0.05"});
  REQUIRE(r.code == 0);
  CHECK(r.report["result"]["max_match"]["x"] == json::array({0, 1}));
  CHECK(r.report["result"]["max_match"]["y"] == json::array({0, 1}));
  CHECK(r.report["result"]["similarity"] == 1.0);
}

TEST_CASE("gen hadamard + simple: six simple matches, histogram {4: 6}") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  CHECK(run({"gen", "--kind", "hadamard", "--n", "4", "--eps0", "0.2", "--out-x", x,
             "--out-y", y})
            .code == 0);

  const CliResult r = run({"simple", "--x", x, "--y", y, "--eps", "0.2000002"});
  REQUIRE(r.code == 0);
  CHECK(r.report["result"]["count"] == 6);
  CHECK(r.report["result"]["exhaustive"] == true);
  CHECK(r.report["result"]["size_histogram"] == json{{"4", 6}});
}

TEST_CASE("minmatch reports matches and the not-in-maximum-match status") {
  TempDir dir;
  const std::string x = dir.file("x.csv");
  const std::string y = dir.file("y.csv");
  run({"gen", "--kind", "appendix_c1", "--out-x", x, "--out-y", y});

  const CliResult hit =
      run({"minmatch", "--x", x, "--y", y, "--eps", "0.05", "--neuron", "x:1"});
  REQUIRE(hit.code == 0);
  CHECK(hit.report["result"]["status"] == "ok");
  CHECK(hit.report["result"]["match"]["x"] == json::array({0, 1}));

  std::ofstream(dir.file("ox.csv")) << "1,0\n";
  std::ofstream(dir.file("oy.csv")) << "0,1\n";
  const CliResult miss = run({"minmatch", "--x", dir.file("ox.csv"), "--y", dir.file("oy.csv"),
                              "--eps", "0.1", "--neuron", "x:0"});
  REQUIRE(miss.code == 0);  // a signal, not a fault
  CHECK(miss.report["result"]["status"] == "not_in_maximum_match");
  CHECK(miss.report["result"]["match"].is_null());
}

TEST_CASE("allmin with a budget warns on stderr and flags truncation") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  run({"gen", "--kind", "hadamard", "--n", "4", "--eps0", "0.2", "--out-x", x, "--out-y", y});

  const CliResult full = run({"allmin", "--x", x, "--y", y, "--eps", "0.2000002",
                              "--neuron", "x:0"});
  REQUIRE(full.code == 0);
  CHECK(full.report["result"]["count"] == 3);
  CHECK(full.report["result"]["truncated"] == false);

  const CliResult cut = run({"allmin", "--x", x, "--y", y, "--eps", "0.2000002", "--neuron",
                             "x:0", "--budget", "1"});
  REQUIRE(cut.code == 0);
  CHECK(cut.report["result"]["truncated"] == true);
  CHECK(cut.err.find("budget") != std::string::npos);
}

TEST_CASE("sweep produces a curve and optional CSV") {
  TempDir dir;
  const std::string x = dir.file("x.csv");
  const std::string y = dir.file("y.csv");
  run({"gen", "--kind", "identical", "--n", "3", "--d", "4", "--seed", "5", "--out-x", x,
       "--out-y", y});

  const std::string csv = dir.file("curve.csv");
  const CliResult r = run({"sweep", "--x", x, "--y", y, "--eps-list", "0.0,0.1,0.5",
                           "--csv-out", csv});
  REQUIRE(r.code == 0);
  const json curve = r.report["result"]["curve"];
  REQUIRE(curve.size() == 3);
  for (const json& point : curve) CHECK(point["similarity"] == 1.0);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epsilon,similarity");
  std::string first;
  std::getline(in, first);
  CHECK(first == "0,1");
}

TEST_CASE("sweep with conv sampling averages per-repeat similarities") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  // rows of length 2*2*3 = 12, interpreted as conv maps
  run({"gen", "--kind", "identical", "--n", "3", "--d", "12", "--seed", "9", "--out-x", x,
       "--out-y", y});

  const CliResult r = run({"sweep", "--x", x, "--y", y, "--eps-list", "0.1,0.3", "--conv",
                           "2,2,3", "--sample-d", "5", "--repeats", "3", "--seed", "17"});
  REQUIRE(r.code == 0);
  const json per_repeat = r.report["result"]["per_repeat"];
  REQUIRE(per_repeat.size() == 3);
  const json curve = r.report["result"]["curve"];
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double mean = 0.0;
    for (const json& row : per_repeat) mean += row[i].get<double>();
    mean /= 3.0;
    CHECK(curve[i]["similarity"].get<double>() == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("oracle and check subcommands") {
  TempDir dir;
  const std::string x = dir.file("x.csv");
  const std::string y = dir.file("y.csv");
  run({"gen", "--kind", "appendix_c1", "--out-x", x, "--out-y", y});

  const CliResult oracle = run({"oracle", "--x", x, "--y", y, "--eps", "0.05"});
  REQUIRE(oracle.code == 0);
  CHECK(oracle.report["result"]["count"] == 3);
  CHECK(oracle.report["result"]["simple"].size() == 2);

  const CliResult check = run({"check", "--x", x, "--y", y, "--independence", "1.5707963267948966",
                               "--stability", "2.0", "--eps", "0.5"});
  REQUIRE(check.code == 0);
  CHECK(check.report["result"]["independence"]["x_ok"] == true);
  CHECK(check.report["result"]["independence"]["y_ok"] == false);
  CHECK(check.report["result"]["stability"]["ok"] == false);

  const CliResult nothing = run({"check", "--x", x, "--y", y});
  CHECK(nothing.code == 1);  // neither hypothesis requested
}

TEST_CASE("exit codes: usage 2, computation errors 1 with a structured record") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"maxmatch", "--bogus-flag", "1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);

  TempDir dir;
  const std::string x = dir.file("x.csv");
  const std::string y = dir.file("y.csv");
  std::ofstream(x) << "1,0\n";
  std::ofstream(y) << "1,0,0\n";
  const CliResult mismatch = run({"maxmatch", "--x", x, "--y", y, "--eps", "0.1"});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.report["error"]["kind"] == "dimension-mismatch");

  const CliResult bad_eps = run({"maxmatch", "--x", x, "--y", x, "--eps", "1.5"});
  CHECK(bad_eps.code == 1);
  CHECK(bad_eps.report["error"]["kind"] == "invalid-input");

  const CliResult missing = run({"maxmatch", "--x", dir.file("nope.csv"), "--y", y, "--eps",
                                 "0.1"});
  CHECK(missing.code == 1);
  CHECK(missing.report["error"]["kind"] == "parse");
}

TEST_CASE("reports are deterministic and round-trip through JSON") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  run({"gen", "--kind", "rotated", "--n", "4", "--d", "6", "--seed", "3", "--out-x", x,
       "--out-y", y});

  const std::vector<std::string> args{"simple", "--x", x, "--y", y, "--eps", "0.2"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  REQUIRE(a.code == 0);
  CHECK(strip_timing(a.report) == strip_timing(b.report));
  // byte-identical except the timing line
  CHECK(strip_timing(a.report).dump(2) == strip_timing(b.report).dump(2));

  // parse(dump(report)) is the identity on the report value
  CHECK(json::parse(a.report.dump(2)) == a.report);
}

TEST_CASE("reports are byte-identical across thread counts") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  run({"gen", "--kind", "hadamard", "--n", "4", "--eps0", "0.2", "--out-x", x, "--out-y", y});

  const std::vector<std::string> args{"simple", "--x", x, "--y", y, "--eps", "0.2000002"};
  setenv("SMATCH_THREADS", "1", 1);
  const CliResult one = run(args);
  setenv("SMATCH_THREADS", "4", 1);
  const CliResult four = run(args);
  unsetenv("SMATCH_THREADS");
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(strip_timing(one.report).dump(2) == strip_timing(four.report).dump(2));
}

TEST_CASE("minmatch shuffle order is seed-deterministic through the CLI") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  run({"gen", "--kind", "hadamard", "--n", "4", "--eps0", "0.2", "--out-x", x, "--out-y", y});

  const std::vector<std::string> args{"minmatch", "--x", x,        "--y",     y,
                                      "--eps",    "0.2000002", "--neuron", "x:0",
                                      "--order",  "shuffle",   "--seed",   "21"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.report["result"]["match"] == b.report["result"]["match"]);
  CHECK(a.report["result"]["seed"] == 21);

  const CliResult bad = run({"minmatch", "--x", x, "--y", y, "--eps", "0.2", "--neuron",
                             "x:0", "--order", "sideways"});
  CHECK(bad.code == 1);
}

TEST_CASE("sample-simple flows through the CLI") {
  TempDir dir;
  const std::string x = dir.file("x.smat");
  const std::string y = dir.file("y.smat");
  run({"gen", "--kind", "hadamard", "--n", "4", "--eps0", "0.2", "--out-x", x, "--out-y", y});

  const CliResult r = run({"sample-simple", "--x", x, "--y", y, "--eps", "0.2000002",
                           "--iters", "50", "--seed", "12"});
  REQUIRE(r.code == 0);
  CHECK(r.report["result"]["exhaustive"] == false);
  CHECK(r.report["result"]["count"] == 6);
  CHECK(r.report["result"]["iterations"] == 50);
}
