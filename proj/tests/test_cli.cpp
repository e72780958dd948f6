#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "ultra/cli.hpp"
#include "ultra/json_io.hpp"

using namespace ultra;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("cli_tmp_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct RunResult {
  int code;
  Json report;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  RunResult r{code, Json(), err.str()};
  if (!out.str().empty() && out.str().front() == '{') r.report = Json::parse(out.str());
  return r;
}

const char* kSpace =
    R"({"points":["a","b","c"],"dist":[["0","1","2"],["1","0","2"],["2","2","0"]],"range_set":{"kind":"all"}})";

}  // namespace

TEST_CASE("validate: pass and fail") {
  TempFile good("good.json", kSpace);
  RunResult ok = run_cli({"validate", good.path});
  CHECK(ok.code == 0);
  CHECK(ok.report["verdicts"][0]["pass"] == true);

  TempFile bad("bad.json",
               R"({"points":["a","b","c"],"dist":[["0","1","3"],["1","0","2"],["3","2","0"]],"range_set":{"kind":"all"}})");
  RunResult fail = run_cli({"validate", bad.path});
  CHECK(fail.code == 2);
  CHECK(fail.report["verdicts"][0]["pass"] == false);
  CHECK(fail.report["verdicts"][0]["witness"]["error"] == "TriangleViolation");

  RunResult missing = run_cli({"validate", "no_such_file.json"});
  CHECK(missing.code == 1);
  RunResult usage = run_cli({"not-a-command"});
  CHECK(usage.code == 64);
}

TEST_CASE("validate accepts csv with an explicit range set") {
  TempFile csv("m.csv", "a,b\n0,1\n1,0\n");
  RunResult r = run_cli({"validate", csv.path, "--range-set", R"({"kind":"all"})"});
  CHECK(r.code == 0);
}

TEST_CASE("emitted space json round-trips bit-exactly") {
  TempFile f("rt.json", kSpace);
  RunResult first = run_cli({"validate", f.path});
  REQUIRE(first.code == 0);
  TempFile second_file("rt2.json", first.report["outputs"]["space"].dump());
  RunResult second = run_cli({"validate", second_file.path});
  CHECK(second.code == 0);
  CHECK(second.report["outputs"]["space"] == first.report["outputs"]["space"]);
}

TEST_CASE("reports are deterministic") {
  TempFile f("det.json", kSpace);
  RunResult a = run_cli({"truncate", f.path, "--eps", "3/2"});
  RunResult b = run_cli({"truncate", f.path, "--eps", "3/2"});
  CHECK(a.code == 0);
  CHECK(a.report == b.report);
  CHECK(a.report["outputs"]["space"]["dist"][0][2] == "3/2");
}

TEST_CASE("pipeline subcommands succeed end to end") {
  TempFile sp("sp.json", kSpace);
  TempFile paird("d.json",
                 R"({"points":["a","b"],"dist":[["0","1"],["1","0"]],"range_set":{"kind":"all"}})");
  TempFile paire("e.json",
                 R"({"points":["a","b"],"dist":[["0","3"],["3","0"]],"range_set":{"kind":"all"}})");

  CHECK(run_cli({"dlps", "--range-set", R"({"kind":"finite","values":["0","1","3"]})"}).code == 0);
  CHECK(run_cli({"product", sp.path, sp.path}).code == 0);

  RunResult ud = run_cli({"ud", paird.path, paire.path});
  CHECK(ud.code == 0);
  CHECK(ud.report["outputs"]["ud"] == "3");
  RunResult dm = run_cli({"dmax", paird.path, paire.path});
  CHECK(dm.report["outputs"]["dmax"] == "2");

  CHECK(run_cli({"amalgam", paird.path, paire.path}).code == 64);  // r required

  TempFile other("y.json",
                 R"({"points":["y"],"dist":[["0"]],"range_set":{"kind":"all"}})");
  RunResult am = run_cli({"amalgam", paird.path, other.path, "--r", "2"});
  CHECK(am.code == 0);
  CHECK(am.report["outputs"]["space"]["points"].size() == 3);

  RunResult cp = run_cli({"copy-amalgam", paird.path, paire.path, "--r", "3"});
  CHECK(cp.code == 0);

  TempFile prob("prob.json", R"({
    "ambient": {"points":["a","b","c"],
                "dist":[["0","1","2"],["1","0","2"],["2","2","0"]],
                "range_set":{"kind":"all"}},
    "family": [{"subset":["a","b"],"matrix":[["0","4"],["4","0"]]}]
  })");
  RunResult ka = run_cli({"key-amalgam", prob.path});
  CHECK(ka.code == 0);
  CHECK(ka.report["exact_values"]["eta"] == "4");

  RunResult ip = run_cli({"interpolate", prob.path});
  CHECK(ip.code == 0);
  CHECK(ip.report["outputs"]["eta"] == "4");
  CHECK(ip.report["outputs"]["ud"] == "4");

  TempFile presc("presc.json",
                 R"({"points":["a","b"],"dist":[["0","4"],["4","0"]],"range_set":{"kind":"all"}})");
  RunResult ex = run_cli({"extend", sp.path, presc.path});
  CHECK(ex.code == 0);

  RunResult em = run_cli({"embed", sp.path});
  CHECK(em.code == 0);
  RunResult ind = run_cli({"independence", sp.path, "--trials", "50"});
  CHECK(ind.code == 0);
}

TEST_CASE("telescope subcommands") {
  CHECK(run_cli({"telescope", "standard"}).code == 0);
  RunResult pre = run_cli({"prefix", "standard", "--k", "2"});
  CHECK(pre.code == 0);
  CHECK(pre.report["outputs"]["space"]["points"].size() == 2 + 3 + 1);

  TempFile spec("tel.json", R"({
    "radii": {"kind":"grid","ratio":"1/2"},
    "offset": 1,
    "blocks": {"kind":"equidistant-growing","start_size":2},
    "range_set": {"kind":"grid","ratio":"2","kmin":null,"kmax":0}
  })");
  RunResult pre2 = run_cli({"prefix", spec.path, "--k", "2"});
  CHECK(pre2.code == 0);
  CHECK(pre2.report["outputs"]["space"]["dist"][0][1] == "1/4");  // offset shifts radii

  RunResult demo = run_cli({"demo-niemytzki", "--tol", "1/10"});
  CHECK(demo.code == 0);
  CHECK(demo.report["outputs"]["tail_start"] == 11);
  RunResult demo2 = run_cli({"demo-niemytzki", "--radii", "grid:1/2", "--tol", "1/8"});
  CHECK(demo2.code == 0);
  CHECK(demo2.report["outputs"]["tail_start"] == 4);
}

TEST_CASE("doubling, witness, approx, perturb") {
  TempFile eq("eq.json", R"({
    "points":["a","b","c","d","e","f","g"],
    "dist":[["0","1","1","1","1","1","1"],["1","0","1","1","1","1","1"],
            ["1","1","0","1","1","1","1"],["1","1","1","0","1","1","1"],
            ["1","1","1","1","0","1","1"],["1","1","1","1","1","0","1"],
            ["1","1","1","1","1","1","0"]],
    "range_set":{"kind":"all"}})");
  RunResult d = run_cli({"doubling", eq.path, "--C", "5", "--alpha", "2"});
  CHECK(d.code == 0);
  CHECK(d.report["outputs"]["holds"] == false);
  CHECK(d.report["outputs"]["witness"]["card"] == 7);

  RunResult w = run_cli({"witness", "standard", "--C-list", "1,10", "--alpha-list", "1,2"});
  CHECK(w.code == 0);
  CHECK(w.report["outputs"]["grid"].size() == 4);

  TempFile sp("ap.json",
              R"({"points":["a","b","c"],"dist":[["0","1/3","1"],["1/3","0","1"],["1","1","0"]],"range_set":{"kind":"all"}})");
  RunResult ap = run_cli({"approx", sp.path, "--eps", "1/10", "--target-range",
                          R"({"kind":"dyadic"})"});
  CHECK(ap.code == 0);
  CHECK(ap.report["outputs"]["space"]["dist"][0][1] == "3/8");

  RunResult pt = run_cli({"perturb", "standard", "--eps", "1/8", "--prefix", "6"});
  CHECK(pt.code == 0);
  CHECK(pt.report["outputs"]["cut"] == 2);
}

TEST_CASE("vector json round-trip") {
  UltraVector v = UltraVector::from_segments(
      {{Value(1), {{"a", BigInt(1)}}}, {Value(2), {{"b", BigInt(-2)}}}});
  Json j = vector_to_json(v);
  CHECK(vector_from_json(j) == v);
  CHECK(j["segments"][0]["upto"] == "1");
}
