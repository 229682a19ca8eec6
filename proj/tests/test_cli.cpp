#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgen/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "cgen_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Run run_tool(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = std::string(CGEN_BIN) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string file(const std::string& name) { return (workdir() / name).string(); }

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

void ensure_catalog() {
  static const bool done = [] { return run_tool("catalog --out " + file("cat")).code == 0; }();
  REQUIRE(done);
}

}  // namespace

TEST_CASE("catalog export") {
  ensure_catalog();
  CHECK(fs::exists(file("cat/frontdoor.graph")));
  CHECK(fs::exists(file("cat/napkin.scm")));
  CHECK(fs::exists(file("cat/backdoor.q2.query")));
}

TEST_CASE("identify prints the estimand") {
  ensure_catalog();
  Run r = run_tool("identify --graph " + file("cat/frontdoor.graph") + " --query " + file("cat/frontdoor.q1.query"));
  CHECK(r.code == cgen::kExitOk);
  CHECK(r.out.find("estimand: Σ_{s} P(s|x) · Σ_{x'} P(x') P(r|x',s)") != std::string::npos);
  CHECK(r.out.find("trace: [4, 2, 6, 7, 2, 1]") != std::string::npos);
}

TEST_CASE("identify reports rule-2 moves") {
  ensure_catalog();
  Run r = run_tool("identify --graph " + file("cat/chain.graph") + " --query " + file("cat/chain.q1.query"));
  CHECK(r.code == cgen::kExitOk);
  CHECK(r.out.find("rule 2 moved: B") != std::string::npos);
}

TEST_CASE("non-identifiable queries exit with the hedge code") {
  ensure_catalog();
  Run r = run_tool("identify --graph " + file("cat/bow.graph") + " --query " + file("cat/bow.q1.query"));
  CHECK(r.code == cgen::kExitHedge);
  CHECK(r.out.find("hedge F={X, Y} F'={Y}") != std::string::npos);
  Run s = run_tool("sample --scm " + file("cat/bow.scm") + " --query " + file("cat/bow.q1.query") + " --n 10");
  CHECK(s.code == cgen::kExitHedge);
}

TEST_CASE("malformed input exits with the input-error code") {
  write("bad.graph", "var X 2\nvar Y 2\nedge X -> Z\n");
  write("q.query", "target=Y\ndo=X:1\n");
  Run r = run_tool("identify --graph " + file("bad.graph") + " --query " + file("q.query"));
  CHECK(r.code == cgen::kExitInputError);
  CHECK(r.err.find("line 3") != std::string::npos);

  ensure_catalog();
  Run n0 = run_tool("sample --scm " + file("cat/chain.scm") + " --query " + file("cat/chain.q1.query") + " --n 0");
  CHECK(n0.code == cgen::kExitInputError);
  CHECK(run_tool("identify --graph").code == cgen::kExitInputError);
  CHECK(run_tool("nonsense").code == cgen::kExitInputError);
  CHECK(run_tool("sample --query " + file("q.query")).code == cgen::kExitInputError);
  CHECK(run_tool("--help").code == cgen::kExitOk);
}

TEST_CASE("sampling is byte-identical across runs and worker counts") {
  ensure_catalog();
  const std::string base =
      "sample --scm " + file("cat/napkin.scm") + " --query " + file("cat/napkin.q1.query") + " --n 5000 --seed 3";
  REQUIRE(run_tool(base + " --workers 1 --out " + file("a.csv")).code == 0);
  REQUIRE(run_tool(base + " --workers 2 --out " + file("b.csv")).code == 0);
  const std::string a = slurp(file("a.csv"));
  CHECK(a == slurp(file("b.csv")));
  CHECK(a.rfind("Y\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 5001);
  CHECK(slurp(file("a.csv.network")) == slurp(file("b.csv.network")));
  CHECK(slurp(file("a.csv.network")).rfind("order ", 0) == 0);
}

TEST_CASE("gen-data and sampling from data") {
  ensure_catalog();
  Run g = run_tool("gen-data --scm " + file("cat/backdoor.scm") + " --n 10 --seed 1");
  CHECK(g.code == 0);
  CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 11);
  REQUIRE(run_tool("gen-data --scm " + file("cat/backdoor.scm") + " --n 20000 --out " + file("bd.csv")).code == 0);
  Run s = run_tool("sample --graph " + file("cat/backdoor.graph") + " --data " + file("bd.csv") + " --query " +
               file("cat/backdoor.q2.query") + " --n 100 --out " + file("bd_s.csv"));
  CHECK(s.code == 0);
  CHECK(slurp(file("bd_s.csv")).rfind("I\n", 0) == 0);
  CHECK(run_tool("sample --data " + file("bd.csv") + " --query " + file("cat/backdoor.q1.query")).code ==
        cgen::kExitInputError);
}

TEST_CASE("eval scores a query") {
  ensure_catalog();
  Run r = run_tool("eval --scm " + file("cat/frontdoor.scm") + " --query " + file("cat/frontdoor.q1.query") +
               " --n 20000 --data-n 50000");
  CHECK(r.code == 0);
  CHECK(r.out.find("| graph | query | K |") != std::string::npos);
  CHECK(r.out.find("| frontdoor | P_{X=1}(R) | 2 |") != std::string::npos);
  CHECK(r.out.find("| ok |") != std::string::npos);
}
