#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(SRM_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const char* name) { return testing::data_path(name); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("flag at a grushin singular point") {
  Run r = run("flag --structure " + data("grushin.srm") + " --point 0,5");
  REQUIRE(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["growth"] == json::array({1, 2}));
  CHECK(j["Q"] == 3);
  CHECK(j["class"] == "singular");
}

TEST_CASE("popp on the heisenberg group") {
  Run r = run("popp --structure " + data("heisenberg.srm") + " --point 0,0,0");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["density"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("missing structure file") {
  Run r = run("validate --structure nope.srm");
  CHECK(r.status == 2);
  CHECK(r.out.find("nope.srm") != std::string::npos);
}

TEST_CASE("bad arguments are validation errors") {
  CHECK(run("flag --structure " + data("grushin.srm") + " --point 0,5,7").status == 2);
  CHECK(run("--budget 9 validate --structure " + data("grushin.srm")).status == 2);
}

TEST_CASE("csv output") {
  Run r = run("--format csv scan --structure " + data("grushin.srm") + " --grid 3,3");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("singular") != std::string::npos);
}

TEST_CASE("runs with one manifest write identical bytes") {
  const fs::path a = fs::temp_directory_path() / "srm_cli_a", b = fs::temp_directory_path() / "srm_cli_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string args = " --seed 5 --budget 1 density --structure " + data("grushin.srm") +
                           " --point 1,0 --eps 0.4 --samples 300";
  REQUIRE(run("--out " + a.string() + args).status == 0);
  REQUIRE(run("--out " + b.string() + args).status == 0);
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  CHECK(slurp(a / "density.json") == slurp(b / "density.json"));
  CHECK(!slurp(a / "density.json").empty());
}

}
