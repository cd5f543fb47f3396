#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "../tools/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hrtlab");
  std::ostringstream out, err;
  const int code = hrtlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hrtlab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

const char* kHeil = "[[0,0],[0,1],[1,0],[1.41421356,0.47140452]]";

}  // namespace

TEST_CASE("classify prints the label and writes a manifest") {
  const auto dir = scratch("classify");
  const auto r = cli({"classify", "--points", kHeil, "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "OneZ2 off=3\n");
  REQUIRE(fs::exists(dir / "classify.json"));
  REQUIRE(fs::exists(dir / "classify.manifest.json"));
  const auto m = nlohmann::json::parse(slurp(dir / "classify.manifest.json"));
  CHECK(m["command"] == "classify");
  CHECK(m["params"]["points"] == kHeil);
  CHECK(m["outputs"].contains("classify.json"));
  CHECK(m.contains("timestamp"));
  CHECK(m.contains("version"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(cli({}).code == 2);
  CHECK(cli({"no-such-command"}).code == 2);
  CHECK(cli({"classify", "--points", "[[0,0],[0,0]]", "--out", dir.string()}).code == 3);
  const auto bad = cli({"classify", "--points", "[[0,0],", "--out", dir.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
  CHECK(cli({"independence", "--alpha", "0:1", "--out", dir.string()}).code == 2);
  const auto mod = cli({"normalize", "--points", "[[0,0],[1,1],[2,2]]", "--out", dir.string()});
  CHECK(mod.code == 3);
  CHECK(mod.err.find("Collinear") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("zak-check prints five identities") {
  const auto dir = scratch("zak");
  const auto r = cli({"zak-check", "--window", "gaussian", "--q", "64", "--K", "8", "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string name;
  double err = 0;
  int count = 0;
  while (lines >> name >> err) {
    CHECK(err <= 1e-8);
    ++count;
  }
  CHECK(count == 5);
  CHECK(fs::exists(dir / "zak_check.csv"));
  fs::remove_all(dir);
}

TEST_CASE("config keys fill in, flags win") {
  const auto dir = scratch("config");
  const auto cfgPath = dir / "cfg.json";
  std::ofstream(cfgPath) << R"({"points": "[[0,0],[1,0],[2,0],[0,1]]", "distinguished": 2})";
  auto r = cli({"classify", "--config", cfgPath.string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Lattice", 0) == 0);
  auto m = nlohmann::json::parse(slurp(dir / "classify.manifest.json"));
  CHECK(m["params"]["distinguished"] == 2);
  CHECK(m["inputs"].contains(cfgPath.string()));

  r = cli({"classify", "--config", cfgPath.string(), "--points", kHeil, "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "OneZ2 off=3\n");
  m = nlohmann::json::parse(slurp(dir / "classify.manifest.json"));
  CHECK(m["params"]["points"] == kHeil);
  fs::remove_all(dir);
}

TEST_CASE("a manifest re-runs to identical bytes") {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  REQUIRE(cli({"orbit", "--gamma-t", "0.41421356237309503", "--gamma-omega", "0.7320508075688772", "--n", "500",
               "--out", a.string()})
              .code == 0);
  const auto r = cli({"--config", (a / "orbit.manifest.json").string(), "--out", b.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(a / "orbit.csv") == slurp(b / "orbit.csv"));
  const auto ma = nlohmann::json::parse(slurp(a / "orbit.manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "orbit.manifest.json"));
  CHECK(ma["outputs"] == mb["outputs"]);
  // The echoed parameters parse back to the same set, apart from --out.
  auto pa = ma["params"], pb = mb["params"];
  CHECK(pa == pb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sweep CSV does not depend on the thread count") {
  const auto a = scratch("threads_a");
  const auto b = scratch("threads_b");
  const std::vector<std::string> common{"independence", "--step", "1/16", "--K", "6", "--alpha", "0:1:0.25",
                                        "--beta", "0:1:0.25"};
  ::setenv("HRTLAB_THREADS", "1", 1);
  auto args = common;
  args.insert(args.end(), {"--out", a.string()});
  REQUIRE(cli(args).code == 0);
  ::setenv("HRTLAB_THREADS", "4", 1);
  args = common;
  args.insert(args.end(), {"--out", b.string()});
  REQUIRE(cli(args).code == 0);
  ::unsetenv("HRTLAB_THREADS");
  const auto csv = slurp(a / "independence.csv");
  CHECK(csv == slurp(b / "independence.csv"));
  CHECK(slurp(a / "independence.pgm") == slurp(b / "independence.pgm"));
  // Header plus 5 x 5 rows, alpha outer.
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 26);
  CHECK(rows[1].rfind("0,0,", 0) == 0);
  CHECK(rows[2].rfind("0,0.25,", 0) == 0);
  CHECK(rows[6].rfind("0.25,0,", 0) == 0);

  ::setenv("HRTLAB_THREADS", "lots", 1);
  args = common;
  args.insert(args.end(), {"--out", a.string()});
  CHECK(cli(args).code == 2);
  ::unsetenv("HRTLAB_THREADS");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("other subcommands run") {
  const auto dir = scratch("misc");
  const auto d = dir.string();
  CHECK(cli({"normalize", "--points", "[[1,1],[1,2],[3,1]]", "--out", d}).out.rfind("a 2\n", 0) == 0);
  CHECK(cli({"line", "--gamma-t", "-sqrt(2)", "--gamma-omega", "sqrt(2)/3", "--out", d}).code == 0);
  CHECK(fs::exists(dir / "line.csv"));
  CHECK(cli({"relations", "--values", R"j(["sqrt(2)", "1 + sqrt(2)", "1/3"])j", "--out", d}).code == 0);
  const auto rel = nlohmann::json::parse(slurp(dir / "relations.json"));
  CHECK(rel["L"] == 3);
  CHECK(cli({"product", "--mode", "flow", "--xs", "[0]", "--cs", "[2]", "--n", "20", "--out", d}).code == 0);
  CHECK(fs::exists(dir / "product.csv"));
  const auto flow = cli({"flow", "--xs", "[0, 1.4142135623730951]", "--cs", "[0.5, 0.5]", "--xi", "0.3", "--n",
                         "10000", "--out", d});
  CHECK(flow.code == 0);
  CHECK(flow.out.find("forward diverges-to-zero") != std::string::npos);
  fs::remove_all(dir);
}
