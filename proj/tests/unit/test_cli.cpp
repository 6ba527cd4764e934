#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"
#include "orlicz_gauge/json_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace orlicz::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "orlicz-gauge");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("orlicz_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const fs::path p = path / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string configs_dir() {
  const char* dir = std::getenv("ORLICZ_GAUGE_TEST_CONFIGS");
  return dir ? dir : "configs";
}

const char* kMonomial = R"({"kind":"monomial","params":{"alpha":1}})";

}  // namespace

TEST_CASE("integrate from flags") {
  const Result r = invoke({"integrate", "--function", kMonomial, "--tol", "1e-10"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["report"] == "integrate");
  CHECK(j["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(j["seed"] == 0);
  CHECK(orlicz::json_io::validate_report(j) == "");
}

TEST_CASE("lux-norm and modular") {
  const Result n = invoke({"lux-norm", "--function", kMonomial});
  REQUIRE(n.code == kExitOk);
  CHECK(json::parse(n.out)["value"].get<double>() == doctest::Approx(0.5773502692).epsilon(1e-8));
  const Result m = invoke({"modular", "--function", kMonomial, "--theta",
                           R"({"family":"power","params":{"p":3}})"});
  REQUIRE(m.code == kExitOk);
  CHECK(json::parse(m.out)["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("budget exhaustion exits 2") {
  const Result r = invoke({"integrate", "--function",
                           R"({"kind":"hk_pathological","params":{"beta":2,"gamma":2}})", "--tol",
                           "1e-10", "--max-cells", "64"});
  CHECK(r.code == kExitIndeterminate);
  CHECK(json::parse(r.out)["status"] == "BudgetExhausted");
}

TEST_CASE("validation errors exit 3 with a JSON error on stderr") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"lux-norm", "--function", kMonomial, "--theta", R"({"family":"power","params":{"p":0.5}})"},
           {"integrate", "--function", R"({"kind":"monomial","params":{"alpha":1},"x":1})"},
           {"integrate", "--function", "{not json"},
           {"integrate"},
           {"frobnicate"},
           {"integrate", "--function", kMonomial, "--tol", "-1"},
           {"modular", "--function", kMonomial, "--svg-out", "/tmp/never.svg"},
       }) {
    CAPTURE(args[0]);
    const Result r = invoke(args);
    CHECK(r.code == kExitValidation);
    CHECK(r.out.empty());
    const json e = json::parse(r.err);
    CHECK(e["error"]["exit_code"] == kExitValidation);
    CHECK(e["error"]["message"].is_string());
    CHECK(e["error"]["kind"].is_string());
  }
}

TEST_CASE("config files") {
  TempDir tmp;
  const std::string good = tmp.file("good.json", R"({"schema_version":1,"command":"integrate",
    "function":{"kind":"constant","params":{"c":2}},"measure":{"interval":[0,3]},"seed":11})");
  const Result r = invoke({"-c", good});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(6.0));
  CHECK(j["seed"] == 11);
  // Flags override the config.
  CHECK(json::parse(invoke({"-c", good, "--seed", "5"}).out)["seed"] == 5);

  const std::string no_version = tmp.file("nov.json", R"({"command":"integrate"})");
  const Result nv = invoke({"-c", no_version});
  CHECK(nv.code == kExitValidation);
  CHECK(json::parse(nv.err)["error"]["message"].get<std::string>().find("/schema_version") !=
        std::string::npos);

  const std::string unknown = tmp.file("unk.json", R"({"schema_version":1,"command":"integrate",
    "function":{"kind":"constant","params":{"c":2}},"colour":1})");
  CHECK(invoke({"-c", unknown}).code == kExitValidation);

  const std::string nested = tmp.file("nested.json", R"({"schema_version":1,"command":"integrate",
    "function":{"kind":"constant","params":{"q":2}}})");
  const Result ne = invoke({"-c", nested});
  CHECK(ne.code == kExitValidation);
  CHECK(json::parse(ne.err)["error"]["message"].get<std::string>().find("/function/params") !=
        std::string::npos);

  CHECK(invoke({"-c", (tmp.path / "missing.json").string()}).code == kExitValidation);
}

TEST_CASE("seed falls back to the environment") {
  ::setenv("ORLICZ_GAUGE_SEED", "42", 1);
  const Result r = invoke({"hk-norm", "--function", kMonomial, "--budget", "8"});
  ::unsetenv("ORLICZ_GAUGE_SEED");
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["seed"] == 42);
  CHECK(json::parse(invoke({"hk-norm", "--function", kMonomial, "--budget", "8"}).out)["seed"] == 0);
  ::setenv("ORLICZ_GAUGE_SEED", "nope", 1);
  CHECK(invoke({"hk-norm", "--function", kMonomial, "--budget", "8"}).code == kExitValidation);
  ::unsetenv("ORLICZ_GAUGE_SEED");
}

TEST_CASE("shipped configs") {
  TempDir tmp;
  const std::string dir = configs_dir();

  const std::string csv1 = tmp.file("a.csv"), csv2 = tmp.file("b.csv"), svg = tmp.file("p.svg");
  const std::string js = tmp.file("r.json");
  const Result d1 = invoke({"-c", dir + "/power_decay.json", "--csv-out", csv1, "--svg-out", svg,
                            "--json-out", js});
  REQUIRE(d1.code == kExitOk);
  const Result d2 = invoke({"-c", dir + "/power_decay.json", "--csv-out", csv2, "-j", "3"});
  REQUIRE(d2.code == kExitOk);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(slurp(csv1).rfind("n,k,", 0) == 0);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(json::parse(slurp(js)) == json::parse(d1.out));
  // No temporaries are left next to the outputs.
  for (const auto& e : fs::directory_iterator(tmp.path)) {
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  }

  const Result v = invoke({"-c", dir + "/exponential_counterexample.json"});
  CHECK(v.code == kExitViolation);
  const json vj = json::parse(v.out);
  CHECK(vj["any_violation"] == true);
  CHECK(orlicz::json_io::validate_report(vj) == "");

  const Result s = invoke({"-c", dir + "/power_sweep.json"});
  CHECK(s.code == kExitOk);
  CHECK(json::parse(s.out)["candidates"].empty());
}

TEST_CASE("write_atomic replaces the target") {
  TempDir tmp;
  const std::string p = tmp.file("x.txt", "old");
  write_atomic(p, "new");
  CHECK(slurp(p) == "new");
  CHECK_THROWS(write_atomic((tmp.path / "no" / "such" / "dir.txt").string(), "x"));
}

TEST_CASE("help and version") {
  const Result h = invoke({"--help"});
  CHECK(h.code == kExitOk);
  CHECK(h.out.find("--config") != std::string::npos);
  const Result v = invoke({"--version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("orlicz-gauge") != std::string::npos);
  CHECK(commands().size() == 11);
}
