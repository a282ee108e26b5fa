#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "plike/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "plike");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = plike::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "plike_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (scratch_dir() / name).string(); }

}  // namespace

TEST_CASE("render-m1 writes an image and a sidecar") {
  const Result r = run({"render-m1", "--center", "-0.5,0", "--width", "6", "--px", "160", "--out",
                        at("m1"), "--png"});
  REQUIRE(r.code == 0);
  const std::string ppm = slurp(at("m1") + ".ppm");
  CHECK(ppm.rfind("P6\n160 160\n255\n", 0) == 0);
  CHECK(ppm.size() == std::string("P6\n160 160\n255\n").size() + 3 * 160 * 160);
  CHECK(slurp(at("m1") + ".png").rfind("\x89PNG", 0) == 0);
  const auto side = nlohmann::json::parse(slurp(at("m1") + ".json"));
  CHECK(side["kind"] == "m1");
  CHECK(side["grid"]["width"] == 6.0);
  CHECK(side["budget"] == 20000);
  CHECK(side["counts"]["member"].get<int>() > 0);
}

TEST_CASE("outputs are byte-identical across reruns and thread counts") {
  const std::vector<std::string> base = {"render-cubic", "--px", "120", "--budget", "3000"};
  auto with = [&](const std::string& name, const std::string& threads) {
    auto args = base;
    args.insert(args.end(), {"--out", at(name), "--threads", threads, "--png"});
    REQUIRE(run(args).code == 0);
  };
  with("c1", "1");
  with("c2", "1");
  with("c8", "8");
  for (const char* ext : {".ppm", ".png", ".json"}) {
    CHECK(slurp(at("c1") + ext) == slurp(at("c2") + ext));
    CHECK(slurp(at("c1") + ext) == slurp(at("c8") + ext));
  }
}

TEST_CASE("render-julia and overlays") {
  Result r = run({"render-julia", "--family", "cubic", "--param", "0,1", "--px", "80", "--overlay",
                  "--out", at("j")});
  REQUIRE(r.code == 0);
  const auto side = nlohmann::json::parse(slurp(at("j") + ".json"));
  CHECK(side["counts"]["overlay"].get<int>() > 0);
  r = run({"render-cubic", "--px", "81", "--center", "0,1", "--width", "4", "--budget", "1000",
           "--overlay", "--out", at("co")});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(at("co") + ".json"))["counts"]["overlay"].get<int>() > 0);
  CHECK(run({"render-julia", "--family", "quartic", "--px", "8"}).code == 2);
  CHECK(run({"render-julia", "--family", "h2", "--overlay", "--px", "8"}).code == 2);
}

TEST_CASE("chi at a = i") {
  const Result r = run({"chi", "--a", "0,1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["period"] == 1);
  CHECK(std::abs(j["B"][0].get<double>()) < 1e-12);
  CHECK(std::abs(j["B"][1].get<double>()) < 1e-12);
  CHECK(j["match_residual"].get<double>() < 1e-8);
}

TEST_CASE("ray subcommands write CSV") {
  Result r = run({"trace-param-ray", "--angle", "1/6", "--tmin", "1e-2", "--out", at("pr")});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(at("pr") + ".csv");
  CHECK(csv.rfind("# parameter ray angle=1/6\nt,re,im\n", 0) == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["angle"] == "1/6");
  CHECK(j["t_last"].get<double>() == doctest::Approx(1e-2));

  r = run({"trace-dyn-ray", "--a", "2,0", "--angle", "0", "--tmin", "0.05", "--out", at("dr")});
  REQUIRE(r.code == 0);
  CHECK(slurp(at("dr") + ".csv").rfind("# dynamical ray angle=0 a=2,0\n", 0) == 0);

  CHECK(run({"trace-param-ray", "--angle", "one/six"}).code == 2);
  CHECK(run({"trace-param-ray"}).code == 2);
}

TEST_CASE("centers and report") {
  Result r = run({"centers", "--plane", "perone", "--period", "2", "--seed", "1.4"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["param"][0].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(j["plane"] == "PerOneA");

  r = run({"centers", "--plane", "perone", "--period", "2", "--seed", "0.98"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.err)["error"] == "PeriodCollapsed");

  r = run({"report", "--periods", "3", "--scan-px", "200", "--out", at("rep")});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(slurp(at("rep") + ".json"));
  CHECK(j["bijective"] == true);
  CHECK(j["summary"]["3"]["count_cubic"] == 3);
  CHECK(run({"report", "--periods", "9"}).code == 2);
}

TEST_CASE("exit codes and error objects") {
  Result r = run({"chi", "--a", "3,0"});
  CHECK(r.code == 1);
  const auto e = nlohmann::json::parse(r.err);
  CHECK(e["error"] == "NoCycleFound");
  CHECK(e.contains("message"));

  CHECK(run({}).code == 2);
  CHECK(run({"render-m1", "--bogus"}).code == 2);
  CHECK(run({"render-m1", "--px", "0"}).code == 2);
  CHECK(run({"render-m1", "--center", "a,b"}).code == 2);
  CHECK(run({"render-m1", "--width", "-1", "--px", "4"}).code == 2);
  CHECK(run({"render-m1", "--cycle-refine", "1e-3", "--px", "4"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"render-m1", "--px", "4", "--out", "/nonexistent_dir/x"}).code == 1);
}

TEST_CASE("config file with flag precedence") {
  {
    std::ofstream f(at("cfg.toml"));
    f << "# tolerances\ncycle_detect = 2e-8\nbudget = 300\nmatch-tol = 1e-9\n";
  }
  Result r = run({"render-cubic", "--px", "10", "--config", at("cfg.toml"), "--out", at("cf")});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["budget"] == 300);
  CHECK(j["tolerances"]["cycle_detect"] == 2e-8);
  CHECK(j["tolerances"]["match_tol"] == 1e-9);

  r = run({"render-cubic", "--px", "10", "--config", at("cfg.toml"), "--budget", "700", "--out",
           at("cf")});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["budget"] == 700);

  {
    std::ofstream f(at("bad.toml"));
    f << "no_such_key = 1\n";
  }
  CHECK(run({"render-cubic", "--px", "10", "--config", at("bad.toml")}).code == 2);
}
