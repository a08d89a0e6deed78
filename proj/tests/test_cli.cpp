#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnlse/sweep.hpp"

using namespace qnlse;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("qnlse_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

fs::path write_config(const TempDir& dir, const json& j) {
  const fs::path p = dir.path / "config.json";
  std::ofstream f(p);
  f << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const double kDeltaRes = std::pow(M_PI / 30.0, 2);

json base_config(const std::string& mode) {
  return {{"mode", mode},
          {"params", {{"m_re", 0.5}, {"d", 30.0}, {"delta", kDeltaRes}, {"alpha0", 1e-3}}},
          {"grid", {{"n", 120}}}};
}

int run_binary(const std::string& args) {
  const int rc = std::system((std::string(QNLSE_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("load_config rejects malformed input with a diagnostic") {
  TempDir dir;
  CHECK_THROWS_WITH_AS(load_config((dir.path / "missing.json").string()),
                       doctest::Contains("cannot open"), std::runtime_error);

  const auto bad_json = dir.path / "bad.json";
  std::ofstream(bad_json) << "{ not json";
  CHECK_THROWS_WITH_AS(load_config(bad_json.string()), doctest::Contains("parse error"),
                       std::runtime_error);

  CHECK_THROWS_WITH_AS(load_config(write_config(dir, json{{"params", {{"d", 30.0}}}}).string()),
                       doctest::Contains("mode"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load_config(write_config(dir, json{{"mode", "banana"}}).string()),
                       doctest::Contains("unknown mode"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load_config(write_config(dir, json{{"mode", "modes"}}).string()),
                       doctest::Contains("'params' or 'physical'"), std::runtime_error);

  auto j = base_config("g2scan");
  j["sweep"] = {{"parameter", "voltage"}, {"min", 0.0}};
  CHECK_THROWS_WITH_AS(load_config(write_config(dir, j).string()),
                       doctest::Contains("sweep.parameter"), std::runtime_error);

  // Mode/axis mismatch is a config error, not a runtime one.
  auto m = base_config("spectrum");
  m["sweep"] = {{"parameter", "kappa"}, {"min", 0.0}};
  CHECK_THROWS_AS(load_config(write_config(dir, m).string()), std::runtime_error);
  CHECK_THROWS_AS(load_config(write_config(dir, base_config("g2scan")).string()),
                  std::runtime_error);
}

TEST_CASE("load_config accepts a physical-parameter block") {
  TempDir dir;
  const json j = {{"mode", "fieldmap"},
                  {"physical",
                   {{"gamma", 1.0}, {"gamma_1d", 0.1}, {"delta1", -50.0}, {"delta2", 20.0},
                    {"delta3", 0.0}, {"rabi", 5.0}, {"density", 100.0}, {"length", 1.0},
                    {"alpha0", 1e-3}}}};
  const auto cfg = load_config(write_config(dir, j).string());
  CHECK(cfg.params.od.has_value());
  CHECK(cfg.params.kappa_raw.has_value());
  CHECK(cfg.params.d > 0.0);
}

TEST_CASE("spectrum run writes the CSV and manifest") {
  TempDir dir;
  auto j = base_config("spectrum");
  j["grid"]["n"] = 400;
  j["sweep"] = {{"parameter", "delta"}, {"min", 0.5 * kDeltaRes}, {"max", 4.0 * kDeltaRes},
                {"count", 7}};
  j["output"] = (dir.path / "out").string();
  const auto cfg = load_config(write_config(dir, j).string());
  CHECK(run(cfg) == kExitOk);

  const std::string csv = slurp(dir.path / "out" / "spectrum.csv");
  CHECK(csv.rfind("delta,T_analytic,R_analytic,T_numeric,R_numeric\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);

  const json man = json::parse(slurp(dir.path / "out" / "manifest.json"));
  CHECK(man.at("mode") == "spectrum");
  CHECK(man.at("points").size() == 7);
  for (const auto& p : man.at("points")) CHECK(p.at("status") == "ok");
  CHECK(man.at("artifacts") == json::array({"spectrum.csv"}));
}

TEST_CASE("partial and total failures map to exit codes 3 and 4") {
  TempDir dir;
  auto j = base_config("spectrum");
  j["sweep"] = {{"parameter", "delta"}, {"min", kDeltaRes}, {"max", 400.0}, {"count", 2}};
  j["output"] = (dir.path / "partial").string();
  CHECK(run(load_config(write_config(dir, j).string())) == kExitPartial);

  j["sweep"]["min"] = 300.0;  // both detunings underresolve the grid
  j["output"] = (dir.path / "total").string();
  CHECK(run(load_config(write_config(dir, j).string())) == kExitTotal);
}

TEST_CASE("g2scan output bytes are independent of the worker count") {
  TempDir dir;
  auto j = base_config("g2scan");
  j["sweep"] = {{"parameter", "kappa_d"}, {"min", -6.0}, {"max", -1.0}, {"count", 6}};
  j["output"] = (dir.path / "w1").string();
  j["workers"] = 1;
  CHECK(run(load_config(write_config(dir, j).string())) == kExitOk);
  j["output"] = (dir.path / "w4").string();
  j["workers"] = 4;
  CHECK(run(load_config(write_config(dir, j).string())) == kExitOk);
  CHECK(slurp(dir.path / "w1" / "g2scan.csv") == slurp(dir.path / "w4" / "g2scan.csv"));
  CHECK(slurp(dir.path / "w1" / "peaks.csv") == slurp(dir.path / "w4" / "peaks.csv"));
}

TEST_CASE("modes run lists the bound family") {
  TempDir dir;
  auto j = base_config("modes");
  j["params"]["kappa"] = -0.18;
  j["mode_options"] = {{"n_max", 3}};
  j["output"] = (dir.path / "out").string();
  CHECK(run(load_config(write_config(dir, j).string())) == kExitOk);
  const std::string csv = slurp(dir.path / "out" / "modes.csv");
  CHECK(csv.rfind("n,kappa,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("bound") != std::string::npos);
}

TEST_CASE("modes with n_max = 0 gives an empty table and success") {
  TempDir dir;
  auto j = base_config("modes");
  j["params"]["kappa"] = -0.18;
  j["mode_options"] = {{"n_max", 0}};
  j["output"] = (dir.path / "out").string();
  CHECK(run(load_config(write_config(dir, j).string())) == kExitOk);
  const std::string csv = slurp(dir.path / "out" / "modes.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);  // header only
}

TEST_CASE("fieldmap run serializes the steady state") {
  TempDir dir;
  auto j = base_config("fieldmap");
  j["params"]["kappa"] = -0.1;
  j["output"] = (dir.path / "out").string();
  CHECK(run(load_config(write_config(dir, j).string())) == kExitOk);
  CHECK(fs::exists(dir.path / "out" / "fieldmap.json"));
  CHECK(fs::exists(dir.path / "out" / "fieldmap_theta.csv"));
  CHECK(fs::exists(dir.path / "out" / "fieldmap_phi_abs.csv"));
  CHECK(fs::exists(dir.path / "out" / "fieldmap_phi_arg.csv"));
}

TEST_CASE("binary exit codes") {
  TempDir dir;
  CHECK(run_binary("--config " + (dir.path / "nope.json").string()) == 2);

  const auto bad = dir.path / "bad.json";
  std::ofstream(bad) << "{";
  CHECK(run_binary("--config " + bad.string()) == 2);

  auto j = base_config("modes");
  j["params"]["kappa"] = -0.18;
  j["mode_options"] = {{"n_max", 2}};
  j["output"] = (dir.path / "out").string();
  const auto cfgp = write_config(dir, j);
  CHECK(run_binary("--config " + cfgp.string() + " --validate-only") == 0);
  CHECK_FALSE(fs::exists(dir.path / "out" / "modes.csv"));
  CHECK(run_binary("--config " + cfgp.string()) == 0);
  CHECK(fs::exists(dir.path / "out" / "modes.csv"));
}
