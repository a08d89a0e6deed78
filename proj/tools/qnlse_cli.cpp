// Command-line front end: runs a sweep described by a JSON config file and
// writes CSV artifacts plus a manifest into the output directory.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "qnlse/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qnlse: quantum transport through a driven nonlinear 1D medium"};

  std::string config_path;
  std::string out_override;
  int workers = 0;
  bool validate_only = false;
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--workers", workers, "override worker count");
  app.add_option("--out", out_override, "override output directory");
  app.add_flag("--validate-only", validate_only, "parse and validate the config, then exit");

  CLI11_PARSE(app, argc, argv);

  qnlse::SweepConfig cfg;
  try {
    cfg = qnlse::load_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return qnlse::kExitConfig;
  }
  if (workers > 0) cfg.workers = workers;
  if (!out_override.empty()) cfg.output = out_override;
  if (validate_only) {
    std::printf("config ok: mode=%s n=%d workers=%d\n", config_path.c_str(), cfg.grid_n,
                cfg.workers);
    return qnlse::kExitOk;
  }

  try {
    return qnlse::run(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return qnlse::kExitTotal;
  }
}
