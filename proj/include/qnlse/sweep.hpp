#ifndef QNLSE_SWEEP_HPP
#define QNLSE_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "qnlse/params.hpp"

namespace qnlse {

enum class RunMode { spectrum, g2scan, modes, resonances, fieldmap, crosscheck };

struct SweepAxis {
  std::string parameter;  // "delta", "kappa", "kappa_d"
  double min = 0.0, max = 0.0;
  int count = 1;
};

struct SweepConfig {
  RunMode mode;
  EffectiveParams params;
  int grid_n = 300;
  std::optional<SweepAxis> sweep;
  std::string output = ".";
  int workers = 1;
  // Mode-specific knobs.
  int n_max = 5;
  std::optional<double> delta_res;          // resonances (default (pi/d)^2)
  std::optional<std::pair<double, double>> window;  // resonances kappa window
  double t_final = 0.0;                     // crosscheck (0: auto)
  double dt = 0.0;                          // crosscheck (0: auto)
};

/// Exit codes for run(): 0 success, 2 config error, 3 partial failure,
/// 4 total failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPartial = 3;
inline constexpr int kExitTotal = 4;

/// Parse and validate a JSON config file. Throws std::runtime_error with a
/// field diagnostic on invalid input.
SweepConfig load_config(const std::string& path);

/// Execute a run: mode-specific CSVs plus a manifest.json (resolved config,
/// version, per-point status), manifest written last. Deterministic output
/// bytes for identical config, independent of worker count.
int run(const SweepConfig& config);

extern const char* const kVersion;

}  // namespace qnlse

#endif
