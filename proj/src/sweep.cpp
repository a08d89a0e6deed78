#include "qnlse/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qnlse/bethe.hpp"
#include "qnlse/linear.hpp"
#include "qnlse/nlse2.hpp"
#include "qnlse/observables.hpp"
#include "qnlse/serialize.hpp"

namespace qnlse {

const char* const kVersion = "qnlse 0.1.0";

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

RunMode parse_mode(const std::string& s) {
  if (s == "spectrum") return RunMode::spectrum;
  if (s == "g2scan") return RunMode::g2scan;
  if (s == "modes") return RunMode::modes;
  if (s == "resonances") return RunMode::resonances;
  if (s == "fieldmap") return RunMode::fieldmap;
  if (s == "crosscheck") return RunMode::crosscheck;
  throw std::runtime_error("config: unknown mode '" + s + "'");
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::spectrum: return "spectrum";
    case RunMode::g2scan: return "g2scan";
    case RunMode::modes: return "modes";
    case RunMode::resonances: return "resonances";
    case RunMode::fieldmap: return "fieldmap";
    case RunMode::crosscheck: return "crosscheck";
  }
  return "?";
}

std::vector<double> axis_values(const SweepAxis& ax) {
  std::vector<double> v;
  if (ax.count < 1) throw std::runtime_error("config: sweep.count must be >= 1");
  if (ax.count == 1) {
    v.push_back(ax.min);
  } else {
    for (int i = 0; i < ax.count; ++i)
      v.push_back(ax.min + (ax.max - ax.min) * i / (ax.count - 1));
  }
  return v;
}

json params_json(const EffectiveParams& p) {
  json j = {{"m_re", p.mass.real()},        {"m_im", p.mass.imag()},
            {"kappa_re", p.kappa.real()},   {"kappa_im", p.kappa.imag()},
            {"d", p.d},                     {"delta", p.delta},
            {"alpha0", p.alpha0},           {"weak_drive", p.weak_drive}};
  if (p.od) j["od"] = *p.od;
  if (p.l_coh) j["l_coh"] = *p.l_coh;
  if (p.t_coh) j["t_coh"] = *p.t_coh;
  return j;
}

struct PointStatus {
  std::string label;
  std::string error;  // empty: ok
};

void write_manifest(const SweepConfig& cfg, const std::vector<PointStatus>& pts,
                    const std::vector<std::string>& artifacts) {
  json m;
  m["version"] = kVersion;
  m["mode"] = mode_name(cfg.mode);
  m["params"] = params_json(cfg.params);
  m["grid"] = {{"n", cfg.grid_n}};
  m["workers"] = cfg.workers;
  if (cfg.sweep)
    m["sweep"] = {{"parameter", cfg.sweep->parameter},
                  {"min", cfg.sweep->min},
                  {"max", cfg.sweep->max},
                  {"count", cfg.sweep->count}};
  m["artifacts"] = artifacts;
  json pj = json::array();
  for (const auto& p : pts)
    pj.push_back({{"point", p.label}, {"status", p.error.empty() ? "ok" : "failed"},
                  {"error", p.error}});
  m["points"] = pj;
  std::ofstream f(fs::path(cfg.output) / "manifest.json");
  f << m.dump(2) << "\n";
}

int exit_code(const std::vector<PointStatus>& pts) {
  size_t failed = 0;
  for (const auto& p : pts)
    if (!p.error.empty()) ++failed;
  if (failed == 0) return kExitOk;
  if (failed == pts.size() && !pts.empty()) return kExitTotal;
  return kExitPartial;
}

}  // namespace

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
  }

  SweepConfig cfg;
  if (!j.contains("mode")) throw std::runtime_error("config: missing field 'mode'");
  cfg.mode = parse_mode(j.at("mode").get<std::string>());

  if (j.contains("physical")) {
    const json& p = j.at("physical");
    PhysicalParams pp;
    try {
      pp.gamma = p.at("gamma");
      pp.gamma_1d = p.at("gamma_1d");
      pp.delta1 = p.at("delta1");
      pp.delta2 = p.at("delta2");
      pp.delta3 = p.at("delta3");
      pp.rabi = p.at("rabi");
      pp.density = p.at("density");
      pp.length = p.at("length");
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("config: physical block: ") + e.what());
    }
    cfg.params = derive_effective_params(pp, p.value("alpha0", 1e-3));
  } else if (j.contains("params")) {
    const json& p = j.at("params");
    try {
      cfg.params = make_effective(cplx(p.value("m_re", 0.5), p.value("m_im", 0.0)),
                                  cplx(p.value("kappa", 0.0), 0.0), p.at("d"),
                                  p.value("delta", 0.0), p.value("alpha0", 1e-3));
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("config: params block: ") + e.what());
    }
  } else {
    throw std::runtime_error("config: need a 'params' or 'physical' block");
  }

  if (j.contains("grid")) cfg.grid_n = j.at("grid").value("n", 300);
  if (j.contains("sweep")) {
    SweepAxis ax;
    const json& s = j.at("sweep");
    ax.parameter = s.at("parameter");
    ax.min = s.at("min");
    ax.max = s.value("max", ax.min);
    ax.count = s.value("count", 1);
    if (ax.parameter != "delta" && ax.parameter != "kappa" && ax.parameter != "kappa_d")
      throw std::runtime_error("config: sweep.parameter must be delta, kappa or kappa_d");
    cfg.sweep = ax;
  }
  cfg.output = j.value("output", ".");
  cfg.workers = j.value("workers", 1);
  if (cfg.workers < 1) throw std::runtime_error("config: workers must be >= 1");
  if (j.contains("mode_options")) {
    const json& mo = j.at("mode_options");
    cfg.n_max = mo.value("n_max", cfg.n_max);
    if (mo.contains("delta_res")) cfg.delta_res = mo.at("delta_res").get<double>();
    if (mo.contains("window")) {
      auto w = mo.at("window").get<std::vector<double>>();
      if (w.size() != 2) throw std::runtime_error("config: mode_options.window needs [lo, hi]");
      cfg.window = {w[0], w[1]};
    }
    cfg.t_final = mo.value("t_final", 0.0);
    cfg.dt = mo.value("dt", 0.0);
  }
  if (cfg.mode == RunMode::spectrum && (!cfg.sweep || cfg.sweep->parameter != "delta"))
    throw std::runtime_error("config: spectrum mode needs a 'delta' sweep axis");
  if (cfg.mode == RunMode::g2scan &&
      (!cfg.sweep || (cfg.sweep->parameter != "kappa" && cfg.sweep->parameter != "kappa_d")))
    throw std::runtime_error("config: g2scan mode needs a 'kappa' or 'kappa_d' sweep axis");
  return cfg;
}

int run(const SweepConfig& cfg) {
  fs::create_directories(cfg.output);
  const fs::path out(cfg.output);
  std::vector<PointStatus> pts;
  std::vector<std::string> artifacts;
  const Grid grid(cfg.grid_n, cfg.params.d);

  switch (cfg.mode) {
    case RunMode::spectrum: {
      if (!cfg.sweep || cfg.sweep->parameter != "delta")
        throw std::runtime_error("spectrum mode needs a 'delta' sweep axis");
      const std::vector<double> deltas = axis_values(*cfg.sweep);
      const auto spec = transmission_spectrum(cfg.params, deltas, grid);
      std::ofstream f(out / "spectrum.csv");
      f << "delta,T_analytic,R_analytic,T_numeric,R_numeric\n";
      for (const auto& p : spec) {
        const auto cell = [](const std::optional<double>& v) {
          return v ? fmt_g(*v) : std::string();
        };
        f << fmt_g(p.delta) << "," << cell(p.T_analytic) << "," << cell(p.R_analytic) << ","
          << cell(p.T_numeric) << "," << cell(p.R_numeric) << "\n";
        pts.push_back({"delta=" + fmt_g(p.delta), p.error});
      }
      artifacts.push_back("spectrum.csv");
      break;
    }
    case RunMode::g2scan: {
      if (!cfg.sweep || (cfg.sweep->parameter != "kappa" && cfg.sweep->parameter != "kappa_d"))
        throw std::runtime_error("g2scan mode needs a 'kappa' or 'kappa_d' sweep axis");
      const bool scaled = cfg.sweep->parameter == "kappa_d";
      std::vector<double> kappas = axis_values(*cfg.sweep);
      if (scaled)
        for (double& k : kappas) k /= cfg.params.d;
      const auto scan = g2_scan(cfg.params, kappas, grid, cfg.workers);
      {
        std::ofstream f(out / "g2scan.csv");
        f << "kappa_d,g2,T,R\n";
        for (const auto& p : scan) {
          f << fmt_g(p.kappa_d) << "," << fmt_g(p.g2) << "," << fmt_g(p.T) << "," << fmt_g(p.R)
            << "\n";
          pts.push_back({"kappa_d=" + fmt_g(p.kappa_d), p.error});
        }
      }
      {
        const auto peaks = bunching_peaks(scan);
        std::ofstream f(out / "peaks.csv");
        f << "n_guess,kappa_d_peak,g2_peak\n";
        int i = 1;
        for (const auto& pk : peaks)
          f << i++ << "," << fmt_g(pk.kappa_d) << "," << fmt_g(pk.g2) << "\n";
      }
      artifacts.push_back("g2scan.csv");
      artifacts.push_back("peaks.csv");
      break;
    }
    case RunMode::modes: {
      std::ofstream f(out / "modes.csv");
      f << "n,kappa,re_k1,im_k1,re_k2,im_k2,re_E,im_E,branch,residual\n";
      const double kap = cfg.params.kappa.real();
      const auto emit = [&](int n, const ModeRoot& r) {
        f << n << "," << fmt_g(kap) << "," << fmt_g(r.k1.real()) << "," << fmt_g(r.k1.imag())
          << "," << fmt_g(r.k2.real()) << "," << fmt_g(r.k2.imag()) << ","
          << fmt_g(r.energy.real()) << "," << fmt_g(r.energy.imag()) << ","
          << (r.branch == Branch::bound ? "bound" : "free") << "," << fmt_g(r.residual) << "\n";
      };
      try {
        if (kap < 0.0) {
          const auto fam = bound_state_spectrum(cfg.params.d, kap, cfg.n_max);
          int n = 1;
          for (const auto& r : fam) emit(n++, r);
          pts.push_back({"bound_family", ""});
        } else {
          for (int m = 1; m <= cfg.n_max; ++m)
            for (int n = m; n <= cfg.n_max; ++n) {
              if (m == n) continue;  // degenerate free seed
              const auto r = two_particle_roots(cfg.params.d, kap, seed_free(cfg.params.d, m, n));
              emit(m * 10 + n, r);
            }
          pts.push_back({"free_pairs", ""});
        }
      } catch (const std::exception& e) {
        pts.push_back({"modes", e.what()});
      }
      artifacts.push_back("modes.csv");
      break;
    }
    case RunMode::resonances: {
      const double dres = cfg.delta_res.value_or(std::pow(M_PI / cfg.params.d, 2));
      const auto win = cfg.window.value_or(std::pair<double, double>{-12.0 / cfg.params.d, -0.5 / cfg.params.d});
      std::vector<int> nr;
      for (int n = 1; n <= cfg.n_max; ++n) nr.push_back(n);
      std::ofstream f(out / "resonances.csv");
      f << "n,kappa,kappa_d\n";
      try {
        const auto res = resonance_kappas(cfg.params.d, dres, nr, win.first, win.second);
        for (const auto& r : res)
          f << r.n << "," << fmt_g(r.kappa) << "," << fmt_g(r.kappa * cfg.params.d) << "\n";
        pts.push_back({"resonances", ""});
      } catch (const std::exception& e) {
        pts.push_back({"resonances", e.what()});
      }
      artifacts.push_back("resonances.csv");
      break;
    }
    case RunMode::fieldmap: {
      try {
        const LinearSolution lin = solve_single_photon(cfg.params, grid);
        FieldState s;
        s.theta = lin.theta;
        s.phi = solve_two_photon_steady(cfg.params, grid, lin.theta);
        save_field_state((out / "fieldmap").string(), s, grid, cfg.params);
        pts.push_back({"fieldmap", ""});
      } catch (const std::exception& e) {
        pts.push_back({"fieldmap", e.what()});
      }
      artifacts.push_back("fieldmap.json");
      break;
    }
    case RunMode::crosscheck: {
      std::vector<double> kappas;
      if (cfg.sweep) {
        kappas = axis_values(*cfg.sweep);
        if (cfg.sweep->parameter == "kappa_d")
          for (double& k : kappas) k /= cfg.params.d;
      } else {
        kappas.push_back(cfg.params.kappa.real());
      }
      const double period = 2.0 * M_PI / std::max(cfg.params.delta, 1.0);
      const double dt = cfg.dt > 0.0 ? cfg.dt : 0.04 * period;
      const double t_final =
          cfg.t_final > 0.0 ? cfg.t_final : 200.0 * 2.0 * M_PI / std::max(cfg.params.delta, 1e-6);
      std::ofstream f(out / "crosscheck.csv");
      f << "kappa_d,g2_steady,g2_timedomain,rel_diff,converged\n";
      for (double kap : kappas) {
        EffectiveParams p = cfg.params;
        p.kappa = kap;
        try {
          const LinearSolution lin = solve_single_photon(p, grid);
          FieldState s;
          s.theta = lin.theta;
          s.phi = solve_two_photon_steady(p, grid, lin.theta);
          const double gs = g2_zero(s, grid);
          const auto td = evolve_time_domain(p, grid, t_final, dt);
          const double gt = td.g2_series.empty() ? 0.0 : td.g2_series.back();
          f << fmt_g(kap * p.d) << "," << fmt_g(gs) << "," << fmt_g(gt) << ","
            << fmt_g(std::abs(gs - gt) / std::max(std::abs(gs), 1e-300)) << ","
            << (td.converged ? 1 : 0) << "\n";
          pts.push_back({"kappa_d=" + fmt_g(kap * p.d), td.converged ? "" : "unconverged"});
        } catch (const std::exception& e) {
          pts.push_back({"kappa_d=" + fmt_g(kap * p.d), e.what()});
        }
      }
      artifacts.push_back("crosscheck.csv");
      break;
    }
  }

  write_manifest(cfg, pts, artifacts);
  return exit_code(pts);
}

}  // namespace qnlse
