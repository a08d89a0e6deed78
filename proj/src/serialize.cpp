#include "qnlse/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qnlse {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void save_field_state(const std::string& base, const FieldState& state,
                      const Grid& grid, const EffectiveParams& params) {
  const int n = grid.n;
  if (state.theta.size() != n || state.phi.rows() != n || state.phi.cols() != n)
    throw std::invalid_argument("save_field_state: state does not match grid");

  nlohmann::json hdr;
  hdr["grid"] = {{"n", n}, {"d", grid.d}, {"h", grid.h()}};
  hdr["params"] = {{"m_re", params.mass.real()},   {"m_im", params.mass.imag()},
                   {"kappa_re", params.kappa.real()}, {"kappa_im", params.kappa.imag()},
                   {"d", params.d},                 {"delta", params.delta},
                   {"alpha0", params.alpha0},       {"weak_drive", params.weak_drive}};
  hdr["epsilon"] = {state.epsilon.real(), state.epsilon.imag()};
  hdr["payload"] = {{"theta", base + "_theta.csv"},
                    {"phi_abs", base + "_phi_abs.csv"},
                    {"phi_arg", base + "_phi_arg.csv"}};
  {
    std::ofstream f(base + ".json");
    if (!f) throw std::runtime_error("save_field_state: cannot open " + base + ".json");
    f << hdr.dump(2) << "\n";
  }
  {
    std::ofstream f(base + "_theta.csv");
    f << "z,re_theta,im_theta\n";
    for (int i = 0; i < n; ++i)
      f << fmt_g(grid.z(i)) << "," << fmt_g(state.theta(i).real()) << ","
        << fmt_g(state.theta(i).imag()) << "\n";
  }
  const auto write_table = [&](const std::string& path, bool take_abs) {
    std::ofstream f(path);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx v = state.phi(i, j);
        f << (j ? "," : "") << fmt_g(take_abs ? std::abs(v) : std::arg(v));
      }
      f << "\n";
    }
  };
  write_table(base + "_phi_abs.csv", true);
  write_table(base + "_phi_arg.csv", false);
}

}  // namespace qnlse
