#include "qnlse/observables.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qnlse/linear.hpp"
#include "qnlse/nlse2.hpp"

namespace qnlse {

double g2_zero(const FieldState& state, const Grid& grid) {
  const int n = grid.n;
  if (state.theta.size() != n || state.phi.rows() != n || state.phi.cols() != n)
    throw std::invalid_argument("g2_zero: state does not match grid");
  const double h = grid.h();

  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    integral += w * std::norm(state.phi(i, n - 1));
  }
  const double den = std::norm(state.theta(n - 1)) + 4.0 * integral;
  if (den == 0.0)
    throw std::runtime_error("g2_zero: zero output intensity, correlation undefined");
  const double num = 4.0 * std::norm(state.phi(n - 1, n - 1));
  return num / (den * den);
}

std::vector<ScanPoint> g2_scan(const EffectiveParams& params_base,
                               const std::vector<double>& kappas, const Grid& grid,
                               int workers) {
  // theta is kappa-independent; solve it once.
  LinearSolution lin = solve_single_photon(params_base, grid);

  std::vector<ScanPoint> out(kappas.size());
  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < kappas.size(); i = next.fetch_add(1)) {
      ScanPoint& pt = out[i];
      pt.kappa_d = kappas[i] * params_base.d;
      try {
        EffectiveParams p = params_base;
        p.kappa = kappas[i];
        FieldState s;
        s.theta = lin.theta;
        s.phi = solve_two_photon_steady(p, grid, lin.theta);
        pt.g2 = g2_zero(s, grid);
        pt.T = lin.T.value_or(0.0);
        pt.R = lin.R.value_or(0.0);
      } catch (const std::exception& e) {
        pt.error = e.what();
      }
    }
  };

  const int nw = std::max(1, workers);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::vector<Peak> bunching_peaks(const std::vector<ScanPoint>& scan) {
  std::vector<const ScanPoint*> ok;
  for (const auto& p : scan)
    if (p.error.empty()) ok.push_back(&p);

  std::vector<Peak> peaks;
  for (size_t i = 1; i + 1 < ok.size(); ++i) {
    const double gl = ok[i - 1]->g2, gc = ok[i]->g2, gr = ok[i + 1]->g2;
    if (gc <= 1.0 || gc < gl || gc < gr) continue;
    if (gc == gl && gc == gr) continue;  // flat plateau, not a peak
    // Parabolic refinement through the three points.
    const double xl = ok[i - 1]->kappa_d, xc = ok[i]->kappa_d, xr = ok[i + 1]->kappa_d;
    const double denom = (gl - 2.0 * gc + gr);
    double x = xc, g = gc;
    if (denom < 0.0) {
      const double t = 0.5 * (gl - gr) / denom;
      x = xc + t * 0.5 * (xr - xl);
      g = gc - 0.25 * (gl - gr) * t;
    }
    peaks.push_back({x, g});
  }
  return peaks;
}

}  // namespace qnlse
