#include "qnlse/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qnlse {

namespace {

constexpr cplx kI{0.0, 1.0};

// Entire (pole-free) form of the quantization condition: zeros coincide with
// the literal equation away from the removable factors.
cplx quantization_entire(cplx ki, cplx kj, double d, double kappa) {
  const cplx ikap = kI * kappa;
  return std::exp(2.0 * kI * ki * d) * (ki - 1.0) * (ki - 1.0) *
             ((ki - kj - ikap) * (ki + kj - ikap)) -
         (ki + 1.0) * (ki + 1.0) * ((ki - kj + ikap) * (ki + kj + ikap));
}

void eval_pair(const cplx k[2], double d, double kappa, cplx F[2]) {
  F[0] = quantization_entire(k[0], k[1], d, kappa);
  F[1] = quantization_entire(k[1], k[0], d, kappa);
}

// Damped Newton in C^2 with trust radius; returns false on failure.
bool newton_pair(cplx k[2], double d, double kappa, double trust, int maxit = 300) {
  const double tol = 1e-13;
  cplx F[2];
  for (int it = 0; it < maxit; ++it) {
    eval_pair(k, d, kappa, F);
    const double f0 = std::max(std::abs(F[0]), std::abs(F[1]));

    // Numerical Jacobian (holomorphic, real difference step).
    cplx J[2][2];
    for (int j = 0; j < 2; ++j) {
      const double hstep = 1e-7 * std::max(1.0, std::abs(k[j]));
      cplx kp[2] = {k[0], k[1]};
      kp[j] += hstep;
      cplx Fp[2];
      eval_pair(kp, d, kappa, Fp);
      J[0][j] = (Fp[0] - F[0]) / hstep;
      J[1][j] = (Fp[1] - F[1]) / hstep;
    }
    const cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (std::abs(det) == 0.0) return false;
    cplx step[2] = {(F[0] * J[1][1] - F[1] * J[0][1]) / det,
                    (F[1] * J[0][0] - F[0] * J[1][0]) / det};

    double sn = std::max(std::abs(step[0]), std::abs(step[1]));
    if (sn > trust) {
      step[0] *= trust / sn;
      step[1] *= trust / sn;
      sn = trust;
    }
    double lam = 1.0;
    while (lam > 1e-8) {
      const cplx kn[2] = {k[0] - lam * step[0], k[1] - lam * step[1]};
      cplx Fn[2];
      eval_pair(kn, d, kappa, Fn);
      if (std::max(std::abs(Fn[0]), std::abs(Fn[1])) < f0) break;
      lam *= 0.5;
    }
    k[0] -= lam * step[0];
    k[1] -= lam * step[1];
    if (lam * sn < tol * std::max(1.0, std::max(std::abs(k[0]), std::abs(k[1])))) return true;
  }
  return false;
}

ModeRoot finish_root(cplx k1, cplx k2, double d, double kappa) {
  // Sign symmetry k_i -> -k_i; canonical Re >= 0. Bound pairs are ordered by
  // descending Im (their Re parts nearly coincide), free pairs by Re.
  if (k1.real() < 0.0) k1 = -k1;
  if (k2.real() < 0.0) k2 = -k2;
  if (is_bound_pair(k1, k2, kappa) ? k2.imag() > k1.imag() : k2.real() < k1.real())
    std::swap(k1, k2);
  ModeRoot r;
  r.k1 = k1;
  r.k2 = k2;
  r.energy = k1 * k1 + k2 * k2;
  r.residual = quantization_residual(k1, k2, d, kappa);
  r.converged = r.residual < 1e-10;
  r.branch = is_bound_pair(k1, k2, kappa) ? Branch::bound : Branch::free_pair;
  return r;
}

}  // namespace

double quantization_residual(cplx k1, cplx k2, double d, double kappa) {
  const cplx ikap = kI * kappa;
  double worst = 0.0;
  const cplx ks[2][2] = {{k1, k2}, {k2, k1}};
  for (const auto& kk : ks) {
    const cplx ki = kk[0], kj = kk[1];
    const cplx lhs = std::exp(2.0 * kI * ki * d);
    const cplx rhs = (ki + 1.0) * (ki + 1.0) / ((ki - 1.0) * (ki - 1.0)) *
                     ((ki - kj + ikap) * (ki + kj + ikap)) /
                     ((ki - kj - ikap) * (ki + kj - ikap));
    // Normalize by the larger side: on bound branches k2 - k1 approaches
    // i kappa and both sides blow up together, leaving a clean relative error.
    worst = std::max(worst,
                     std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
  return worst;
}

bool is_bound_pair(cplx k1, cplx k2, double kappa, double threshold_frac) {
  // Free pairs only carry (negative) radiative widths; a positive Im of
  // order kappa/2 marks the attractively bound branch.
  return std::max(k1.imag(), k2.imag()) > threshold_frac * std::abs(kappa);
}

std::vector<cplx> single_particle_roots(double d, int n_max) {
  if (d <= 0.0) throw std::invalid_argument("single_particle_roots: d must be positive");
  std::vector<cplx> roots;
  for (int n = 1; n <= n_max; ++n) {
    // Asymptotic seed n pi/d - 2 n pi i/d^2.
    cplx k(n * M_PI / d, -2.0 * n * M_PI / (d * d));
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
      const cplx f = std::exp(2.0 * kI * k * d) * (k - 1.0) * (k - 1.0) - (k + 1.0) * (k + 1.0);
      const double hstep = 1e-8 * std::max(1.0, std::abs(k));
      const cplx kp = k + hstep;
      const cplx fp = std::exp(2.0 * kI * kp * d) * (kp - 1.0) * (kp - 1.0) - (kp + 1.0) * (kp + 1.0);
      const cplx df = (fp - f) / hstep;
      if (std::abs(df) == 0.0) break;
      cplx step = f / df;
      const double trust = M_PI / (4.0 * d);
      if (std::abs(step) > trust) step *= trust / std::abs(step);
      double lam = 1.0;
      while (lam > 1e-8) {
        const cplx kn = k - lam * step;
        const cplx fn =
            std::exp(2.0 * kI * kn * d) * (kn - 1.0) * (kn - 1.0) - (kn + 1.0) * (kn + 1.0);
        if (std::abs(fn) < std::abs(f)) break;
        lam *= 0.5;
      }
      k -= lam * step;
      if (lam * std::abs(step) < 1e-14 * std::max(1.0, std::abs(k))) {
        ok = true;
        break;
      }
    }
    const cplx lhs = std::exp(2.0 * kI * k * d);
    const cplx rhs = (k + 1.0) * (k + 1.0) / ((k - 1.0) * (k - 1.0));
    if (ok && std::abs(lhs - rhs) < 1e-12) roots.push_back(k);
    // Diverged seeds are omitted.
  }
  return roots;
}

ModeRoot seed_free(double d, int m, int n) {
  ModeRoot r;
  r.k1 = cplx(m * M_PI / d, -2.0 * m * M_PI / (d * d));
  r.k2 = cplx(n * M_PI / d, -2.0 * n * M_PI / (d * d));
  r.branch = Branch::free_pair;
  return r;
}

ModeRoot seed_bound(double d, double kappa, int n) {
  ModeRoot r;
  r.k1 = cplx(n * M_PI / d, -std::abs(kappa) / 2.0);
  r.k2 = cplx(n * M_PI / d, std::abs(kappa) / 2.0);
  r.branch = Branch::bound;
  return r;
}

ModeRoot two_particle_roots(double d, double kappa, const ModeRoot& seed) {
  if (d <= 0.0) throw std::invalid_argument("two_particle_roots: d must be positive");
  cplx k[2] = {seed.k1, seed.k2};
  if (!newton_pair(k, d, kappa, M_PI / (4.0 * d))) {
    std::ostringstream os;
    os << "two_particle_roots: Newton diverged, last iterate k1=(" << k[0].real() << ","
       << k[0].imag() << ") k2=(" << k[1].real() << "," << k[1].imag() << ")";
    throw std::runtime_error(os.str());
  }
  return finish_root(k[0], k[1], d, kappa);
}

ModeRoot track_root(double d, double kappa_from, double kappa_to, const ModeRoot& start) {
  ModeRoot cur = start;
  double kap = kappa_from;
  double step = (kappa_to > kappa_from ? 1.0 : -1.0) * std::min(0.5 / d, std::abs(kappa_to - kappa_from));
  const double jump_limit = M_PI / (2.0 * d);
  int guard = 0;
  while (std::abs(kap - kappa_to) > 1e-15 && guard++ < 100000) {
    double next = kap + step;
    if ((step > 0 && next > kappa_to) || (step < 0 && next < kappa_to)) next = kappa_to;
    ModeRoot cand = cur;
    bool ok = true;
    try {
      cand = two_particle_roots(d, next, cur);
    } catch (const std::runtime_error&) {
      ok = false;
    }
    if (ok && std::abs(cand.k1 - cur.k1) < jump_limit && std::abs(cand.k2 - cur.k2) < jump_limit) {
      cur = cand;
      kap = next;
      step *= 1.5;
      if (std::abs(step) > 0.5 / d) step = (step > 0 ? 0.5 : -0.5) / d;
    } else {
      step *= 0.5;
      if (std::abs(step) < 1e-12)
        throw std::runtime_error("track_root: continuation stalled (branch loss)");
    }
  }
  return cur;
}

std::vector<ModeRoot> bound_state_spectrum(double d, double kappa, int n_max) {
  if (kappa >= 0.0)
    throw std::invalid_argument("bound_state_spectrum: bound branch needs kappa < 0");
  std::vector<ModeRoot> found;
  // Seed on a quarter lattice of the ~pi/(2d) family spacing: basins of the
  // individual branches are narrow and integer-spaced seeds skip members.
  const int jmax = 4 * (n_max + 5);
  for (int j = 1; j <= jmax; ++j) {
    const double re = j * M_PI / (8.0 * d);
    ModeRoot seed;
    seed.k1 = cplx(re, kappa / 2.0);
    seed.k2 = cplx(re, -kappa / 2.0);
    seed.branch = Branch::bound;
    ModeRoot r;
    try {
      r = two_particle_roots(d, kappa, seed);
    } catch (const std::runtime_error&) {
      // Continuation fallback from half the interaction strength.
      try {
        ModeRoot mid = two_particle_roots(d, kappa / 2.0, seed);
        r = track_root(d, kappa / 2.0, kappa, mid);
      } catch (const std::runtime_error&) {
        continue;
      }
    }
    if (!r.converged || r.branch != Branch::bound) continue;
    // k_i = 0 satisfies the entire form identically; discard such artifacts.
    if (std::min(std::abs(r.k1), std::abs(r.k2)) < 1e-6) continue;
    if (r.k1.real() < 1e-5 && r.k2.real() < 1e-5) continue;
    bool dup = false;
    for (const auto& q : found)
      if (std::abs(q.k1 - r.k1) < 1e-6 && std::abs(q.k2 - r.k2) < 1e-6) dup = true;
    if (!dup) found.push_back(r);
  }
  std::sort(found.begin(), found.end(), [](const ModeRoot& a, const ModeRoot& b) {
    return (a.k1 + a.k2).real() < (b.k1 + b.k2).real();
  });
  if (static_cast<int>(found.size()) > n_max) found.resize(n_max);
  return found;
}

std::vector<ResonanceCrossing> resonance_kappas(double d, double delta_res,
                                                const std::vector<int>& n_range,
                                                double kappa_lo, double kappa_hi) {
  if (delta_res <= 0.0)
    throw std::invalid_argument("resonance_kappas: delta_res must be positive");
  if (!(kappa_lo < kappa_hi) || kappa_hi >= 0.0)
    throw std::invalid_argument("resonance_kappas: window must be attractive, kappa_lo < kappa_hi < 0");

  const double target = 2.0 * delta_res;
  // Reference interaction where the family is cleanly separated from the
  // radiative widths; clamp into the window.
  const double kappa_ref = std::max(kappa_lo, std::min(kappa_hi, -5.0 / d));
  int n_top = 0;
  for (int n : n_range) n_top = std::max(n_top, n);
  const std::vector<ModeRoot> fam = bound_state_spectrum(d, kappa_ref, n_top);

  std::vector<ResonanceCrossing> out;
  for (int n : n_range) {
    if (n < 1 || n > static_cast<int>(fam.size())) continue;

    // March from the reference toward one window edge; on a sign change of
    // Re(E) - target, bisect with continuation from the near bracket end.
    const auto march = [&](double to) -> std::optional<double> {
      double a = kappa_ref;
      ModeRoot root_a = fam[n - 1];
      double fa = root_a.energy.real() - target;
      const int steps =
          std::max(2, static_cast<int>(std::ceil(std::abs(to - a) * d / 0.05)));
      double b = 0.0, fb = 0.0;
      bool bracketed = false;
      for (int s = 1; s <= steps && !bracketed; ++s) {
        const double kb = kappa_ref + (to - kappa_ref) * s / steps;
        ModeRoot rb;
        try {
          rb = track_root(d, a, kb, root_a);
        } catch (const std::runtime_error&) {
          return std::nullopt;  // branch lost; crossing unreachable
        }
        fb = rb.energy.real() - target;
        if (fa * fb <= 0.0) {
          b = kb;
          bracketed = true;
        } else {
          a = kb;
          fa = fb;
          root_a = rb;
        }
      }
      if (!bracketed) return std::nullopt;
      for (int it = 0; it < 60 && std::abs(b - a) > 1e-12; ++it) {
        const double mid = 0.5 * (a + b);
        ModeRoot rm = track_root(d, a, mid, root_a);
        const double fm = rm.energy.real() - target;
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
          root_a = rm;
        }
      }
      return 0.5 * (a + b);
    };

    std::optional<double> cross = march(kappa_lo);
    if (!cross) cross = march(kappa_hi);
    if (cross) out.push_back({n, *cross});
  }
  return out;
}

}  // namespace qnlse
