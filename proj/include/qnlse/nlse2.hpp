#ifndef QNLSE_NLSE2_HPP
#define QNLSE_NLSE2_HPP

#include <vector>

#include "qnlse/fields.hpp"
#include "qnlse/params.hpp"

namespace qnlse {

/// Driven two-photon steady state on the grid square:
///   -(1/2m)(d^2_{z1} + d^2_{z2}) phi + (2 kappa / h) [z1 = z2] phi = 2 delta phi
/// with inhomogeneous Robin rows
///   phi(0, z2) - i d_{z1} phi(0, z2) = (alpha0/sqrt(2)) theta(z2)
/// (exchange counterpart on z2) and outgoing rows at z1 = d, z2 = d. Corner
/// nodes take the z1 row; exchange symmetry restores the z2 condition and is
/// verified post-solve. theta must be the single-photon steady state for the
/// same params. Returns the symmetrized phi.
MatC solve_two_photon_steady(const EffectiveParams& params, const Grid& grid,
                             const VecC& theta);

/// Residual of the last steady solve's exchange-symmetry check, relative to
/// max|phi| (diagnostic; a value above 1e-8 throws inside the solve).
double last_symmetry_residual();

struct TimeDomainOptions {
  double convergence_tol = 1e-4;  // successive-period relative change in g2
  bool closed_box = false;        // hard walls, no drive (oracle variant)
  double sample_interval = 0.0;   // 0: one drive period 2 pi / max(delta, 1)
  const FieldState* initial = nullptr;  // default: zero fields
};

struct TimeDomainResult {
  FieldState state;
  std::vector<double> g2_series;    // one sample per interval (driven runs)
  std::vector<double> norm_series;  // integral |phi|^2 per sample
  bool converged = false;
  double t_end = 0.0;
};

/// Implicit-midpoint integration of the coupled theta/phi equations with the
/// explicitly time-periodic drive e^{-i delta t}, from zero initial fields.
/// Independent cross-check for the steady solver. Requires
/// dt < 0.05 * 2 pi / max(delta, 1); dt is snapped so samples land exactly on
/// sample-interval boundaries (stroboscopic with the drive by default).
TimeDomainResult evolve_time_domain(const EffectiveParams& params, const Grid& grid,
                                    double t_final, double dt,
                                    const TimeDomainOptions& opts = {});

/// Lowest relative-coordinate eigenvalue of the two-body operator
/// -2 d^2/dr^2 + (2 kappa / h) [r = 0] on a closed box (m = 1/2), via shifted
/// inverse iteration. Converges to -kappa^2/2 as h -> 0 for kappa < 0.
/// Throws when the box is too small (kappa < 0 and box < 20/|kappa|, or the
/// wavefunction tail at the walls exceeds 1e-6).
double bound_state_binding_check(double kappa, double box, int n);

}  // namespace qnlse

#endif
