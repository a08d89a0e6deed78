#ifndef QNLSE_BETHE_HPP
#define QNLSE_BETHE_HPP

#include <complex>
#include <vector>

#include "qnlse/params.hpp"

namespace qnlse {

/// Open-boundary two-particle quantization condition,
///   e^{2 i k_i d} = ((k_i+1)/(k_i-1))^2
///                   * ((k_i-k_j+i kappa)(k_i+k_j+i kappa))
///                   / ((k_i-k_j-i kappa)(k_i+k_j-i kappa)),
/// for (i,j) = (1,2) and (2,1). kappa is treated as real (dispersive limit).

enum class Branch { free_pair, bound };

struct ModeRoot {
  cplx k1, k2;
  cplx energy;   // k1^2 + k2^2
  Branch branch = Branch::free_pair;
  double residual = 0.0;  // max |LHS - RHS| over i = 1, 2
  bool converged = false;
};

/// |LHS - RHS| of the quantization condition, normalized by
/// max(1, |LHS|, |RHS|) and re-evaluated independently of the Newton loop
/// (both sides diverge together near bound pairs, where k2 - k1 -> i kappa).
double quantization_residual(cplx k1, cplx k2, double d, double kappa);

/// Bound pairs have one member with Im ~ +|kappa|/2; free pairs only carry
/// negative radiative widths.
bool is_bound_pair(cplx k1, cplx k2, double kappa, double threshold_frac = 0.25);

/// Complex roots of the single-particle condition e^{2ikd} = (k+1)^2/(k-1)^2
/// near n pi / d, n = 1..n_max, by damped Newton. Roots that fail to converge
/// are omitted.
std::vector<cplx> single_particle_roots(double d, int n_max);

/// Asymptotic seeds.
ModeRoot seed_free(double d, int m, int n);                  // (m pi/d, n pi/d)
ModeRoot seed_bound(double d, double kappa, int n);          // n pi/d +- i kappa/2

/// Damped Newton in C^2 from the seed; trust radius pi/(4d) against branch
/// hopping. Signs flipped to Re >= 0; bound pairs ordered by descending Im,
/// free pairs by Re(k1) <= Re(k2). Throws on divergence (message carries the
/// last iterate).
ModeRoot two_particle_roots(double d, double kappa, const ModeRoot& seed);

/// Continuation of a root from kappa_from to kappa_to in adaptive steps.
ModeRoot track_root(double d, double kappa_from, double kappa_to, const ModeRoot& start);

/// Bound-branch roots for kappa < 0, ordered by Re(k1 + k2); index in the
/// returned list is the branch label n = 1, 2, ... The list enumerates the
/// complete bound family (spacing ~pi/(2d) in Re k, twice as dense as the
/// integer-n large-d labels). May return fewer than n_max entries when
/// branches leave the searched window.
std::vector<ModeRoot> bound_state_spectrum(double d, double kappa, int n_max);

struct ResonanceCrossing {
  int n;         // bound-family branch index
  double kappa;  // crossing Re(E_n(kappa)) = 2 delta_res
};

/// For each branch index in n_range, scalar root-find in kappa of
/// Re(E_n(kappa)) - 2 delta_res over [kappa_lo, kappa_hi] (attractive window,
/// both negative). Branches with no crossing in the window are omitted.
std::vector<ResonanceCrossing> resonance_kappas(double d, double delta_res,
                                                const std::vector<int>& n_range,
                                                double kappa_lo, double kappa_hi);

}  // namespace qnlse

#endif
