#ifndef QNLSE_PARAMS_HPP
#define QNLSE_PARAMS_HPP

#include <complex>
#include <optional>

namespace qnlse {

using cplx = std::complex<double>;

/// Atomic-ensemble quantities entering the effective-parameter map.
/// All rates/detunings share one rate unit; density and length share one
/// length unit.
struct PhysicalParams {
  double gamma;     // total spontaneous emission rate
  double gamma_1d;  // emission rate into the guided mode (<= gamma)
  double delta1;    // one-photon detuning
  double delta2;    // nonlinearity detuning
  double delta3;    // two-photon detuning
  double rabi;      // control-field amplitude
  double density;   // linear atomic density
  double length;    // medium length
};

/// Dimensionless parameters of the effective-mass nonlinear Schroedinger
/// model: i dPsi/dt = -(1/2m) Psi'' + 2 kappa |Psi|^2 Psi on 0 <= z <= d,
/// driven at z=0 with amplitude alpha0 at detuning delta.
struct EffectiveParams {
  cplx mass;
  cplx kappa;
  double d;
  double delta;
  double alpha0;
  bool weak_drive;  // (alpha0*d)^2 small enough for the two-photon truncation

  // Set only when derived from PhysicalParams.
  std::optional<double> l_coh;
  std::optional<double> t_coh;
  std::optional<double> od;
  std::optional<cplx> kappa_raw;  // interaction strength as derived (== kappa)
};

/// (alpha0*d)^2 below this counts as weakly driven.
inline constexpr double kWeakDriveThreshold = 0.1;

/// Map atomic parameters onto the dimensionless effective model.
/// Throws std::invalid_argument on delta1 == 0 or non-positive rates/lengths.
EffectiveParams derive_effective_params(const PhysicalParams& p, double alpha0);

/// Direct-entry construction for sweeps in (m, kappa, d); coherence scales
/// and OD are left unset. Throws on Re(m) <= 0, Im(m) < 0, or d <= 0.
EffectiveParams make_effective(cplx m, cplx kappa, double d, double delta,
                               double alpha0);

}  // namespace qnlse

#endif
