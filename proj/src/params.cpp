#include "qnlse/params.hpp"

#include <cmath>
#include <stdexcept>

namespace qnlse {

EffectiveParams derive_effective_params(const PhysicalParams& p, double alpha0) {
  if (p.gamma <= 0 || p.rabi <= 0 || p.density <= 0 || p.length <= 0)
    throw std::invalid_argument("derive_effective_params: rates, density and length must be positive");
  if (p.gamma_1d <= 0 || p.gamma_1d > p.gamma)
    throw std::invalid_argument("derive_effective_params: need 0 < gamma_1d <= gamma");
  if (p.delta1 == 0.0)
    throw std::invalid_argument("derive_effective_params: delta1 = 0 leaves the effective mass undefined");

  const double ad1 = std::abs(p.delta1);
  EffectiveParams e;
  e.mass = 0.5 * cplx(1.0, p.gamma / (2.0 * ad1));

  const double l_coh =
      2.0 * (p.delta1 * p.delta1 + p.gamma * p.gamma / 4.0) / (p.gamma_1d * p.density * ad1);
  const double t_coh = ad1 / (2.0 * p.rabi * p.rabi);

  // Ratio of rates: already dimensionless in the coherence-scaled units.
  const cplx kappa_raw = p.gamma_1d / (4.0 * cplx(p.delta2, p.gamma / 2.0));
  e.kappa = kappa_raw;
  e.kappa_raw = kappa_raw;

  e.d = p.length / l_coh;
  e.delta = p.delta3 * t_coh;
  e.alpha0 = alpha0;
  e.weak_drive = (alpha0 * e.d) * (alpha0 * e.d) < kWeakDriveThreshold;
  e.l_coh = l_coh;
  e.t_coh = t_coh;
  e.od = p.density * p.length * p.gamma_1d / p.gamma;
  return e;
}

EffectiveParams make_effective(cplx m, cplx kappa, double d, double delta, double alpha0) {
  if (m.real() <= 0.0)
    throw std::invalid_argument("make_effective: Re(m) must be positive");
  if (m.imag() < 0.0)
    throw std::invalid_argument("make_effective: Im(m) < 0 (gain) unsupported");
  if (d <= 0.0)
    throw std::invalid_argument("make_effective: d must be positive");

  EffectiveParams e;
  e.mass = m;
  e.kappa = kappa;
  e.d = d;
  e.delta = delta;
  e.alpha0 = alpha0;
  e.weak_drive = (alpha0 * d) * (alpha0 * d) < kWeakDriveThreshold;
  return e;
}

}  // namespace qnlse
