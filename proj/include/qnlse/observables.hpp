#ifndef QNLSE_OBSERVABLES_HPP
#define QNLSE_OBSERVABLES_HPP

#include <optional>
#include <string>
#include <vector>

#include "qnlse/fields.hpp"
#include "qnlse/params.hpp"

namespace qnlse {

/// Zero-delay second-order correlation of the transmitted field,
///   g2(0) = 4 |phi(d,d)|^2 / (|theta(d)|^2 + 4 int dz |phi(z,d)|^2)^2,
/// integral by trapezoid on the grid. Throws when the denominator vanishes.
double g2_zero(const FieldState& state, const Grid& grid);

struct ScanPoint {
  double kappa_d;
  double g2 = 0.0;
  double T = 0.0;
  double R = 0.0;
  std::string error;  // per-point failures recorded, sweep continues
};

/// Full pipeline (single-photon solve -> two-photon solve -> g2) per kappa.
/// The base detuning is expected at the first transmission resonance
/// (pi/d)^2; kappas are raw interaction strengths (output reports kappa*d).
std::vector<ScanPoint> g2_scan(const EffectiveParams& params_base,
                               const std::vector<double>& kappas, const Grid& grid,
                               int workers = 1);

struct Peak {
  double kappa_d;
  double g2;
};

/// Local maxima with g2 > 1, parabolically refined. Expects a scan sorted in
/// kappa_d; failed points are skipped.
std::vector<Peak> bunching_peaks(const std::vector<ScanPoint>& scan);

}  // namespace qnlse

#endif
