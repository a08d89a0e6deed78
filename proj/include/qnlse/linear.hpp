#ifndef QNLSE_LINEAR_HPP
#define QNLSE_LINEAR_HPP

#include <optional>
#include <string>
#include <vector>

#include "qnlse/fields.hpp"
#include "qnlse/params.hpp"

namespace qnlse {

/// Driven single-photon steady state theta'' + 2 m delta theta = 0 with
/// Robin rows  theta(0) - i theta'(0) = sqrt(2) alpha0  and
/// theta(d) + i theta'(d) = 0.
struct LinearSolution {
  VecC theta;
  cplx psi_plus_out{0.0};   // Psi_+(d), transmitted amplitude
  cplx psi_minus_out{0.0};  // Psi_-(0), reflected amplitude
  std::optional<double> T;  // empty when alpha0 = 0 (undriven)
  std::optional<double> R;
};

/// Second-order finite-difference solve on the grid. kappa is ignored by
/// construction. Throws std::invalid_argument when the grid underresolves
/// the wavelength (h |Re sqrt(2 m delta)| >= 0.2) and std::runtime_error,
/// naming the smallest singular value, when the discrete operator is
/// defective.
LinearSolution solve_single_photon(const EffectiveParams& params, const Grid& grid);

/// Closed-form two-wave solution theta = A e^{ikz} + B e^{-ikz},
/// k = sqrt(2 m delta) (principal branch); k -> 0 handled by the linear
/// profile limit. Serves as the oracle for solve_single_photon.
LinearSolution analytic_single_photon(const EffectiveParams& params, const Grid& grid);

struct SpectrumPoint {
  double delta;
  std::optional<double> T_analytic, R_analytic, T_numeric, R_numeric;
  std::string error;  // empty on success; per-point failures do not abort the sweep
};

std::vector<SpectrumPoint> transmission_spectrum(const EffectiveParams& params,
                                                 const std::vector<double>& deltas,
                                                 const Grid& grid);

}  // namespace qnlse

#endif
