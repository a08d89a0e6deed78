#ifndef QNLSE_FIELDS_HPP
#define QNLSE_FIELDS_HPP

#include <Eigen/Dense>
#include <complex>

#include "qnlse/params.hpp"

namespace qnlse {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

/// Uniform grid on [0, d]: z_i = i*h, h = d/(n-1).
struct Grid {
  int n;
  double d;

  Grid(int n_, double d_);
  double h() const { return d / (n - 1); }
  double z(int i) const { return i * h(); }
};

/// Truncated weak-drive state: vacuum amplitude, one-photon envelope on the
/// grid and symmetric two-photon envelope on the grid square. Envelopes are
/// the slowly varying parts; full fields carry e^{-i delta t} (theta) and
/// e^{-2i delta t} (phi).
struct FieldState {
  cplx epsilon{1.0, 0.0};
  VecC theta;
  MatC phi;
};

/// ||phi - phi^T||_inf relative to max|phi| (0 for an empty/zero phi).
double symmetry_residual(const MatC& phi);

/// phi <- (phi + phi^T)/2.
void symmetrize(MatC& phi);

/// Factorized coherent reference: phi = theta (x) theta / 2, epsilon = 1.
/// This is the exact steady state for kappa = 0.
FieldState coherent_factorized(const VecC& theta, const Grid& grid);

}  // namespace qnlse

#endif
