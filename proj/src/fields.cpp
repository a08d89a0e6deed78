#include "qnlse/fields.hpp"

#include <stdexcept>

namespace qnlse {

Grid::Grid(int n_, double d_) : n(n_), d(d_) {
  if (n < 16) throw std::invalid_argument("Grid: need n >= 16");
  if (d <= 0.0) throw std::invalid_argument("Grid: need d > 0");
}

double symmetry_residual(const MatC& phi) {
  if (phi.size() == 0) return 0.0;
  const double scale = phi.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (phi - phi.transpose()).cwiseAbs().maxCoeff() / scale;
}

void symmetrize(MatC& phi) {
  phi = 0.5 * (phi + phi.transpose()).eval();
}

FieldState coherent_factorized(const VecC& theta, const Grid& grid) {
  if (theta.size() != grid.n)
    throw std::invalid_argument("coherent_factorized: theta size does not match grid");
  FieldState s;
  s.epsilon = 1.0;
  s.theta = theta;
  s.phi = 0.5 * (theta * theta.transpose());
  return s;
}

}  // namespace qnlse
