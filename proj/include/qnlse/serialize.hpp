#ifndef QNLSE_SERIALIZE_HPP
#define QNLSE_SERIALIZE_HPP

#include <string>

#include "qnlse/fields.hpp"
#include "qnlse/params.hpp"

namespace qnlse {

/// FieldState on disk: <base>.json header (grid + params + payload file
/// names), <base>_theta.csv (z,re,im rows), <base>_phi_abs.csv and
/// <base>_phi_arg.csv (n x n row-major tables, row index = z1).
void save_field_state(const std::string& base, const FieldState& state,
                      const Grid& grid, const EffectiveParams& params);

/// Fixed-format float for byte-stable CSV output.
std::string fmt_g(double v);

}  // namespace qnlse

#endif
