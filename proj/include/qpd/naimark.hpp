#pragma once

#include "qpd/ccr.hpp"

namespace qpd {

/// Commuting composite quadratures on the doubled space:
/// q_comp = q x 1 - 1 x q, p_comp = p x 1 + 1 x p. The commutator vanishes
/// identically away from the truncation edge; both norms are reported.
struct CompositePair {
  Operator q_comp;
  Operator p_comp;
  int cutoff = 0;
  double interior_commutator_norm = 0.0;  // restricted to n1 + n2 <= N/2
  double full_commutator_norm = 0.0;
};

/// Builds the composite pair. Requires cutoff >= 16.
CompositePair composite_pair(int cutoff);

/// Joint distribution of the approximately simultaneous (q, p) measurement
/// with the given probe state: the product of the system and probe
/// characteristic functions, inverse-Fourier-transformed on the grid. With a
/// vacuum probe this reproduces the Husimi distribution. The output is a
/// probability density: nonnegative within -1e-9 and of unit mass within
/// 1e-4 (validated).
QpdField joint_distribution(const DensityOperator& rho, const Vector& probe, GridPtr grid);

}  // namespace qpd
