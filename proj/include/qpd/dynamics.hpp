#pragma once

#include <vector>

#include "qpd/spectral.hpp"

namespace qpd {

/// Lindblad generator data: Hermitian Hamiltonian plus jump operators with
/// nonnegative rates.
struct LindbladSpec {
  Operator hamiltonian;
  std::vector<std::pair<Operator, double>> jumps;

  /// Validates Hermiticity and rate signs.
  void validate() const;
};

struct EvolveOptions {
  int snapshot_stride = 1;          // store every k-th step (t = 0 always stored)
  double positivity_floor = -1e-6;  // abort threshold for the minimum eigenvalue
};

/// Fixed-step RK4 integration of
///   drho/dt = -i[H, rho] + sum gamma (L rho L^dag - 1/2 {L^dag L, rho}),
/// with Hermiticity restored by symmetrization each step. Rejects step sizes
/// violating dt (||H|| + sum gamma ||L||^2) < 0.1 and aborts if positivity
/// degrades beyond the floor. Returns the t = 0 state plus every stored
/// snapshot.
std::vector<DensityOperator> evolve(const DensityOperator& rho0, const LindbladSpec& spec,
                                    double dt, int steps, const EvolveOptions& options = {});

/// Per-snapshot QPD evaluation of a trajectory. s = 1 uses the exact
/// coherent-state symbol; other orders go through the spectral transform.
std::vector<QpdField> qpd_trajectory(std::span<const DensityOperator> trajectory, double s,
                                     const GcsBackend& backend, const KernelSpectrum& spectrum,
                                     GridPtr grid);

}  // namespace qpd
