#pragma once

#include "qpd/ccr.hpp"
#include "qpd/su2.hpp"

namespace qpd {

DensityOperator vacuum_state(const CcrSystem& sys);
DensityOperator fock_state(const CcrSystem& sys, int n);
DensityOperator coherent_state_density(const CcrSystem& sys, Complex alpha);
/// (1 - lambda) sum lambda^n |n><n| with lambda = nbar/(1+nbar), renormalized
/// after truncation.
DensityOperator thermal_state(const CcrSystem& sys, double nbar);

DensityOperator highest_weight_state(const SpinSystem& sys);
DensityOperator maximally_mixed_state(const HilbertSpec& space);
DensityOperator pure_state(const HilbertSpec& space, const Vector& psi);

/// Parses a preset name: vacuum | fock:n | coherent:re,im | thermal:nbar |
/// jj | mixed. Throws a config error for anything else.
DensityOperator state_preset(const HilbertSpec& space, const std::string& name);

}  // namespace qpd
