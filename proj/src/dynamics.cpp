#include "qpd/dynamics.hpp"

#include <cmath>

namespace qpd {

void LindbladSpec::validate() const {
  if (hamiltonian.hermiticity_defect() > 1e-12)
    throw Error(ErrorCategory::Domain, "Hamiltonian is not Hermitian within 1e-12");
  for (const auto& [op, rate] : jumps) {
    if (rate < 0.0) throw Error(ErrorCategory::Domain, "jump rates must be nonnegative");
    if (!(op.space() == hamiltonian.space()))
      throw Error(ErrorCategory::Dimension, "jump operator on a different space");
  }
}

std::vector<DensityOperator> evolve(const DensityOperator& rho0, const LindbladSpec& spec,
                                    double dt, int steps, const EvolveOptions& options) {
  spec.validate();
  if (!(rho0.space() == spec.hamiltonian.space()))
    throw Error(ErrorCategory::Dimension, "initial state and Hamiltonian live on different spaces");
  if (dt <= 0.0 || steps < 0) throw Error(ErrorCategory::Config, "need dt > 0 and steps >= 0");

  double rate_scale = operator_norm(spec.hamiltonian.matrix());
  for (const auto& [op, rate] : spec.jumps) {
    const double n = operator_norm(op.matrix());
    rate_scale += rate * n * n;
  }
  if (dt * rate_scale >= 0.1)
    throw Error(ErrorCategory::StepSize,
                "dt * (|H| + sum gamma |L|^2) = " + std::to_string(dt * rate_scale) +
                    " violates the stability heuristic (< 0.1)");

  const Matrix& h = spec.hamiltonian.matrix();
  struct Jump {
    Matrix l;
    Matrix ldl;  // L^dag L
    double rate;
  };
  std::vector<Jump> jumps;
  for (const auto& [op, rate] : spec.jumps)
    jumps.push_back({op.matrix(), op.matrix().adjoint() * op.matrix(), rate});

  auto rhs = [&](const Matrix& rho) {
    Matrix out = Complex(0, -1) * (h * rho - rho * h);
    for (const auto& jump : jumps) {
      out += jump.rate * (jump.l * rho * jump.l.adjoint() -
                          0.5 * (jump.ldl * rho + rho * jump.ldl));
    }
    return out;
  };

  const int stride = std::max(1, options.snapshot_stride);
  const DensityTolerances relaxed{1e-9, 1e-9, options.positivity_floor};

  std::vector<DensityOperator> snapshots;
  snapshots.reserve(steps / stride + 1);
  snapshots.push_back(rho0);

  Matrix rho = rho0.matrix();
  for (int step = 1; step <= steps; ++step) {
    const Matrix k1 = rhs(rho);
    const Matrix k2 = rhs((rho + 0.5 * dt * k1).eval());
    const Matrix k3 = rhs((rho + 0.5 * dt * k2).eval());
    const Matrix k4 = rhs((rho + dt * k3).eval());
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();

    if (step % stride == 0 || step == steps) {
      // Snapshot validation doubles as the positivity abort.
      snapshots.emplace_back(Operator(rho0.space(), rho), relaxed);
    }
  }
  return snapshots;
}

std::vector<QpdField> qpd_trajectory(std::span<const DensityOperator> trajectory, double s,
                                     const GcsBackend& backend, const KernelSpectrum& spectrum,
                                     GridPtr grid) {
  std::vector<QpdField> fields;
  fields.reserve(trajectory.size());
  for (const auto& rho : trajectory) {
    if (s == 1.0) {
      QpdField field;
      field.s = 1.0;
      field.grid = grid;
      field.operator_label = "rho(t)";
      field.values = husimi_symbol(backend, *grid, rho.op());
      fields.push_back(std::move(field));
    } else {
      fields.push_back(qpd_field(backend, spectrum, grid, rho.op(), s));
      fields.back().operator_label = "rho(t)";
    }
  }
  return fields;
}

}  // namespace qpd
