#include "qpd/states.hpp"

#include <cmath>

namespace qpd {

DensityOperator pure_state(const HilbertSpec& space, const Vector& psi) {
  if (psi.size() != space.dim)
    throw Error(ErrorCategory::Dimension, "state vector does not match the space dimension");
  Vector v = psi / psi.norm();
  return DensityOperator(Operator(space, v * v.adjoint()));
}

DensityOperator vacuum_state(const CcrSystem& sys) { return fock_state(sys, 0); }

DensityOperator fock_state(const CcrSystem& sys, int n) {
  if (n < 0 || n > sys.cutoff)
    throw Error(ErrorCategory::Config, "Fock index outside the truncated space");
  Vector v = Vector::Zero(sys.dim);
  v(n) = 1.0;
  return pure_state(sys.space(), v);
}

DensityOperator coherent_state_density(const CcrSystem& sys, Complex alpha) {
  return pure_state(sys.space(), coherent_vector(sys, alpha).vec);
}

DensityOperator thermal_state(const CcrSystem& sys, double nbar) {
  if (nbar < 0.0) throw Error(ErrorCategory::Config, "mean occupation must be nonnegative");
  if (nbar == 0.0) return vacuum_state(sys);
  const double lambda = nbar / (1.0 + nbar);
  Matrix m = Matrix::Zero(sys.dim, sys.dim);
  double p = 1.0, total = 0.0;
  for (int n = 0; n < sys.dim; ++n) {
    m(n, n) = p;
    total += p;
    p *= lambda;
  }
  m /= total;
  return DensityOperator(Operator(sys.space(), std::move(m)));
}

DensityOperator highest_weight_state(const SpinSystem& sys) {
  Vector v = Vector::Zero(sys.dim);
  v(0) = 1.0;
  return pure_state(sys.space(), v);
}

DensityOperator maximally_mixed_state(const HilbertSpec& space) {
  Matrix m = Matrix::Identity(space.dim, space.dim) / double(space.dim);
  return DensityOperator(Operator(space, std::move(m)));
}

DensityOperator state_preset(const HilbertSpec& space, const std::string& name) {
  auto argument = [&name](const std::string& prefix) {
    return name.substr(prefix.size());
  };
  if (name == "mixed") return maximally_mixed_state(space);
  if (space.kind == SpaceKind::Spin) {
    if (name == "jj") return highest_weight_state(SpinSystem(space.parameter));
    throw Error(ErrorCategory::Config, "unknown spin state preset '" + name + "'");
  }
  if (space.kind != SpaceKind::FockTruncated)
    throw Error(ErrorCategory::Config, "presets need a Fock or spin space");
  const CcrSystem sys(static_cast<int>(space.parameter));
  try {
    if (name == "vacuum") return vacuum_state(sys);
    if (name.starts_with("fock:")) return fock_state(sys, std::stoi(argument("fock:")));
    if (name.starts_with("thermal:")) return thermal_state(sys, std::stod(argument("thermal:")));
    if (name.starts_with("coherent:")) {
      const std::string arg = argument("coherent:");
      const auto comma = arg.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorCategory::Config, "coherent preset needs re,im");
      return coherent_state_density(
          sys, Complex(std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1))));
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCategory::Config, "malformed numeric argument in preset '" + name + "'");
  }
  throw Error(ErrorCategory::Config, "unknown state preset '" + name + "'");
}

}  // namespace qpd
