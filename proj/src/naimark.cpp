#include "qpd/naimark.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>

namespace qpd {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

CompositePair composite_pair(int cutoff) {
  if (cutoff < 16)
    throw Error(ErrorCategory::Config, "composite pair needs cutoff >= 16");
  const CcrSystem sys(cutoff);
  const Operator q = position(sys), p = momentum(sys);
  const Operator eye(sys.space(), Matrix::Identity(sys.dim, sys.dim));

  CompositePair pair;
  pair.cutoff = cutoff;
  {
    Matrix qc = tensor_product(q, eye).matrix() - tensor_product(eye, q).matrix();
    Matrix pc = tensor_product(p, eye).matrix() + tensor_product(eye, p).matrix();
    const HilbertSpec doubled = HilbertSpec::generic(sys.dim * sys.dim);
    pair.q_comp = Operator(doubled, std::move(qc));
    pair.p_comp = Operator(doubled, std::move(pc));
  }

  const Matrix comm =
      pair.q_comp.matrix() * pair.p_comp.matrix() - pair.p_comp.matrix() * pair.q_comp.matrix();
  pair.full_commutator_norm = comm.norm();

  // Interior block n1 + n2 <= N/2; the truncation defect lives at the edge.
  std::vector<int> interior;
  for (int n1 = 0; n1 <= cutoff; ++n1)
    for (int n2 = 0; n2 <= cutoff; ++n2)
      if (n1 + n2 <= cutoff / 2) interior.push_back(n1 * sys.dim + n2);
  Matrix block(interior.size(), interior.size());
  for (size_t i = 0; i < interior.size(); ++i)
    for (size_t j = 0; j < interior.size(); ++j) block(i, j) = comm(interior[i], interior[j]);
  pair.interior_commutator_norm = block.norm();
  return pair;
}

QpdField joint_distribution(const DensityOperator& rho, const Vector& probe, GridPtr grid) {
  if (rho.space().kind != SpaceKind::FockTruncated)
    throw Error(ErrorCategory::Dimension, "joint_distribution expects a truncated-Fock density matrix");
  if (static_cast<int>(rho.space().parameter) < 8)
    throw Error(ErrorCategory::Domain, "distribution computation needs cutoff >= 8");
  if (probe.size() != rho.dim())
    throw Error(ErrorCategory::Dimension, "probe and system must share the cutoff");
  if (std::abs(probe.norm() - 1.0) > 1e-10)
    throw Error(ErrorCategory::Domain, "probe state must be normalized");
  const int m = grid->rows();
  if (grid->kind != GridKind::Planar || (m & (m - 1)) != 0)
    throw Error(ErrorCategory::Config, "joint distribution grid must be planar with a power-of-two size");

  const Matrix probe_proj = probe * probe.adjoint();
  const double q_half = kSqrt2 * grid->half_width;
  const double du = kPi / q_half;

  // J(u, v) = Z_rho(u, v) <psi| e^{-i(u q + v p)} |psi>, the characteristic
  // function of the joint outcome distribution.
  Matrix z(m, m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int a = 0; a < m; ++a) {
    const double u = (a - m / 2) * du;
    for (int b = 0; b < m; ++b) {
      const double v = (b - m / 2) * du;
      z(a, b) = characteristic_function(rho.matrix(), u, v) *
                characteristic_function(probe_proj, -u, -v);
    }
  }

  double boundary = 0.0;
  for (int a = 0; a < m; ++a) {
    boundary = std::max({boundary, std::abs(z(a, 0)), std::abs(z(a, m - 1)), std::abs(z(0, a)),
                         std::abs(z(m - 1, a))});
  }
  if (boundary > 1e-6)
    throw Error(ErrorCategory::CutoffInadequacy,
                "joint characteristic function has not decayed at the dual-grid boundary");

  Matrix phases(m, m);
  for (int i = 0; i < m; ++i) {
    const double q = kSqrt2 * grid->axis1[i];
    for (int a = 0; a < m; ++a)
      phases(i, a) = std::polar(1.0, -(a - m / 2) * du * q);
  }
  Matrix f = (du * du / (2.0 * kPi)) * (phases * z * phases.transpose());

  QpdField field;
  field.s = 1.0;
  field.grid = grid;
  field.operator_label = "joint(rho, probe)";
  field.values.resize(grid->size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) field.values(i * m + j) = f(i, j);

  const double min_value = field.values.real().minCoeff();
  if (min_value < -1e-9)
    throw Error(ErrorCategory::CutoffInadequacy,
                "joint distribution dipped negative (" + std::to_string(min_value) + ")");
  const double mass = field.mass().real();
  if (std::abs(mass - 1.0) > 1e-4)
    throw Error(ErrorCategory::CutoffInadequacy,
                "joint distribution mass " + std::to_string(mass) + " is not 1 within 1e-4");
  return field;
}

}  // namespace qpd
