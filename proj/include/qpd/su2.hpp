#pragma once

#include "qpd/spectral.hpp"

namespace qpd {

/// Spin-j system, dim = 2j + 1. Basis ordering is |j,j>, |j,j-1>, ..., |j,-j>.
struct SpinSystem {
  double j = 0.5;
  int dim = 2;

  explicit SpinSystem(double j_in);
  HilbertSpec space() const { return HilbertSpec::spin(j); }
};

Operator spin_jx(const SpinSystem& sys);
Operator spin_jy(const SpinSystem& sys);
Operator spin_jz(const SpinSystem& sys);
Operator spin_jplus(const SpinSystem& sys);
Operator spin_jminus(const SpinSystem& sys);

/// Spin coherent state |theta, phi>:
/// <j,m|Omega> = sqrt(C(2j, j-m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{-i(j-m)phi}.
/// Unit norm exactly.
Vector spin_coherent(const SpinSystem& sys, double theta, double phi);

/// Unit vector on S^2 whose inner products reproduce the overlap geometry of
/// the gauge above; equals <J>/j for the coherent state at (theta, phi).
Eigen::Vector3d bloch_vector(const PhasePoint& p);
PhasePoint point_from_bloch(const Eigen::Vector3d& v);

/// Squared overlap Delta(Omega, Omega') = cos^{4j}(Theta/2), cos Theta = n.n'.
double su2_delta(const SpinSystem& sys, const PhasePoint& a, const PhasePoint& b);

/// Gauss-Legendre x uniform-phi product grid, exact for integrands
/// band-limited to spherical-harmonic degree <= 2*n_theta - 1 (theta part)
/// and |m| < n_phi (phi part). Defaults: n_theta = 2j + 2, n_phi = 4j + 2.
/// Requires n_theta >= 2j + 1 and n_phi >= 4j + 2.
PhaseGrid sphere_quadrature(const SpinSystem& sys, int n_theta = 0, int n_phi = 0);

/// Spherical-harmonic spectrum of the kernel: eigenvalues v_l > 0 for
/// l = 0..2j against harmonics orthonormalized with respect to the coherent
/// measure; degrees above 2j vanish identically and are excluded.
SpectrumPtr delta_spectrum(const SpinSystem& sys);

/// Closed-form eigenvalue (2j+1) ((2j)!)^2 / ((2j-l)! (2j+l+1)!), used as an
/// independent cross-check of the quadrature projection.
double spin_kernel_eigenvalue_exact(double j, int l);

/// Husimi distribution <Omega|rho|Omega> on the grid nodes.
QpdField husimi_spin(const DensityOperator& rho, GridPtr grid);

class SpinBackend : public GcsBackend {
 public:
  explicit SpinBackend(SpinSystem sys) : sys_(sys) {}
  HilbertSpec space() const override { return sys_.space(); }
  Vector coherent_state(const PhasePoint& p) const override {
    return spin_coherent(sys_, p.a, p.b);
  }
  std::string name() const override;
  const SpinSystem& system() const { return sys_; }

 private:
  SpinSystem sys_;
};

/// U = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz) together with the
/// induced SO(3) action on phase-space points.
GroupElement rotation_element(const SpinSystem& sys, double alpha, double beta, double gamma);

/// Deterministic set of sample rotations for covariance checks.
std::vector<GroupElement> rotation_samples(const SpinSystem& sys, int count = 12);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Legendre polynomial P_l(x).
double legendre_p(int l, double x);

/// Orthonormal spherical harmonics Y_{lm}(theta, phi) for all l <= lmax,
/// written into `out` in (l, m) order with m = -l..l; unit-sphere
/// normalization, Condon-Shortley phase.
void spherical_harmonics(int lmax, double theta, double phi, std::span<Complex> out);

}  // namespace qpd
