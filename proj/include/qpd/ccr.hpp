#pragma once

#include "qpd/spectral.hpp"

namespace qpd {

/// Truncated-Fock oscillator, dim = N + 1, hbar = 1. Quadratures follow
/// a = (q + i p)/sqrt(2), so q = sqrt(2) Re alpha and p = sqrt(2) Im alpha.
struct CcrSystem {
  int cutoff = 0;
  int dim = 1;

  explicit CcrSystem(int cutoff_in);
  HilbertSpec space() const { return HilbertSpec::fock(cutoff); }
};

Operator annihilation(const CcrSystem& sys);
Operator creation(const CcrSystem& sys);
Operator number_operator(const CcrSystem& sys);
Operator position(const CcrSystem& sys);
Operator momentum(const CcrSystem& sys);

struct CoherentVector {
  Vector vec;                       // unit norm after truncation
  double renormalization = 1.0;     // factor applied to restore unit norm
  bool truncation_warning = false;  // |alpha|^2 > N/4
};

/// Truncated coherent state: c_n = e^{-|a|^2/2} a^n / sqrt(n!), renormalized.
CoherentVector coherent_vector(const CcrSystem& sys, Complex alpha);

/// D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated space
/// (exponential of the truncated generator; unitary by construction).
Operator displacement(const CcrSystem& sys, Complex alpha);

/// Matrix elements of the untruncated displacement operator projected onto
/// the truncated space, via the associated-Laguerre closed form. Exact for
/// traces against operators supported on the truncation, which makes it the
/// right kernel for characteristic functions.
Matrix displacement_ladder(int dim, Complex alpha);

/// Squared coherent overlap exp(-|a - b|^2).
double ccr_delta(Complex a, Complex b);

/// Uniform Cartesian grid on [-L, L)^2 in (Re alpha, Im alpha) with weights
/// h^2/pi. Construction self-tests the Gaussian normalization
/// sum w e^{-|alpha|^2} = 1 to 1e-6.
PhaseGrid planar_grid(double half_width, int points_per_axis);

/// Quantum characteristic function Z_rho(u, v) = Tr[rho e^{i(u q + v p)}]
/// = Tr[rho D(lambda)] with lambda = (v + i u)/sqrt(2).
Complex characteristic_function(const Matrix& rho, double u, double v);

/// Husimi distribution <alpha|rho|alpha> on the grid.
QpdField husimi_ccr(const DensityOperator& rho, GridPtr grid);

/// Wigner distribution: Z_rho on the dual grid, then an inverse discrete
/// Fourier transform, normalized so the field integrates to 1 against
/// d^2alpha/pi. Requires a power-of-two grid; errors out when |Z| at the
/// dual-grid boundary exceeds 1e-6 (cutoff inadequacy).
QpdField wigner_ccr(const DensityOperator& rho, GridPtr grid);

/// Glauber-Sudarshan distribution: anti-mollification of the Husimi
/// transform, band-limited at |k| = kappa in the (Re alpha, Im alpha)
/// Fourier domain. The Husimi transform is evaluated in closed form through
/// the characteristic function, the result re-mollified as an internal
/// consistency check, and a divergence warning raised when the out-of-band
/// energy fraction signals a singular distribution.
QpdField glauber_sudarshan_ccr(const DensityOperator& rho, GridPtr grid, double kappa);

/// Plane-wave kernel spectrum on the grid's Fourier lattice, band-limited to
/// |k| <= kappa: eigenvalue e^{-|k|^2/4} per mode.
SpectrumPtr planar_spectrum(const PhaseGrid& grid, double kappa);

class CcrBackend : public GcsBackend {
 public:
  explicit CcrBackend(CcrSystem sys) : sys_(sys) {}
  HilbertSpec space() const override { return sys_.space(); }
  Vector coherent_state(const PhasePoint& p) const override {
    return coherent_vector(sys_, Complex(p.a, p.b)).vec;
  }
  std::string name() const override;
  const CcrSystem& system() const { return sys_; }

 private:
  CcrSystem sys_;
};

/// Displacement by gamma as a sampled group element (exact up to truncation).
GroupElement displacement_element(const CcrSystem& sys, Complex gamma);

/// Fock expansion of the Gaussian probe <q|psi> = (pi d)^{-1/4} e^{-q^2/(2d)}
/// (squeezed vacuum with position variance d/2).
Vector gaussian_probe(const CcrSystem& sys, double variance_d);

}  // namespace qpd
