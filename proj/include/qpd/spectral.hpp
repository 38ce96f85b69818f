#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qpd/linalg.hpp"
#include "qpd/types.hpp"

namespace qpd {

/// Spectral expansion of the squared-overlap kernel Delta(xi, eta) over an
/// orthonormal function family on the phase space:
///
///   Delta^t(xi, eta) = sum_n alpha_n^t conj(phi_n(xi)) phi_n(eta),
///
/// with all eigenvalues alpha_n strictly positive, so real powers of the
/// kernel are defined mode by mode.
class KernelSpectrum {
 public:
  virtual ~KernelSpectrum() = default;

  virtual int modes() const = 0;
  virtual const RealVector& eigenvalues() const = 0;
  /// Evaluates phi_n(p) for n = 0..modes()-1 into `out`.
  virtual void basis_row(const PhasePoint& p, std::span<Complex> out) const = 0;
  virtual std::string label() const = 0;
  /// True when the band is a strict truncation of an infinite spectrum (so
  /// anti-mollification can silently discard content); false when the mode
  /// family is complete for the backend.
  virtual bool band_limited() const = 0;

  /// Largest alpha_n^t over the band.
  double max_power(double t) const;
  /// Throws a conditioning error when alpha_n^t exceeds the safety bound.
  void require_power(double t) const;

  virtual Complex delta_power(double t, const PhasePoint& x, const PhasePoint& y) const;

  static constexpr double kConditioningBound = 1e14;
};

using SpectrumPtr = std::shared_ptr<const KernelSpectrum>;

/// Coherent-state backend: everything the spectral engine needs to know
/// about a concrete phase space.
class GcsBackend {
 public:
  virtual ~GcsBackend() = default;
  virtual HilbertSpec space() const = 0;
  virtual Vector coherent_state(const PhasePoint& p) const = 0;
  virtual std::string name() const = 0;
  int dim() const { return space().dim; }
};

/// A sampled group element: the unitary U(g) together with the induced
/// action on phase-space points.
struct GroupElement {
  Matrix unitary;
  std::function<PhasePoint(const PhasePoint&)> act;
  std::string label;
};

/// Sampled values of a distribution F^(s) on a grid, tagged with the order s.
struct QpdField {
  double s = 1.0;
  GridPtr grid;
  Vector values;
  std::string operator_label;

  // Diagnostics filled by deconvolving (anti-mollifying) transforms.
  bool singular_warning = false;
  double band_energy_fraction = 0.0;
  double reconstruction_error = 0.0;

  /// Integral of the field against the grid measure.
  Complex mass() const;
  /// Real part of the values; throws if any imaginary part exceeds `tol`.
  RealVector real_values(double tol = 1e-10) const;
};

/// The operator-valued kernel map xi -> Xi^(-s)(xi) sampled on a grid.
/// Construction validates Hermiticity and unit trace of every node operator.
struct SwKernelField {
  double s = 0.0;
  GridPtr grid;
  std::vector<Matrix> ops;
};

/// Band expansion coefficients c_n = sum_k w_k phi_n(eta_k) f(eta_k).
Vector band_coefficients(const KernelSpectrum& spec, const PhaseGrid& grid, const Vector& values);

/// F(xi_k) = sum_n powers[n] conj(phi_n(xi_k)) c_n on every grid node.
Vector band_synthesis(const KernelSpectrum& spec, const PhaseGrid& grid, const Vector& coeffs,
                      const RealVector& powers);

/// Same synthesis at a single point.
Complex band_synthesis_at(const KernelSpectrum& spec, const Vector& coeffs,
                          const RealVector& powers, const PhasePoint& p);

/// <eta|A|eta> on every grid node (the order-1 symbol of A).
Vector husimi_symbol(const GcsBackend& backend, const PhaseGrid& grid, const Operator& a);

/// Fraction of coefficient energy in the outer band (eigenvalues at or below
/// alpha_min^0.64; on the planar lattice this is the annulus |k| >= 0.8 kappa).
/// Drives the singular-distribution warning of anti-mollifying transforms.
double outer_band_energy_fraction(const KernelSpectrum& spec, const Vector& coeffs);

/// F^(s)_A on the grid, computed as the kernel-power transform of the
/// Husimi symbol of A: F^(s)_A(xi) = integral dmu(eta) <eta|A|eta>
/// Delta^{(s-1)/2}(xi, eta).
QpdField qpd_field(const GcsBackend& backend, const KernelSpectrum& spec, GridPtr grid,
                   const Operator& a, double s);

/// Re-expands a sampled field from order field.s to order s_to via
/// Delta^{(s_to - s_from)/2}. Anti-mollifying steps (s_to < s_from) record the
/// out-of-band energy diagnostic and may set the singular warning.
QpdField qpd_transform_field(const KernelSpectrum& spec, const QpdField& field, double s_to);

/// Xi^(-s)(xi) = integral dmu(eta) |eta><eta| Delta^{(s-1)/2}(xi, eta), at one point.
Matrix sw_kernel_at(const GcsBackend& backend, const KernelSpectrum& spec, const PhaseGrid& grid,
                    double s, const PhasePoint& xi);

/// The kernel field on all grid nodes.
SwKernelField sw_kernel_field(const GcsBackend& backend, const KernelSpectrum& spec, GridPtr grid,
                              double s);

/// <eta|A|xi> / <eta|xi> for pre-selected |xi> and post-selected |eta>.
/// Rejects pairs with |<eta|xi>| below 1e-12.
Complex weak_value(const GcsBackend& backend, const Operator& a, const PhasePoint& pre,
                   const PhasePoint& post);

/// F^(s)_A(xi) through the weak-value representation: weak values of A over
/// post-selections eta, weighted by the overlap kernel and the fractional
/// kernel power. Agrees with qpd_field() on exact-quadrature backends.
Complex qpd_via_weak_values(const GcsBackend& backend, const KernelSpectrum& spec,
                            const PhaseGrid& grid, const Operator& a, double s,
                            const PhasePoint& xi);

struct AxiomCheck {
  std::string name;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct AxiomReport {
  double s = 0.0;
  std::string backend;
  std::vector<AxiomCheck> checks;
  bool all_pass() const;
};

/// Measures the kernel-operator axioms (Hermiticity, covariance, unit trace,
/// completeness, duality against the band-limited delta) on a +/-s kernel
/// pair, and the induced symbol-level properties on deterministic random
/// Hermitian operators. Report-only: never throws on a failed check.
AxiomReport axiom_report(const GcsBackend& backend, const KernelSpectrum& spec,
                         const SwKernelField& kernel_plus, const SwKernelField& kernel_minus,
                         std::span<const GroupElement> elements);

}  // namespace qpd
