#include "qpd/spectral.hpp"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpd {

namespace {

RealVector power_vector(const KernelSpectrum& spec, double t) {
  spec.require_power(t);
  return spec.eigenvalues().array().pow(t);
}

Matrix identity_like(const GcsBackend& backend) {
  return Matrix::Identity(backend.dim(), backend.dim());
}

std::mt19937_64 report_rng() { return std::mt19937_64(0x20260808ull); }

Matrix random_complex(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) g(i, k) = Complex(gauss(rng), gauss(rng));
  return g;
}

Matrix random_hermitian(std::mt19937_64& rng, int d) {
  Matrix g = random_complex(rng, d);
  return 0.5 * (g + g.adjoint()).eval();
}

}  // namespace

double outer_band_energy_fraction(const KernelSpectrum& spec, const Vector& coeffs) {
  const RealVector& ev = spec.eigenvalues();
  const double threshold = std::pow(ev.minCoeff(), 0.64);
  double outer = 0.0, total = 0.0;
  for (int n = 0; n < spec.modes(); ++n) {
    const double e = std::norm(coeffs(n));
    total += e;
    if (ev(n) <= threshold) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

double KernelSpectrum::max_power(double t) const {
  const RealVector& ev = eigenvalues();
  // Eigenvalues are positive; the extreme power sits at an endpoint.
  return std::max(std::pow(ev.minCoeff(), t), std::pow(ev.maxCoeff(), t));
}

void KernelSpectrum::require_power(double t) const {
  if (!(max_power(t) <= kConditioningBound))
    throw Error(ErrorCategory::Conditioning,
                "kernel power exponent " + std::to_string(t) + " exceeds the conditioning bound on " +
                    label());
}

Complex KernelSpectrum::delta_power(double t, const PhasePoint& x, const PhasePoint& y) const {
  require_power(t);
  const int n = modes();
  std::vector<Complex> bx(n), by(n);
  basis_row(x, bx);
  basis_row(y, by);
  const RealVector& ev = eigenvalues();
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::pow(ev(i), t) * std::conj(bx[i]) * by[i];
  return acc;
}

Complex QpdField::mass() const {
  Complex acc = 0.0;
  for (int k = 0; k < grid->size(); ++k) acc += grid->weights(k) * values(k);
  return acc;
}

RealVector QpdField::real_values(double tol) const {
  const double worst = values.imag().cwiseAbs().maxCoeff();
  if (worst > tol)
    throw Error(ErrorCategory::Domain,
                "field has imaginary parts up to " + std::to_string(worst));
  return values.real();
}

Vector band_coefficients(const KernelSpectrum& spec, const PhaseGrid& grid, const Vector& values) {
  const int n_modes = spec.modes();
  const int n_nodes = grid.size();
  // Fixed chunking keeps the reduction order independent of the thread count.
  const int n_chunks = std::min(64, n_nodes);
  Matrix partial = Matrix::Zero(n_modes, n_chunks);
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<Complex> row(n_modes);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int c = 0; c < n_chunks; ++c) {
      const int begin = static_cast<int>(static_cast<long>(n_nodes) * c / n_chunks);
      const int end = static_cast<int>(static_cast<long>(n_nodes) * (c + 1) / n_chunks);
      for (int k = begin; k < end; ++k) {
        spec.basis_row(grid.node(k), row);
        const Complex wf = grid.weights(k) * values(k);
        for (int n = 0; n < n_modes; ++n) partial(n, c) += row[n] * wf;
      }
    }
  }
  Vector coeffs = Vector::Zero(n_modes);
  for (int c = 0; c < n_chunks; ++c) coeffs += partial.col(c);
  return coeffs;
}

Vector band_synthesis(const KernelSpectrum& spec, const PhaseGrid& grid, const Vector& coeffs,
                      const RealVector& powers) {
  const int n_modes = spec.modes();
  const int n_nodes = grid.size();
  Vector out(n_nodes);
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<Complex> row(n_modes);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int k = 0; k < n_nodes; ++k) {
      spec.basis_row(grid.node(k), row);
      Complex acc = 0.0;
      for (int n = 0; n < n_modes; ++n) acc += powers(n) * std::conj(row[n]) * coeffs(n);
      out(k) = acc;
    }
  }
  return out;
}

Complex band_synthesis_at(const KernelSpectrum& spec, const Vector& coeffs,
                          const RealVector& powers, const PhasePoint& p) {
  const int n_modes = spec.modes();
  std::vector<Complex> row(n_modes);
  spec.basis_row(p, row);
  Complex acc = 0.0;
  for (int n = 0; n < n_modes; ++n) acc += powers(n) * std::conj(row[n]) * coeffs(n);
  return acc;
}

Vector husimi_symbol(const GcsBackend& backend, const PhaseGrid& grid, const Operator& a) {
  if (!(a.space() == backend.space()))
    throw Error(ErrorCategory::Dimension, "operator does not live on the backend space");
  const int n_nodes = grid.size();
  Vector symbol(n_nodes);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < n_nodes; ++k) {
    const Vector v = backend.coherent_state(grid.node(k));
    symbol(k) = v.dot(a.matrix() * v);
  }
  return symbol;
}

QpdField qpd_field(const GcsBackend& backend, const KernelSpectrum& spec, GridPtr grid,
                   const Operator& a, double s) {
  QpdField field;
  field.s = s;
  field.grid = grid;
  field.operator_label = "A";
  const Vector symbol = husimi_symbol(backend, *grid, a);
  const double t = 0.5 * (s - 1.0);
  const Vector coeffs = band_coefficients(spec, *grid, symbol);
  field.values = band_synthesis(spec, *grid, coeffs, power_vector(spec, t));
  if (t < 0.0 && spec.band_limited()) {
    Vector anti = coeffs.array() * power_vector(spec, t).array().cast<Complex>();
    field.band_energy_fraction = outer_band_energy_fraction(spec, anti);
    field.singular_warning = field.band_energy_fraction > 1e-3;
  }
  return field;
}

QpdField qpd_transform_field(const KernelSpectrum& spec, const QpdField& field, double s_to) {
  QpdField out;
  out.s = s_to;
  out.grid = field.grid;
  out.operator_label = field.operator_label;
  const double t = 0.5 * (s_to - field.s);
  const Vector coeffs = band_coefficients(spec, *field.grid, field.values);
  out.values = band_synthesis(spec, *field.grid, coeffs, power_vector(spec, t));
  if (t < 0.0 && spec.band_limited()) {
    Vector anti = coeffs.array() * power_vector(spec, t).array().cast<Complex>();
    out.band_energy_fraction = outer_band_energy_fraction(spec, anti);
    out.singular_warning = out.band_energy_fraction > 1e-3;
  }
  return out;
}

namespace {

// Mode-projected coherent projectors T_n = sum_k w_k phi_n(eta_k) |eta_k><eta_k|.
std::vector<Matrix> mode_projectors(const GcsBackend& backend, const KernelSpectrum& spec,
                                    const PhaseGrid& grid) {
  const int n_modes = spec.modes();
  const int d = backend.dim();
  std::vector<Matrix> t(n_modes, Matrix::Zero(d, d));
  std::vector<Complex> row(n_modes);
  for (int k = 0; k < grid.size(); ++k) {
    const Vector v = backend.coherent_state(grid.node(k));
    const Matrix proj = grid.weights(k) * (v * v.adjoint());
    spec.basis_row(grid.node(k), row);
    for (int n = 0; n < n_modes; ++n) t[n] += row[n] * proj;
  }
  return t;
}

Matrix assemble_kernel(const std::vector<Matrix>& t, const KernelSpectrum& spec,
                       const RealVector& powers, const PhasePoint& xi) {
  const int n_modes = spec.modes();
  std::vector<Complex> row(n_modes);
  spec.basis_row(xi, row);
  Matrix out = Matrix::Zero(t[0].rows(), t[0].cols());
  for (int n = 0; n < n_modes; ++n) out += powers(n) * std::conj(row[n]) * t[n];
  return out;
}

}  // namespace

Matrix sw_kernel_at(const GcsBackend& backend, const KernelSpectrum& spec, const PhaseGrid& grid,
                    double s, const PhasePoint& xi) {
  const double t = 0.5 * (s - 1.0);
  const RealVector powers = power_vector(spec, t);
  Matrix out = Matrix::Zero(backend.dim(), backend.dim());
  for (int k = 0; k < grid.size(); ++k) {
    const Vector v = backend.coherent_state(grid.node(k));
    const Complex dp = spec.delta_power(t, xi, grid.node(k));
    out += (grid.weights(k) * dp) * (v * v.adjoint());
  }
  return out;
}

SwKernelField sw_kernel_field(const GcsBackend& backend, const KernelSpectrum& spec, GridPtr grid,
                              double s) {
  const double t = 0.5 * (s - 1.0);
  const long footprint = static_cast<long>(grid->size()) * backend.dim() * backend.dim();
  if (footprint > 50'000'000)
    throw Error(ErrorCategory::Config,
                "kernel field would need " + std::to_string(footprint) +
                    " matrix entries; use a coarser grid");
  const RealVector powers = power_vector(spec, t);
  const std::vector<Matrix> tn = mode_projectors(backend, spec, *grid);

  SwKernelField field;
  field.s = s;
  field.grid = grid;
  field.ops.resize(grid->size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < grid->size(); ++k)
    field.ops[k] = assemble_kernel(tn, spec, powers, grid->node(k));

  for (int k = 0; k < grid->size(); ++k) {
    const Matrix& m = field.ops[k];
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw Error(ErrorCategory::Domain, "kernel operator lost Hermiticity");
    if (std::abs(m.trace() - 1.0) > 1e-10)
      throw Error(ErrorCategory::Domain, "kernel operator lost unit trace");
  }
  return field;
}

Complex weak_value(const GcsBackend& backend, const Operator& a, const PhasePoint& pre,
                   const PhasePoint& post) {
  if (!(a.space() == backend.space()))
    throw Error(ErrorCategory::Dimension, "operator does not live on the backend space");
  const Vector xi = backend.coherent_state(pre);
  const Vector eta = backend.coherent_state(post);
  const Complex overlap = eta.dot(xi);
  if (std::abs(overlap) < 1e-12)
    throw Error(ErrorCategory::OrthogonalSelection,
                "pre- and post-selected states are (numerically) orthogonal");
  return eta.dot(a.matrix() * xi) / overlap;
}

Complex qpd_via_weak_values(const GcsBackend& backend, const KernelSpectrum& spec,
                            const PhaseGrid& grid, const Operator& a, double s,
                            const PhasePoint& xi) {
  if (!(a.space() == backend.space()))
    throw Error(ErrorCategory::Dimension, "operator does not live on the backend space");
  const double t = 0.5 * (s - 1.0);
  spec.require_power(t);
  const int n_nodes = grid.size();

  std::vector<Vector> states(n_nodes);
  for (int k = 0; k < n_nodes; ++k) states[k] = backend.coherent_state(grid.node(k));

  // F^(s)_A(xi) = sum_eta w Delta^{(s-1)/2}(xi, eta)
  //                 sum_zeta w W_{zeta,eta}(A) |K(zeta,eta)|^2,
  // the inner sum reconstructing <eta|A|eta> from weak values of A between
  // pre-selection |zeta> and post-selection |eta>. Pairs with vanishing
  // overlap contribute nothing (the weight |K|^2 vanishes with the overlap).
  Complex total = 0.0;
  for (int ke = 0; ke < n_nodes; ++ke) {
    const Vector& eta = states[ke];
    const Vector a_dag_eta = a.matrix().adjoint() * eta;  // so <eta|A|zeta> = a_dag_eta . zeta
    Complex inner = 0.0;
    for (int kz = 0; kz < n_nodes; ++kz) {
      const Vector& zeta = states[kz];
      const Complex overlap = eta.dot(zeta);  // <eta|zeta>
      if (std::abs(overlap) < 1e-12) continue;
      const Complex wv = a_dag_eta.dot(zeta) / overlap;
      inner += grid.weights(kz) * wv * std::norm(overlap);
    }
    total += grid.weights(ke) * spec.delta_power(t, xi, grid.node(ke)) * inner;
  }
  return total;
}

bool AxiomReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

AxiomReport axiom_report(const GcsBackend& backend, const KernelSpectrum& spec,
                         const SwKernelField& kernel_plus, const SwKernelField& kernel_minus,
                         std::span<const GroupElement> elements) {
  if (kernel_plus.grid->size() != kernel_minus.grid->size())
    throw Error(ErrorCategory::Dimension, "kernel fields live on different grids");
  if (std::abs(kernel_plus.s + kernel_minus.s) > 1e-12)
    throw Error(ErrorCategory::Config, "axiom report needs kernels of opposite order");

  const PhaseGrid& grid = *kernel_plus.grid;
  const int n_nodes = grid.size();
  const int d = backend.dim();
  const int node_stride = std::max(1, n_nodes / 32);

  AxiomReport report;
  report.s = kernel_plus.s;
  report.backend = backend.name();
  auto add = [&report](const std::string& name, double dev, double tol) {
    report.checks.push_back({name, dev, tol, dev < tol});
  };

  // (K.1) self-adjointness.
  double k1 = 0.0;
  for (const auto& field : {&kernel_plus, &kernel_minus})
    for (const Matrix& m : field->ops)
      k1 = std::max(k1, (m - m.adjoint()).cwiseAbs().maxCoeff());
  add("K1_self_adjoint", k1, 1e-10);

  // (K.2) covariance under the sampled group elements.
  if (!elements.empty()) {
    double k2 = 0.0;
    for (const auto& g : elements) {
      for (int k = 0; k < n_nodes; k += node_stride) {
        const Matrix rotated = g.unitary * kernel_plus.ops[k] * g.unitary.adjoint();
        const Matrix target =
            sw_kernel_at(backend, spec, grid, kernel_plus.s, g.act(grid.node(k)));
        k2 = std::max(k2, (rotated - target).cwiseAbs().maxCoeff());
      }
    }
    add("K2_covariance", k2, 1e-8);
  }

  // (K.3) unit trace.
  double k3 = 0.0;
  for (const auto& field : {&kernel_plus, &kernel_minus})
    for (const Matrix& m : field->ops) k3 = std::max(k3, std::abs(m.trace() - 1.0));
  add("K3_unit_trace", k3, 1e-10);

  // (K.4) completeness.
  Matrix sum = Matrix::Zero(d, d);
  for (int k = 0; k < n_nodes; ++k) sum += grid.weights(k) * kernel_plus.ops[k];
  add("K4_completeness", (sum - identity_like(backend)).norm(), 1e-8);

  // (K.5') duality against the band-limited delta.
  {
    double k5 = 0.0;
    const int pair_stride = std::max(1, n_nodes / 96);
    for (int k = 0; k < n_nodes; k += pair_stride) {
      for (int l = 0; l < n_nodes; l += pair_stride) {
        const Complex tr = kernel_minus.ops[k].cwiseProduct(kernel_plus.ops[l].transpose()).sum();
        const Complex target = spec.delta_power(0.0, grid.node(k), grid.node(l));
        k5 = std::max(k5, std::abs(tr - target));
      }
    }
    add("K5p_orthogonality", k5, 1e-8);
  }

  // Symbol-level checks on deterministic random operators.
  auto rng = report_rng();
  auto field_of = [&](const Matrix& a, const SwKernelField& kernels) {
    Vector f(n_nodes);
    for (int k = 0; k < n_nodes; ++k)
      f(k) = kernels.ops[k].cwiseProduct(a.transpose()).sum();
    return f;
  };

  {
    double s1 = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_complex(rng, d);
      const Vector f = field_of(a, kernel_plus);
      const Vector f_dag = field_of(a.adjoint().eval(), kernel_plus);
      s1 = std::max(s1, (f_dag - f.conjugate()).cwiseAbs().maxCoeff());
    }
    add("S1_self_adjoint", s1, 1e-10);
  }

  if (!elements.empty()) {
    double s2 = 0.0;
    for (const auto& g : elements) {
      const Matrix a = random_hermitian(rng, d);
      const Matrix a_moved = g.unitary.adjoint() * a * g.unitary;
      for (int k = 0; k < n_nodes; k += node_stride) {
        const Complex lhs = kernel_plus.ops[k].cwiseProduct(a_moved.transpose()).sum();
        const Matrix target =
            sw_kernel_at(backend, spec, grid, kernel_plus.s, g.act(grid.node(k)));
        const Complex rhs = target.cwiseProduct(a.transpose()).sum();
        s2 = std::max(s2, std::abs(lhs - rhs));
      }
    }
    add("S2_covariance", s2, 1e-8);
  }

  {
    double s3 = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_hermitian(rng, d);
      const Vector f = field_of(a, kernel_plus);
      Complex integral = 0.0;
      for (int k = 0; k < n_nodes; ++k) integral += grid.weights(k) * f(k);
      s3 = std::max(s3, std::abs(integral - a.trace()));
    }
    add("S3_normalization", s3, 1e-10);
  }

  {
    double s4 = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = random_hermitian(rng, d);
      const Matrix b = random_hermitian(rng, d);
      const Vector fa = field_of(a, kernel_plus);
      const Vector fb = field_of(b, kernel_minus);
      Complex integral = 0.0;
      for (int k = 0; k < n_nodes; ++k) integral += grid.weights(k) * fa(k) * fb(k);
      s4 = std::max(s4, std::abs(integral - (a * b).trace()));
    }
    add("S4p_trace_duality", s4, 1e-8);
  }

  return report;
}

}  // namespace qpd
