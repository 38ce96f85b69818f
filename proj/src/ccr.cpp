#include "qpd/ccr.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpd {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Walks the matrix elements of the (untruncated) displacement operator
// projected onto dim levels, diagonal by diagonal, via the
// associated-Laguerre closed form:
//   D_{n+d,n} = sqrt(n!/(n+d)!) lambda^d          e^{-x/2} L_n^{(d)}(x)
//   D_{n,n+d} = sqrt(n!/(n+d)!) (-conj(lambda))^d e^{-x/2} L_n^{(d)}(x)
// with x = |lambda|^2. visit(n, d, lower, upper) receives D_{n+d,n} and
// D_{n,n+d}.
template <typename Visit>
void walk_displacement_elements(int dim, Complex lambda, Visit&& visit) {
  const double x = std::norm(lambda);
  const double gauss = std::exp(-0.5 * x);
  Complex pow_lower = 1.0;  // lambda^d
  Complex pow_upper = 1.0;  // (-conj(lambda))^d
  for (int d = 0; d < dim; ++d) {
    if (d > 0) {
      pow_lower *= lambda;
      pow_upper *= -std::conj(lambda);
    }
    double ratio = 1.0;  // sqrt(n!/(n+d)!) at n = 0, i.e. 1/sqrt(d!)
    for (int k = 1; k <= d; ++k) ratio /= std::sqrt(double(k));
    double lag_prev = 0.0, lag = 1.0;  // L_0^{(d)}(x) = 1
    for (int n = 0; n + d < dim; ++n) {
      if (n > 0) {
        // n L_n^{(d)} = (2n - 1 + d - x) L_{n-1}^{(d)} - (n - 1 + d) L_{n-2}^{(d)}
        const double next = ((2.0 * n - 1.0 + d - x) * lag - (n - 1.0 + d) * lag_prev) / n;
        lag_prev = lag;
        lag = next;
        ratio *= std::sqrt(double(n) / double(n + d));
      }
      const double core = ratio * gauss * lag;
      visit(n, d, core * pow_lower, core * pow_upper);
    }
  }
}

// Tr[rho D(lambda)] without materializing D. Exact for any rho supported on
// the truncated block.
Complex trace_with_displacement(const Matrix& rho, Complex lambda) {
  const int dim = static_cast<int>(rho.rows());
  Complex total = 0.0;
  walk_displacement_elements(dim, lambda, [&](int n, int d, Complex lower, Complex upper) {
    total += lower * rho(n, n + d);
    if (d > 0) total += upper * rho(n + d, n);
  });
  return total;
}

}  // namespace

CcrSystem::CcrSystem(int cutoff_in) : cutoff(cutoff_in), dim(cutoff_in + 1) {
  if (cutoff_in < 1) throw Error(ErrorCategory::Config, "Fock cutoff must be at least 1");
}

Operator annihilation(const CcrSystem& sys) {
  Matrix m = Matrix::Zero(sys.dim, sys.dim);
  for (int n = 1; n < sys.dim; ++n) m(n - 1, n) = std::sqrt(double(n));
  return Operator(sys.space(), std::move(m));
}

Operator creation(const CcrSystem& sys) { return annihilation(sys).adjoint(); }

Operator number_operator(const CcrSystem& sys) {
  Matrix m = Matrix::Zero(sys.dim, sys.dim);
  for (int n = 0; n < sys.dim; ++n) m(n, n) = double(n);
  return Operator(sys.space(), std::move(m));
}

Operator position(const CcrSystem& sys) {
  Matrix m = (annihilation(sys).matrix() + creation(sys).matrix()) / kSqrt2;
  return Operator(sys.space(), std::move(m));
}

Operator momentum(const CcrSystem& sys) {
  Matrix m = Complex(0, -1) * (annihilation(sys).matrix() - creation(sys).matrix()) / kSqrt2;
  return Operator(sys.space(), std::move(m));
}

CoherentVector coherent_vector(const CcrSystem& sys, Complex alpha) {
  const double a2 = std::norm(alpha);
  if (a2 > 600.0)
    throw Error(ErrorCategory::Overflow, "coherent amplitude too large for double precision");
  CoherentVector out;
  out.truncation_warning = a2 > 0.25 * sys.cutoff;
  out.vec.resize(sys.dim);
  Complex c = std::exp(-0.5 * a2);
  for (int n = 0; n < sys.dim; ++n) {
    if (n > 0) c *= alpha / std::sqrt(double(n));
    out.vec(n) = c;
  }
  const double norm = out.vec.norm();
  if (!(norm > 1e-150))
    throw Error(ErrorCategory::Overflow, "coherent vector underflowed after truncation");
  out.renormalization = 1.0 / norm;
  out.vec /= norm;
  return out;
}

Operator displacement(const CcrSystem& sys, Complex alpha) {
  Matrix gen = alpha * creation(sys).matrix() - std::conj(alpha) * annihilation(sys).matrix();
  return matrix_exponential(Operator(sys.space(), std::move(gen)));
}

Matrix displacement_ladder(int dim, Complex alpha) {
  Matrix d(dim, dim);
  walk_displacement_elements(dim, alpha, [&](int n, int off, Complex lower, Complex upper) {
    d(n + off, n) = lower;
    if (off > 0) d(n, n + off) = upper;
  });
  return d;
}

double ccr_delta(Complex a, Complex b) { return std::exp(-std::norm(a - b)); }

PhaseGrid planar_grid(double half_width, int points_per_axis) {
  if (half_width <= 0.0) throw Error(ErrorCategory::Config, "grid half-width must be positive");
  if (points_per_axis < 2) throw Error(ErrorCategory::Config, "grid needs at least 2 points per axis");
  PhaseGrid grid;
  grid.kind = GridKind::Planar;
  grid.half_width = half_width;
  const int m = points_per_axis;
  const double h = 2.0 * half_width / m;
  grid.axis1.resize(m);
  grid.axis2.resize(m);
  for (int i = 0; i < m; ++i) grid.axis1[i] = grid.axis2[i] = -half_width + i * h;
  grid.weights = RealVector::Constant(m * m, h * h / kPi);

  double gauss_mass = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const PhasePoint p = grid.node(k);
    gauss_mass += grid.weights(k) * std::exp(-(p.a * p.a + p.b * p.b));
  }
  if (std::abs(gauss_mass - 1.0) > 1e-6)
    throw Error(ErrorCategory::Config,
                "planar grid fails the Gaussian normalization self-test (widen or refine it)");
  return grid;
}

Complex characteristic_function(const Matrix& rho, double u, double v) {
  // i(u q + v p) = lambda a^dag - conj(lambda) a with lambda = (iu - v)/sqrt(2).
  return trace_with_displacement(rho, Complex(-v, u) / kSqrt2);
}

QpdField husimi_ccr(const DensityOperator& rho, GridPtr grid) {
  if (rho.space().kind != SpaceKind::FockTruncated)
    throw Error(ErrorCategory::Dimension, "husimi_ccr expects a truncated-Fock density matrix");
  const CcrSystem sys(static_cast<int>(rho.space().parameter));
  if (sys.cutoff < 8)
    throw Error(ErrorCategory::Domain, "distribution computation needs cutoff >= 8");
  QpdField field;
  field.s = 1.0;
  field.grid = grid;
  field.operator_label = "rho";
  field.values.resize(grid->size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < grid->size(); ++k) {
    const PhasePoint p = grid->node(k);
    const Vector v = coherent_vector(sys, Complex(p.a, p.b)).vec;
    field.values(k) = v.dot(rho.matrix() * v);
  }
  return field;
}

QpdField wigner_ccr(const DensityOperator& rho, GridPtr grid) {
  if (rho.space().kind != SpaceKind::FockTruncated)
    throw Error(ErrorCategory::Dimension, "wigner_ccr expects a truncated-Fock density matrix");
  if (static_cast<int>(rho.space().parameter) < 8)
    throw Error(ErrorCategory::Domain, "distribution computation needs cutoff >= 8");
  const int m = grid->rows();
  if (grid->kind != GridKind::Planar || (m & (m - 1)) != 0)
    throw Error(ErrorCategory::Config, "wigner grid must be planar with a power-of-two size");

  const double q_half = kSqrt2 * grid->half_width;
  const double du = kPi / q_half;  // dual spacing matching the spatial period

  Matrix z(m, m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int a = 0; a < m; ++a) {
    const double u = (a - m / 2) * du;
    for (int b = 0; b < m; ++b) {
      const double v = (b - m / 2) * du;
      z(a, b) = characteristic_function(rho.matrix(), u, v);
    }
  }

  double boundary = 0.0;
  for (int a = 0; a < m; ++a) {
    boundary = std::max({boundary, std::abs(z(a, 0)), std::abs(z(a, m - 1)), std::abs(z(0, a)),
                         std::abs(z(m - 1, a))});
  }
  if (boundary > 1e-6)
    throw Error(ErrorCategory::CutoffInadequacy,
                "characteristic function has not decayed at the dual-grid boundary (" +
                    std::to_string(boundary) + ")");

  // F(q_i, p_j) = (du dv / 2pi) sum_{ab} e^{-i(u_a q_i + v_b p_j)} Z(u_a, v_b),
  // normalized so the field integrates to 1 against d^2alpha/pi.
  Matrix phases(m, m);
  for (int i = 0; i < m; ++i) {
    const double q = kSqrt2 * grid->axis1[i];
    for (int a = 0; a < m; ++a)
      phases(i, a) = std::polar(1.0, -(a - m / 2) * du * q);
  }
  Matrix f = (du * du / (2.0 * kPi)) * (phases * z * phases.transpose());

  QpdField field;
  field.s = 0.0;
  field.grid = grid;
  field.operator_label = "rho";
  field.values.resize(grid->size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) field.values(i * m + j) = f(i, j);
  return field;
}

namespace {

class PlanarSpectrum : public KernelSpectrum {
 public:
  PlanarSpectrum(double half_width, int points_per_axis, double kappa)
      : half_width_(half_width), kappa_(kappa) {
    const double dk = kPi / half_width;
    const int max_index = points_per_axis / 2;
    if (kappa > max_index * dk + 1e-12)
      throw Error(ErrorCategory::Config,
                  "band limit exceeds the Nyquist range of the grid (max " +
                      std::to_string(max_index * dk) + ")");
    if (kappa <= 0.0) throw Error(ErrorCategory::Config, "band limit must be positive");
    for (int ix = -max_index; ix < max_index; ++ix) {
      for (int iy = -max_index; iy < max_index; ++iy) {
        const double kx = ix * dk, ky = iy * dk;
        if (kx * kx + ky * ky <= kappa * kappa) kx_.push_back(kx), ky_.push_back(ky);
      }
    }
    eigenvalues_.resize(kx_.size());
    for (size_t n = 0; n < kx_.size(); ++n)
      eigenvalues_(n) = std::exp(-0.25 * (kx_[n] * kx_[n] + ky_[n] * ky_[n]));
    amplitude_ = std::sqrt(kPi) / (2.0 * half_width);
  }

  int modes() const override { return static_cast<int>(kx_.size()); }
  const RealVector& eigenvalues() const override { return eigenvalues_; }
  bool band_limited() const override { return true; }
  std::string label() const override {
    return "ccr-planar:L=" + std::to_string(half_width_) + ":kappa=" + std::to_string(kappa_);
  }

  void basis_row(const PhasePoint& p, std::span<Complex> out) const override {
    for (size_t n = 0; n < kx_.size(); ++n)
      out[n] = amplitude_ * std::polar(1.0, kx_[n] * p.a + ky_[n] * p.b);
  }

  double wavenumber_x(int n) const { return kx_[n]; }
  double wavenumber_y(int n) const { return ky_[n]; }
  double amplitude() const { return amplitude_; }

 private:
  double half_width_;
  double kappa_;
  std::vector<double> kx_, ky_;
  RealVector eigenvalues_;
  double amplitude_;
};

}  // namespace

SpectrumPtr planar_spectrum(const PhaseGrid& grid, double kappa) {
  if (grid.kind != GridKind::Planar)
    throw Error(ErrorCategory::Config, "planar spectrum needs a planar grid");
  return std::make_shared<PlanarSpectrum>(grid.half_width, grid.rows(), kappa);
}

QpdField glauber_sudarshan_ccr(const DensityOperator& rho, GridPtr grid, double kappa) {
  if (rho.space().kind != SpaceKind::FockTruncated)
    throw Error(ErrorCategory::Dimension, "glauber_sudarshan_ccr expects a truncated-Fock density matrix");
  if (static_cast<int>(rho.space().parameter) < 8)
    throw Error(ErrorCategory::Domain, "distribution computation needs cutoff >= 8");
  if (kappa <= 0.0) throw Error(ErrorCategory::Config, "band limit must be positive");

  auto spectrum = std::static_pointer_cast<const PlanarSpectrum>(planar_spectrum(*grid, kappa));
  spectrum->require_power(-1.0);
  const int n_modes = spectrum->modes();

  // Band coefficients of the Husimi transform, in closed form: the planar
  // Fourier transform of <alpha|rho|alpha> at wavevector k is
  // pi Tr[rho D(lambda)] e^{-|k|^2/8} with lambda = (k2 - i k1)/2.
  Vector husimi_coeffs(n_modes);
  const double scale = 1.0 / (2.0 * grid->half_width * std::sqrt(kPi));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int n = 0; n < n_modes; ++n) {
    const double kx = spectrum->wavenumber_x(n), ky = spectrum->wavenumber_y(n);
    const Complex lambda(-0.5 * ky, 0.5 * kx);  // lambda(-k)
    const Complex z = trace_with_displacement(rho.matrix(), lambda);
    husimi_coeffs(n) = scale * kPi * z * std::exp(-0.125 * (kx * kx + ky * ky));
  }

  const RealVector inv_power = spectrum->eigenvalues().array().pow(-1.0);
  const Vector p_coeffs = husimi_coeffs.array() * inv_power.array().cast<Complex>();

  QpdField field;
  field.s = -1.0;
  field.grid = grid;
  field.operator_label = "rho";
  field.values = band_synthesis(*spectrum, *grid, p_coeffs, RealVector::Ones(n_modes));

  field.band_energy_fraction = outer_band_energy_fraction(*spectrum, p_coeffs);
  field.singular_warning = field.band_energy_fraction > 1e-3;

  // Inverse consistency: re-mollifying the result must recover the
  // band-limited Husimi transform.
  const Vector husimi_band =
      band_synthesis(*spectrum, *grid, husimi_coeffs, RealVector::Ones(n_modes));
  const Vector remollified = band_synthesis(*spectrum, *grid, p_coeffs, spectrum->eigenvalues());
  field.reconstruction_error = (remollified - husimi_band).cwiseAbs().maxCoeff();
  if (field.reconstruction_error > 1e-6)
    throw Error(ErrorCategory::Conditioning,
                "anti-mollification failed its reconstruction check (" +
                    std::to_string(field.reconstruction_error) + ")");
  return field;
}

std::string CcrBackend::name() const { return "ccr:" + std::to_string(sys_.cutoff); }

GroupElement displacement_element(const CcrSystem& sys, Complex gamma) {
  GroupElement g;
  g.unitary = displacement(sys, gamma).matrix();
  g.act = [gamma](const PhasePoint& p) {
    return PhasePoint{p.a + gamma.real(), p.b + gamma.imag()};
  };
  g.label = "displace(" + std::to_string(gamma.real()) + "," + std::to_string(gamma.imag()) + ")";
  return g;
}

Vector gaussian_probe(const CcrSystem& sys, double variance_d) {
  if (variance_d <= 0.0) throw Error(ErrorCategory::Config, "probe variance must be positive");
  const double r = -0.5 * std::log(variance_d);  // squeeze parameter, Var(q) = e^{-2r}/2
  const double th = std::tanh(r);
  Vector v = Vector::Zero(sys.dim);
  double c = 1.0 / std::sqrt(std::cosh(r));
  v(0) = c;
  for (int k = 1; 2 * k < sys.dim; ++k) {
    c *= -th * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    v(2 * k) = c;
  }
  v.normalize();
  return v;
}

}  // namespace qpd
