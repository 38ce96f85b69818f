#include "qpd/su2.hpp"

#include <cmath>

namespace qpd {

namespace {

int two_j(const SpinSystem& sys) { return sys.dim - 1; }

// m value of basis index i (row 0 is the highest weight m = j).
double m_of_index(const SpinSystem& sys, int i) { return sys.j - i; }

}  // namespace

SpinSystem::SpinSystem(double j_in) : j(j_in) {
  dim = HilbertSpec::spin(j_in).dim;  // validates half-integrality
}

Operator spin_jz(const SpinSystem& sys) {
  Matrix m = Matrix::Zero(sys.dim, sys.dim);
  for (int i = 0; i < sys.dim; ++i) m(i, i) = m_of_index(sys, i);
  return Operator(sys.space(), std::move(m));
}

Operator spin_jplus(const SpinSystem& sys) {
  Matrix m = Matrix::Zero(sys.dim, sys.dim);
  for (int i = 1; i < sys.dim; ++i) {
    const double mm = m_of_index(sys, i);  // J+|j,m> = sqrt((j-m)(j+m+1)) |j,m+1>
    m(i - 1, i) = std::sqrt((sys.j - mm) * (sys.j + mm + 1.0));
  }
  return Operator(sys.space(), std::move(m));
}

Operator spin_jminus(const SpinSystem& sys) { return spin_jplus(sys).adjoint(); }

Operator spin_jx(const SpinSystem& sys) {
  Matrix m = 0.5 * (spin_jplus(sys).matrix() + spin_jminus(sys).matrix());
  return Operator(sys.space(), std::move(m));
}

Operator spin_jy(const SpinSystem& sys) {
  Matrix m = Complex(0, -0.5) * (spin_jplus(sys).matrix() - spin_jminus(sys).matrix());
  return Operator(sys.space(), std::move(m));
}

Vector spin_coherent(const SpinSystem& sys, double theta, double phi) {
  if (theta < -1e-12 || theta > kPi + 1e-12)
    throw Error(ErrorCategory::Domain, "theta must lie in [0, pi]");
  const int n = two_j(sys);
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  Vector v(sys.dim);
  // sqrt(C(2j, i)) cos^{2j-i} sin^i e^{-i i phi}, built by ratio recurrence.
  double log_binom = 0.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) log_binom += std::log(double(n - i + 1)) - std::log(double(i));
    const double amp = std::exp(0.5 * log_binom) * std::pow(c, n - i) * std::pow(sn, i);
    v(i) = amp * std::polar(1.0, -double(i) * phi);
  }
  v.normalize();  // amplitudes are exact up to rounding; renormalize anyway
  return v;
}

Eigen::Vector3d bloch_vector(const PhasePoint& p) {
  const double st = std::sin(p.a);
  return {st * std::cos(p.b), -st * std::sin(p.b), std::cos(p.a)};
}

PhasePoint point_from_bloch(const Eigen::Vector3d& v) {
  Eigen::Vector3d u = v.normalized();
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  double phi = std::atan2(-u.y(), u.x());
  if (phi < 0) phi += 2.0 * kPi;
  return {theta, phi};
}

double su2_delta(const SpinSystem& sys, const PhasePoint& a, const PhasePoint& b) {
  const double cos_big = std::clamp(bloch_vector(a).dot(bloch_vector(b)), -1.0, 1.0);
  const double half_sq = 0.5 * (1.0 + cos_big);  // cos^2(Theta/2)
  return std::pow(half_sq, double(two_j(sys)));
}

PhaseGrid sphere_quadrature(const SpinSystem& sys, int n_theta, int n_phi) {
  const int n = two_j(sys);
  if (n_theta == 0) n_theta = n + 2;
  if (n_phi == 0) n_phi = 2 * n + 2;
  if (n_theta < n + 1)
    throw Error(ErrorCategory::Config, "sphere grid needs at least 2j+1 Gauss-Legendre nodes");
  if (n_phi < 2 * n + 2)
    throw Error(ErrorCategory::Config, "sphere grid needs at least 4j+2 azimuthal nodes");

  std::vector<double> x, glw;
  gauss_legendre(n_theta, x, glw);

  PhaseGrid grid;
  grid.kind = GridKind::Sphere;
  grid.spin_j = sys.j;
  grid.axis1.resize(n_theta);
  grid.axis2.resize(n_phi);
  for (int a = 0; a < n_theta; ++a) grid.axis1[a] = std::acos(x[n_theta - 1 - a]);
  for (int b = 0; b < n_phi; ++b) grid.axis2[b] = 2.0 * kPi * b / n_phi;
  grid.weights.resize(n_theta * n_phi);
  const double dim_factor = (2.0 * sys.j + 1.0) / (2.0 * n_phi);
  for (int a = 0; a < n_theta; ++a)
    for (int b = 0; b < n_phi; ++b)
      grid.weights(a * n_phi + b) = dim_factor * glw[n_theta - 1 - a];
  return grid;
}

double spin_kernel_eigenvalue_exact(double j, int l) {
  const double n = 2.0 * j;
  const double log_v = std::log(n + 1.0) + 2.0 * std::lgamma(n + 1.0) -
                       std::lgamma(n - l + 1.0) - std::lgamma(n + l + 2.0);
  return std::exp(log_v);
}

namespace {

class SpinSpectrum : public KernelSpectrum {
 public:
  explicit SpinSpectrum(SpinSystem sys) : sys_(sys), lmax_(two_j(sys)) {
    // Project ((1+x)/2)^{2j} onto Legendre polynomials; exact with 2j+2 nodes.
    std::vector<double> x, w;
    gauss_legendre(lmax_ + 2, x, w);
    upsilon_.resize(lmax_ + 1);
    for (int l = 0; l <= lmax_; ++l) {
      double acc = 0.0;
      for (size_t k = 0; k < x.size(); ++k)
        acc += w[k] * std::pow(0.5 * (1.0 + x[k]), double(lmax_)) * legendre_p(l, x[k]);
      upsilon_[l] = 0.5 * (2.0 * sys_.j + 1.0) * acc;
      if (upsilon_[l] <= 0.0)
        throw Error(ErrorCategory::Conditioning, "kernel spectrum lost positivity");
    }
    eigenvalues_.resize((lmax_ + 1) * (lmax_ + 1));
    int n = 0;
    for (int l = 0; l <= lmax_; ++l)
      for (int m = -l; m <= l; ++m) eigenvalues_(n++) = upsilon_[l];
  }

  int modes() const override { return static_cast<int>(eigenvalues_.size()); }
  const RealVector& eigenvalues() const override { return eigenvalues_; }
  std::string label() const override { return "spin:" + std::to_string(sys_.j); }
  bool band_limited() const override { return false; }

  void basis_row(const PhasePoint& p, std::span<Complex> out) const override {
    spherical_harmonics(lmax_, p.a, p.b, out);
    const double scale = std::sqrt(4.0 * kPi / (2.0 * sys_.j + 1.0));
    for (auto& v : out) v *= scale;
  }

  // Zonal form: Delta^t(x, y) = sum_l v_l^t (2l+1)/(2j+1) P_l(n(x).n(y)).
  Complex delta_power(double t, const PhasePoint& x, const PhasePoint& y) const override {
    require_power(t);
    const double cos_big = std::clamp(bloch_vector(x).dot(bloch_vector(y)), -1.0, 1.0);
    double acc = 0.0;
    for (int l = 0; l <= lmax_; ++l)
      acc += std::pow(upsilon_[l], t) * (2.0 * l + 1.0) * legendre_p(l, cos_big);
    return acc / (2.0 * sys_.j + 1.0);
  }

 private:
  SpinSystem sys_;
  int lmax_;
  std::vector<double> upsilon_;
  RealVector eigenvalues_;
};

}  // namespace

SpectrumPtr delta_spectrum(const SpinSystem& sys) {
  return std::make_shared<SpinSpectrum>(sys);
}

QpdField husimi_spin(const DensityOperator& rho, GridPtr grid) {
  if (rho.space().kind != SpaceKind::Spin)
    throw Error(ErrorCategory::Dimension, "husimi_spin expects a spin density matrix");
  const SpinSystem sys(rho.space().parameter);
  QpdField field;
  field.s = 1.0;
  field.grid = grid;
  field.operator_label = "rho";
  field.values.resize(grid->size());
  for (int k = 0; k < grid->size(); ++k) {
    const Vector v = spin_coherent(sys, grid->node(k).a, grid->node(k).b);
    field.values(k) = v.dot(rho.matrix() * v);  // Eigen dot conjugates the left factor
  }
  return field;
}

std::string SpinBackend::name() const { return "spin:" + std::to_string(sys_.j); }

GroupElement rotation_element(const SpinSystem& sys, double alpha, double beta, double gamma) {
  const Matrix jz = spin_jz(sys).matrix();
  const Matrix jy = spin_jy(sys).matrix();
  const HilbertSpec sp = sys.space();
  const Complex mi(0, -1);
  Matrix u = matrix_exponential(Operator(sp, (mi * alpha * jz).eval())).matrix() *
             matrix_exponential(Operator(sp, (mi * beta * jy).eval())).matrix() *
             matrix_exponential(Operator(sp, (mi * gamma * jz).eval())).matrix();

  auto rot_z = [](double ang) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(0, 0) = std::cos(ang); r(0, 1) = -std::sin(ang);
    r(1, 0) = std::sin(ang); r(1, 1) = std::cos(ang);
    return r;
  };
  auto rot_y = [](double ang) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(0, 0) = std::cos(ang); r(0, 2) = std::sin(ang);
    r(2, 0) = -std::sin(ang); r(2, 2) = std::cos(ang);
    return r;
  };
  const Eigen::Matrix3d r = rot_z(alpha) * rot_y(beta) * rot_z(gamma);

  GroupElement g;
  g.unitary = std::move(u);
  g.act = [r](const PhasePoint& p) { return point_from_bloch(r * bloch_vector(p)); };
  g.label = "euler(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
            std::to_string(gamma) + ")";
  return g;
}

std::vector<GroupElement> rotation_samples(const SpinSystem& sys, int count) {
  std::vector<GroupElement> out;
  out.reserve(count);
  // Fixed low-discrepancy-ish angles; deterministic across runs.
  for (int i = 0; i < count; ++i) {
    const double alpha = std::fmod(0.37 + 1.93 * i, 2.0 * kPi);
    const double beta = 0.25 + (kPi - 0.5) * std::fmod(0.41 * (i + 1), 1.0);
    const double gamma = std::fmod(1.11 + 2.71 * i, 2.0 * kPi);
    out.push_back(rotation_element(sys, alpha, beta, gamma));
  }
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double legendre_p(int l, double x) {
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void spherical_harmonics(int lmax, double theta, double phi, std::span<Complex> out) {
  const int size = (lmax + 1) * (lmax + 1);
  if (static_cast<int>(out.size()) < size)
    throw Error(ErrorCategory::Dimension, "spherical_harmonics output span too small");
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Fully normalized associated Legendre values Pbar_{l,m}, m >= 0, with the
  // Condon-Shortley phase folded into the diagonal recurrence.
  std::vector<double> pbar((lmax + 1) * (lmax + 2) / 2, 0.0);
  auto at = [lmax](int l, int m) { return l * (l + 1) / 2 + m; };
  pbar[at(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= lmax; ++m)
    pbar[at(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pbar[at(m - 1, m - 1)];
  for (int m = 0; m < lmax; ++m)
    pbar[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pbar[at(m, m)];
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b =
          std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
      pbar[at(l, m)] = a * (x * pbar[at(l - 1, m)] - b * pbar[at(l - 2, m)]);
    }
  }

  int n = 0;
  for (int l = 0; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m, ++n) {
      const int am = std::abs(m);
      const Complex y = pbar[at(l, am)] * std::polar(1.0, am * phi);
      if (m >= 0)
        out[n] = y;
      else
        out[n] = (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
    }
  }
}

}  // namespace qpd
