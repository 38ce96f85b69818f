// Acceptance suite: one test case per criterion, each printing a single
// summary line with the measured deviation and its tolerance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "qpd/dynamics.hpp"
#include "qpd/naimark.hpp"
#include "qpd/states.hpp"
#include "test_util.hpp"

using namespace qpd;

namespace {

void report_line(int criterion, const std::string& what, double measured, double tol) {
  std::printf("[criterion %d] %-52s max_dev=%.3e tol=%.0e %s\n", criterion, what.c_str(), measured,
              tol, measured < tol ? "PASS" : "FAIL");
  std::fflush(stdout);
}

void report_flag(int criterion, const std::string& what, bool ok) {
  std::printf("[criterion %d] %-52s %s\n", criterion, what.c_str(), ok ? "PASS" : "FAIL");
  std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion 1: resolution of unity on the sphere") {
  double worst = 0.0;
  for (double j = 0.5; j <= 5.0; j += 0.5) {
    const SpinSystem sys(j);
    const int n_theta = static_cast<int>(std::lround(2.0 * j)) + 2;
    const PhaseGrid grid = sphere_quadrature(sys, n_theta);
    Matrix sum = Matrix::Zero(sys.dim, sys.dim);
    for (int k = 0; k < grid.size(); ++k) {
      const Vector v = spin_coherent(sys, grid.node(k).a, grid.node(k).b);
      sum += grid.weights(k) * (v * v.adjoint());
    }
    worst = std::max(worst, (sum - Matrix::Identity(sys.dim, sys.dim)).norm());
  }
  report_line(1, "resolution of unity, spin j = 1/2..5", worst, 1e-12);
  CHECK(worst < 1e-12);
}

TEST_CASE("criterion 2: kernel axiom suite on the sphere") {
  double k1 = 0, k2 = 0, k3 = 0, k4 = 0, k5 = 0;
  for (double j : {0.5, 1.0, 2.0}) {
    const SpinSystem sys(j);
    const SpinBackend backend(sys);
    const auto spectrum = delta_spectrum(sys);
    auto grid = std::make_shared<PhaseGrid>(sphere_quadrature(sys));
    const auto rotations = rotation_samples(sys, 12);
    for (double s : {-1.0, 0.0, 1.0}) {
      const SwKernelField plus = sw_kernel_field(backend, *spectrum, grid, s);
      const SwKernelField minus = sw_kernel_field(backend, *spectrum, grid, -s);
      const AxiomReport report = axiom_report(backend, *spectrum, plus, minus, rotations);
      for (const auto& check : report.checks) {
        if (check.name == "K1_self_adjoint") k1 = std::max(k1, check.max_abs_deviation);
        if (check.name == "K2_covariance") k2 = std::max(k2, check.max_abs_deviation);
        if (check.name == "K3_unit_trace") k3 = std::max(k3, check.max_abs_deviation);
        if (check.name == "K4_completeness") k4 = std::max(k4, check.max_abs_deviation);
        if (check.name == "K5p_orthogonality") k5 = std::max(k5, check.max_abs_deviation);
      }
    }
  }
  report_line(2, "(K.1) self-adjointness", k1, 1e-10);
  report_line(2, "(K.2) covariance, 12 rotations", k2, 1e-8);
  report_line(2, "(K.3) unit trace", k3, 1e-10);
  report_line(2, "(K.4) completeness", k4, 1e-8);
  report_line(2, "(K.5') band-limited-delta duality", k5, 1e-8);
  CHECK(k1 < 1e-10);
  CHECK(k2 < 1e-8);
  CHECK(k3 < 1e-10);
  CHECK(k4 < 1e-8);
  CHECK(k5 < 1e-8);
}

TEST_CASE("criterion 3: trace duality over random Hermitian pairs") {
  auto gen = testing::rng(301);
  double worst = 0.0;
  for (double j : {1.0, 2.0}) {
    const SpinSystem sys(j);
    const SpinBackend backend(sys);
    const auto spectrum = delta_spectrum(sys);
    auto grid = std::make_shared<PhaseGrid>(sphere_quadrature(sys));
    for (double s : {-1.0, 0.0, 1.0}) {
      for (int pair = 0; pair < 20; ++pair) {
        const Operator a(sys.space(), testing::random_hermitian_matrix(gen, sys.dim));
        const Operator b(sys.space(), testing::random_hermitian_matrix(gen, sys.dim));
        const QpdField fa = qpd_field(backend, *spectrum, grid, a, s);
        const QpdField fb = qpd_field(backend, *spectrum, grid, b, -s);
        Complex pairing = 0.0;
        for (int k = 0; k < grid->size(); ++k)
          pairing += grid->weights(k) * fa.values(k) * fb.values(k);
        worst = std::max(worst, std::abs(pairing - trace_product(a, b)));
      }
    }
  }
  report_line(3, "(S.4') pairing = Tr(AB), j in {1,2}, s in {-1,0,1}", worst, 1e-8);
  CHECK(worst < 1e-8);
}

TEST_CASE("criterion 4: semigroup round trips") {
  // sphere: exact band
  double spin_err = 0.0;
  {
    auto gen = testing::rng(401);
    const SpinSystem sys(2.0);
    const SpinBackend backend(sys);
    const auto spectrum = delta_spectrum(sys);
    auto grid = std::make_shared<PhaseGrid>(sphere_quadrature(sys));
    const DensityOperator rho = testing::random_density(gen, sys.space());
    const QpdField h = qpd_field(backend, *spectrum, grid, rho.op(), 1.0);
    const QpdField down = qpd_transform_field(*spectrum, h, -1.0);
    const QpdField back = qpd_transform_field(*spectrum, down, 1.0);
    spin_err = (back.values - h.values).cwiseAbs().maxCoeff();
  }
  report_line(4, "spin round trip s: 1 -> -1 -> 1", spin_err, 1e-8);
  CHECK(spin_err < 1e-8);

  // plane: band-limited at kappa = 6; a broad state keeps its transform
  // inside the band
  double ccr_err = 0.0;
  {
    const CcrSystem sys(40);
    auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 128));
    const auto spectrum = planar_spectrum(*grid, 6.0);
    const QpdField h = husimi_ccr(thermal_state(sys, 1.0), grid);
    const QpdField down = qpd_transform_field(*spectrum, h, -1.0);
    const QpdField back = qpd_transform_field(*spectrum, down, 1.0);
    ccr_err = (back.values - h.values).cwiseAbs().maxCoeff();
  }
  report_line(4, "ccr round trip at kappa=6, N=40, M=128", ccr_err, 1e-5);
  CHECK(ccr_err < 1e-5);
}

TEST_CASE("criterion 5: named-distribution goldens on the plane") {
  const CcrSystem sys(40);
  auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 128));

  double husimi_err = 0.0;
  {
    const QpdField h = husimi_ccr(vacuum_state(sys), grid);
    for (int k = 0; k < grid->size(); ++k) {
      const PhasePoint p = grid->node(k);
      husimi_err =
          std::max(husimi_err, std::abs(h.values(k) - std::exp(-(p.a * p.a + p.b * p.b))));
    }
  }
  report_line(5, "husimi(vacuum) = exp(-|a|^2)", husimi_err, 1e-6);
  CHECK(husimi_err < 1e-6);

  double wigner_err = 0.0;
  double fock1_origin = 0.0;
  {
    const QpdField w = wigner_ccr(vacuum_state(sys), grid);
    for (int k = 0; k < grid->size(); ++k) {
      const PhasePoint p = grid->node(k);
      wigner_err = std::max(
          wigner_err, std::abs(w.values(k) - 2.0 * std::exp(-2.0 * (p.a * p.a + p.b * p.b))));
    }
    const QpdField w1 = wigner_ccr(fock_state(sys, 1), grid);
    const int center = (grid->rows() / 2) * grid->rows() + grid->rows() / 2;
    fock1_origin = std::abs(w1.values(center).real() + 2.0);
  }
  report_line(5, "wigner(vacuum) = 2 exp(-2|a|^2)", wigner_err, 1e-3);
  report_line(5, "wigner(fock 1) at origin = -2", fock1_origin, 1e-3);
  CHECK(wigner_err < 1e-3);
  CHECK(fock1_origin < 1e-3);

  double p_err = 0.0;
  {
    const double nbar = 1.0;
    const QpdField g = glauber_sudarshan_ccr(thermal_state(sys, nbar), grid, 6.0);
    for (int k = 0; k < grid->size(); ++k) {
      const PhasePoint p = grid->node(k);
      p_err = std::max(
          p_err, std::abs(g.values(k) - std::exp(-(p.a * p.a + p.b * p.b) / nbar) / nbar));
    }
  }
  report_line(5, "glauber(thermal nbar=1) at kappa=6", p_err, 1e-3);
  CHECK(p_err < 1e-3);
}

TEST_CASE("criterion 6: vacuum-probe joint distribution is the husimi field") {
  const CcrSystem sys(40);
  auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 128));
  const Vector probe = gaussian_probe(sys, 1.0);
  double worst = 0.0;
  for (const DensityOperator& rho : {vacuum_state(sys), fock_state(sys, 1),
                                     coherent_state_density(sys, {1.0, 0.0}),
                                     thermal_state(sys, 0.5)}) {
    const QpdField joint = joint_distribution(rho, probe, grid);
    const QpdField husimi = husimi_ccr(rho, grid);
    worst = std::max(worst, (joint.values - husimi.values).cwiseAbs().maxCoeff());
  }
  report_line(6, "joint(rho, vacuum probe) = husimi(rho), 4 states", worst, 1e-5);
  CHECK(worst < 1e-5);
}

TEST_CASE("criterion 7: weak-value route matches the kernel transform") {
  auto gen = testing::rng(701);
  const SpinSystem sys(1.0);
  const SpinBackend backend(sys);
  const auto spectrum = delta_spectrum(sys);
  const PhaseGrid grid = sphere_quadrature(sys, 10, 10);
  const Operator a(sys.space(), testing::random_hermitian_matrix(gen, sys.dim));

  std::uniform_int_distribution<int> node_pick(0, grid.size() - 1);
  double worst = 0.0;
  for (double s : {-1.0, 0.0}) {
    const Vector coeffs =
        band_coefficients(*spectrum, grid, husimi_symbol(backend, grid, a));
    const RealVector powers = spectrum->eigenvalues().array().pow(0.5 * (s - 1.0));
    for (int trial = 0; trial < 50; ++trial) {
      const PhasePoint xi = grid.node(node_pick(gen));
      const Complex direct = band_synthesis_at(*spectrum, coeffs, powers, xi);
      const Complex via_weak = qpd_via_weak_values(backend, *spectrum, grid, a, s, xi);
      worst = std::max(worst, std::abs(via_weak - direct));
    }
  }
  report_line(7, "weak-value representation, j=1, s in {-1,0}", worst, 1e-8);
  CHECK(worst < 1e-8);
}

TEST_CASE("criterion 8: damped oscillator dynamics") {
  const CcrSystem sys(30);
  const double omega = 1.0, gamma = 0.2, dt = 1e-3;
  const Complex alpha0(1.5, 0.0);

  LindbladSpec lindblad;
  lindblad.hamiltonian = Operator(sys.space(), (omega * number_operator(sys).matrix()).eval());
  lindblad.jumps.emplace_back(annihilation(sys), gamma);

  // moment decay against the closed form at t = 1, 3, 5
  double moment_err = 0.0;
  bool husimi_nonneg = true;
  {
    const auto traj = evolve(coherent_state_density(sys, alpha0), lindblad, dt, 5000,
                             {.snapshot_stride = 1000});
    auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 64));
    const Matrix a = annihilation(sys).matrix();
    for (size_t i = 0; i < traj.size(); ++i) {
      const double t = dt * 1000.0 * double(i);
      const Complex expected = alpha0 * std::exp(Complex(-0.5 * gamma, -omega) * t);
      const Complex moment = (traj[i].matrix() * a).trace();
      if (i == 1 || i == 3 || i == 5)
        moment_err = std::max(moment_err, std::abs(moment - expected));
      const QpdField h = husimi_ccr(traj[i], grid);
      husimi_nonneg = husimi_nonneg && h.values.real().minCoeff() > -1e-9;
    }
  }
  report_line(8, "Tr[rho(t) a] vs closed form at t = 1, 3, 5", moment_err, 1e-4);
  report_flag(8, "husimi snapshots nonnegative", husimi_nonneg);
  CHECK(moment_err < 1e-4);
  CHECK(husimi_nonneg);

  // central negativity of the damped first Fock state rises monotonically
  bool monotone = true;
  {
    const auto traj =
        evolve(fock_state(sys, 1), lindblad, dt, 4750, {.snapshot_stride = 250});
    auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 64));
    const int center = (grid->rows() / 2) * grid->rows() + grid->rows() / 2;
    double previous = -2.1;
    for (size_t i = 0; i < 20; ++i) {
      const double w0 = wigner_ccr(traj[i], grid).values(center).real();
      monotone = monotone && (w0 > previous);
      previous = w0;
    }
  }
  report_flag(8, "wigner(fock 1) central negativity rises, 20 times", monotone);
  CHECK(monotone);
}

TEST_CASE("criterion 9: husimi positivity sweep over random density operators") {
  auto gen = testing::rng(901);
  double worst = 0.0;
  {
    const CcrSystem sys(24);
    auto grid = std::make_shared<PhaseGrid>(planar_grid(5.0, 64));
    for (int trial = 0; trial < 100; ++trial) {
      const DensityOperator rho = testing::random_density(gen, sys.space());
      worst = std::min(worst, husimi_ccr(rho, grid).values.real().minCoeff());
    }
  }
  {
    const SpinSystem sys(2.0);
    auto grid = std::make_shared<PhaseGrid>(sphere_quadrature(sys));
    for (int trial = 0; trial < 100; ++trial) {
      const DensityOperator rho = testing::random_density(gen, sys.space());
      worst = std::min(worst, husimi_spin(rho, grid).values.real().minCoeff());
    }
  }
  report_line(9, "husimi minimum over 100 random states per backend", -worst, 1e-12);
  CHECK(worst >= -1e-12);
}
