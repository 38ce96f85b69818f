#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpd/linalg.hpp"
#include "test_util.hpp"

using namespace qpd;

TEST_CASE("trace_product on identities and projectors") {
  const HilbertSpec sp = HilbertSpec::generic(3);
  const Operator eye(sp, Matrix::Identity(3, 3));
  CHECK(std::abs(trace_product(eye, eye) - Complex(3.0)) < 1e-15);

  Matrix p0 = Matrix::Zero(3, 3), p1 = Matrix::Zero(3, 3);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(std::abs(trace_product(Operator(sp, p0), Operator(sp, p1))) < 1e-15);
}

TEST_CASE("trace_product equals the element-wise double sum") {
  auto gen = testing::rng();
  const HilbertSpec sp = HilbertSpec::generic(4);
  const Operator a(sp, testing::random_hermitian_matrix(gen, 4));
  const Operator b(sp, testing::random_hermitian_matrix(gen, 4));
  Complex brute = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) brute += a.matrix()(i, k) * b.matrix()(k, i);
  CHECK(std::abs(trace_product(a, b) - brute) < 1e-12);
}

TEST_CASE("trace_product conjugation symmetry") {
  auto gen = testing::rng(7);
  const HilbertSpec sp = HilbertSpec::generic(5);
  const Operator a(sp, testing::random_complex_matrix(gen, 5));
  const Operator b(sp, testing::random_complex_matrix(gen, 5));
  const Complex lhs = trace_product(a, b);
  const Complex rhs = std::conj(trace_product(b.adjoint(), a.adjoint()));
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("trace_product rejects mismatched spaces") {
  const Operator a(HilbertSpec::generic(2), Matrix::Identity(2, 2));
  const Operator b(HilbertSpec::generic(3), Matrix::Identity(3, 3));
  CHECK_THROWS_AS(trace_product(a, b), Error);
}

TEST_CASE("matrix_exponential trivial cases") {
  const HilbertSpec sp = HilbertSpec::generic(2);
  const Operator zero(sp, Matrix::Zero(2, 2));
  CHECK((matrix_exponential(zero).matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = Complex(0, kPi);
  const Matrix e = matrix_exponential(Operator(sp, diag)).matrix();
  CHECK(std::abs(e(0, 0) - Complex(-1.0)) < 1e-14);
  CHECK(std::abs(e(1, 1) - Complex(1.0)) < 1e-14);
}

TEST_CASE("matrix_exponential of a displacement generator matches its Taylor series") {
  const int dim = 31;
  const HilbertSpec sp = HilbertSpec::generic(dim);
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  const Complex alpha(0.5, 0.0);
  Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;

  Matrix taylor = Matrix::Identity(dim, dim);
  Matrix term = Matrix::Identity(dim, dim);
  for (int k = 1; k <= 60; ++k) {
    term = (term * gen / double(k)).eval();
    taylor += term;
  }
  const Matrix viaexp = matrix_exponential(Operator(sp, gen)).matrix();
  CHECK((viaexp - taylor).block(0, 0, 20, 20).cwiseAbs().maxCoeff() < 1e-12);

  // anti-Hermitian generator: the exponential is unitary
  CHECK((viaexp * viaexp.adjoint() - Matrix::Identity(dim, dim)).norm() < 1e-10);
}

TEST_CASE("matrix_exponential handles non-normal input") {
  const HilbertSpec sp = HilbertSpec::generic(2);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;  // nilpotent: exp = I + m
  const Matrix e = matrix_exponential(Operator(sp, m)).matrix();
  CHECK(std::abs(e(0, 1) - Complex(2.0)) < 1e-13);
  CHECK(std::abs(e(0, 0) - Complex(1.0)) < 1e-13);
}

TEST_CASE("tensor_product identities and indexing oracle") {
  const HilbertSpec sp2 = HilbertSpec::generic(2);
  const Operator eye2(sp2, Matrix::Identity(2, 2));
  CHECK((tensor_product(eye2, eye2).matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const Matrix proj = tensor_product(Operator(sp2, p0), Operator(sp2, p1)).matrix();
  CHECK(std::abs(proj(1, 1) - Complex(1.0)) < 1e-15);  // |0>|1> is index 1
  CHECK(std::abs(proj.trace() - Complex(1.0)) < 1e-15);

  auto gen = testing::rng(11);
  const Operator a(sp2, testing::random_complex_matrix(gen, 2));
  const Operator b(sp2, testing::random_complex_matrix(gen, 2));
  const Matrix t = tensor_product(a, b).matrix();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          CHECK(std::abs(t(i * 2 + k, j * 2 + l) - a.matrix()(i, j) * b.matrix()(k, l)) < 1e-15);

  // trace multiplicativity
  CHECK(std::abs(t.trace() - a.trace() * b.trace()) < 1e-12);
}

TEST_CASE("density operator validation") {
  const HilbertSpec sp = HilbertSpec::generic(3);
  CHECK_NOTHROW(DensityOperator(Operator(sp, Matrix::Identity(3, 3) / 3.0)));

  Matrix bad_trace = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(DensityOperator(Operator(sp, bad_trace)), Error);

  Matrix negative = Matrix::Zero(3, 3);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(Operator(sp, negative)), Error);

  Matrix nonherm = Matrix::Identity(3, 3) / 3.0;
  nonherm(0, 1) = Complex(0, 1e-3);
  CHECK_THROWS_AS(DensityOperator(Operator(sp, nonherm)), Error);
}

TEST_CASE("operator constructor rejects bad shapes and non-finite entries") {
  CHECK_THROWS_AS(Operator(HilbertSpec::generic(3), Matrix::Identity(2, 2)), Error);
  Matrix inf = Matrix::Zero(2, 2);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Operator(HilbertSpec::generic(2), inf), Error);
}
