#include "qpd/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qpd {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Dimension: return "dimension";
    case ErrorCategory::Domain: return "domain";
    case ErrorCategory::Conditioning: return "conditioning";
    case ErrorCategory::CutoffInadequacy: return "cutoff-inadequacy";
    case ErrorCategory::Overflow: return "overflow";
    case ErrorCategory::OrthogonalSelection: return "orthogonal-selection";
    case ErrorCategory::StepSize: return "step-size";
    case ErrorCategory::PositivityLoss: return "positivity-loss";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

HilbertSpec HilbertSpec::generic(int dim) {
  if (dim < 1) throw Error(ErrorCategory::Dimension, "space dimension must be positive");
  return {SpaceKind::Generic, dim, 0.0};
}

HilbertSpec HilbertSpec::fock(int cutoff) {
  if (cutoff < 0) throw Error(ErrorCategory::Dimension, "Fock cutoff must be nonnegative");
  return {SpaceKind::FockTruncated, cutoff + 1, static_cast<double>(cutoff)};
}

HilbertSpec HilbertSpec::spin(double j) {
  const double two_j = 2.0 * j;
  if (j < 0.5 || std::abs(two_j - std::round(two_j)) > 1e-12)
    throw Error(ErrorCategory::Dimension, "spin j must be a half-integer >= 1/2");
  return {SpaceKind::Spin, static_cast<int>(std::lround(two_j)) + 1, j};
}

Operator::Operator(HilbertSpec space, Matrix m) : space_(space), matrix_(std::move(m)) {
  if (matrix_.rows() != space_.dim || matrix_.cols() != space_.dim)
    throw Error(ErrorCategory::Dimension, "matrix shape does not match the declared space");
  if (!matrix_.allFinite())
    throw Error(ErrorCategory::Overflow, "operator has non-finite entries");
}

Operator Operator::adjoint() const { return Operator(space_, matrix_.adjoint()); }

double Operator::hermiticity_defect() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator::DensityOperator(Operator op, const DensityTolerances& tol) : op_(std::move(op)) {
  if (op_.hermiticity_defect() > tol.hermiticity)
    throw Error(ErrorCategory::Domain, "density matrix is not Hermitian within tolerance");
  const Complex tr = op_.trace();
  if (std::abs(tr - 1.0) > tol.trace)
    throw Error(ErrorCategory::Domain, "density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  min_eigenvalue_ = es.eigenvalues().minCoeff();
  if (min_eigenvalue_ < tol.min_eigenvalue)
    throw Error(ErrorCategory::PositivityLoss, "density matrix has a negative eigenvalue beyond tolerance");
}

Complex trace_product(const Operator& a, const Operator& b) {
  if (!(a.space() == b.space()))
    throw Error(ErrorCategory::Dimension, "trace_product requires operators on the same space");
  return a.matrix().cwiseProduct(b.matrix().transpose()).sum();
}

Operator tensor_product(const Operator& a, const Operator& b) {
  const int da = a.dim(), db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return Operator(HilbertSpec::generic(da * db), std::move(out));
}

Operator matrix_exponential(const Operator& a) {
  const Matrix& m = a.matrix();
  const double scale = m.cwiseAbs().maxCoeff();
  const double tol = 1e-13 * std::max(1.0, scale);
  Matrix result;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol) {
    // Hermitian: exp(A) = V exp(lambda) V^dagger.
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    result = es.eigenvectors() *
             es.eigenvalues().array().exp().matrix().asDiagonal() *
             es.eigenvectors().adjoint();
  } else if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= tol) {
    // Anti-Hermitian: A = iH with H Hermitian, exp(A) = V exp(i lambda) V^dagger.
    Eigen::SelfAdjointEigenSolver<Matrix> es((Complex(0, -1) * m).eval());
    Vector phases = (Complex(0, 1) * es.eigenvalues()).array().exp();
    result = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  } else {
    result = m.exp();
  }
  if (!result.allFinite())
    throw Error(ErrorCategory::Overflow, "matrix exponential overflowed");
  return Operator(a.space(), std::move(result));
}

double operator_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace qpd
