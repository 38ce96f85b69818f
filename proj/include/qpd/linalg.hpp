#pragma once

#include "qpd/types.hpp"

namespace qpd {

enum class SpaceKind { Generic, FockTruncated, Spin };

/// Identifies the finite-dimensional Hilbert space a matrix lives on.
struct HilbertSpec {
  SpaceKind kind = SpaceKind::Generic;
  int dim = 0;
  double parameter = 0.0;  // Fock cutoff N, or spin j

  static HilbertSpec generic(int dim);
  static HilbertSpec fock(int cutoff);  // dim = N + 1
  static HilbertSpec spin(double j);    // dim = 2j + 1

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;
};

/// Dense operator on a finite Hilbert space. Immutable after construction.
class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpec space, Matrix m);

  const HilbertSpec& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return space_.dim; }

  Operator adjoint() const;
  Complex trace() const { return matrix_.trace(); }

  /// max |A - A^dagger| over entries.
  double hermiticity_defect() const;

 private:
  HilbertSpec space_;
  Matrix matrix_;
};

struct DensityTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Operator validated to be a density matrix (Hermitian, unit trace,
/// positive up to the stated tolerances).
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(Operator op, const DensityTolerances& tol = {});

  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const HilbertSpec& space() const { return op_.space(); }
  int dim() const { return op_.dim(); }

  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  Operator op_;
  double min_eigenvalue_ = 0.0;
};

/// Tr(AB), computed densely.
Complex trace_product(const Operator& a, const Operator& b);

/// Kronecker product; dim = dim(a) * dim(b). Index convention
/// (a x b)_{(i k),(j l)} = a_{ij} b_{kl} with the first factor major.
Operator tensor_product(const Operator& a, const Operator& b);

/// exp(A). Uses an eigendecomposition when A is Hermitian or
/// anti-Hermitian, scaling-and-squaring otherwise.
Operator matrix_exponential(const Operator& a);

/// Spectral 2-norm (largest singular value).
double operator_norm(const Matrix& m);

}  // namespace qpd
