#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class ErrorCategory {
  Config,
  Dimension,
  Domain,
  Conditioning,
  CutoffInadequacy,
  Overflow,
  OrthogonalSelection,
  StepSize,
  PositivityLoss,
  Io,
};

const char* to_string(ErrorCategory category);

/// Library error carrying a machine-readable category (the CLI maps
/// categories to exit codes).
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

/// A point of a coherent phase space. The interpretation of the two
/// coordinates depends on the backend: (Re alpha, Im alpha) for the planar
/// backend, (theta, phi) for the sphere backend.
struct PhasePoint {
  double a = 0.0;
  double b = 0.0;
};

enum class GridKind { Planar, Sphere };

/// Product quadrature grid on a phase space. Weights approximate the
/// invariant measure normalized so that coherent projectors resolve unity:
/// d^2alpha/pi on the plane, (2j+1) sin(theta) dtheta dphi / (4pi) on the
/// sphere.
struct PhaseGrid {
  GridKind kind = GridKind::Planar;
  std::vector<double> axis1;  // Re alpha | theta
  std::vector<double> axis2;  // Im alpha | phi
  RealVector weights;         // per node, axis1-major

  double half_width = 0.0;  // planar grids: L
  double spin_j = 0.0;      // sphere grids: j

  int rows() const { return static_cast<int>(axis1.size()); }
  int cols() const { return static_cast<int>(axis2.size()); }
  int size() const { return rows() * cols(); }

  PhasePoint node(int index) const {
    const int n2 = cols();
    return {axis1[index / n2], axis2[index % n2]};
  }
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

}  // namespace qpd
