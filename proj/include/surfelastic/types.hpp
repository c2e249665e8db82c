#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace surfelastic {

/// Scalar field sampled on a spherical grid, one entry per grid point,
/// row-major over (phi row, theta column).
using ScalarField = Eigen::VectorXd;

/// R^3-valued field on the grid: one row per grid point, columns x,y,z.
/// A surface f, a tangent field u, and an SRNF q all use this layout.
using Field3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

using Vec3 = Eigen::Vector3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad inputs or violated data invariants (CLI exit code 2).
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// det(alpha^T alpha) fell below the rank tolerance somewhere.
struct RankDeficiencyError : ValidationError {
  RankDeficiencyError(const std::string& msg, int row, int col)
      : ValidationError(msg), phi_row(row), theta_col(col) {}
  int phi_row;
  int theta_col;
};

/// File / filesystem problems (CLI exit code 4).
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Coefficients (a,b,c,d) of the split metric: shear, scale, bend and
/// local-reparametrization weights. All nonnegative, not all zero.
struct MetricWeights {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;

  void validate() const {
    if (a < 0 || b < 0 || c < 0 || d < 0)
      throw ValidationError("metric weights must be nonnegative");
    if (a == 0 && b == 0 && c == 0 && d == 0)
      throw ValidationError("metric weights must not all be zero");
  }

  static MetricWeights srnf() { return {0.0, 0.5, 1.0, 0.0}; }
  static MetricWeights full() { return {1.0, 1.0, 1.0, 1.0}; }
};

}  // namespace surfelastic
