#pragma once

#include "surfelastic/grid.hpp"

namespace surfelastic {

/// Vector-valued one-form on the grid: a 3x2 matrix per point in the
/// orthonormal spherical frame. Column 0 is (1/sin phi) d/dtheta, column 1
/// is d/dphi, applied to each coordinate of f. Stored as points x 6 with
/// columns [c0.x c0.y c0.z c1.x c1.y c1.z].
struct OneForm {
  Eigen::Matrix<double, Eigen::Dynamic, 6> m;

  int points() const { return static_cast<int>(m.rows()); }

  Mat32 at(int p) const {
    Mat32 a;
    a.col(0) = m.row(p).head<3>().transpose();
    a.col(1) = m.row(p).tail<3>().transpose();
    return a;
  }
  void set(int p, const Mat32& a) {
    m.row(p).head<3>() = a.col(0).transpose();
    m.row(p).tail<3>() = a.col(1).transpose();
  }

  static OneForm zero(int points) {
    OneForm f;
    f.m.setZero(points, 6);
    return f;
  }
};

/// Discrete differential df. Theta derivatives are periodic central
/// differences; phi derivatives are central with second-order one-sided
/// stencils at the first and last rows.
OneForm differential(const SphericalGrid& grid, const Field3& f);

/// Adjoint of `differential` under the plain (unweighted) entrywise inner
/// products: <differential(f), W> = <f, differential_adjoint(W)> exactly.
Field3 differential_adjoint(const SphericalGrid& grid, const OneForm& w);

/// det(alpha^T alpha) at every point.
ScalarField gram_determinant(const SphericalGrid& grid, const OneForm& alpha);

/// Throws RankDeficiencyError if det(alpha^T alpha) <= 1e-14 * mean det
/// anywhere, naming the offending grid indices.
void require_full_rank(const SphericalGrid& grid, const OneForm& alpha,
                       const char* where);

inline constexpr double kRankTolRel = 1e-14;

}  // namespace surfelastic
