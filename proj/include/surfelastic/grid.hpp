#pragma once

#include "surfelastic/types.hpp"

namespace surfelastic {

/// Regular spherical grid. Theta is equispaced and periodic on [0, 2pi);
/// phi rows sit at cell midpoints (i+1/2)*pi/n_phi so that 1/sin(phi) is
/// finite everywhere and the poles are never sampled. The quadrature
/// weight of point (i,j) is sin(phi_i)*d_theta*d_phi (steradians).
struct SphericalGrid {
  int n_theta = 0;
  int n_phi = 0;
  double d_theta = 0;
  double d_phi = 0;
  Eigen::VectorXd theta;     // size n_theta
  Eigen::VectorXd phi;       // size n_phi
  Eigen::VectorXd sin_phi;   // per phi row
  Eigen::VectorXd cos_phi;   // per phi row
  Eigen::VectorXd row_weight;  // sin(phi_i)*d_theta*d_phi, shared by the row

  int points() const { return n_phi * n_theta; }
  int index(int i, int j) const { return i * n_theta + j; }
  double weight(int i, int /*j*/) const { return row_weight[i]; }

  /// Unit sphere point at grid node (i,j); the spherical frame vectors.
  Vec3 e1(int i, int j) const;  // radial
  Vec3 e2(int i, int j) const;  // d/dphi direction
  Vec3 e3(int i, int j) const;  // (1/sin phi) d/dtheta direction

  bool same_shape(const SphericalGrid& o) const {
    return n_theta == o.n_theta && n_phi == o.n_phi;
  }
};

/// Builds the midpoint grid. Requires n_theta >= 4, n_phi >= 3.
SphericalGrid build_grid(int n_theta, int n_phi);

/// Quadrature: sum of field * weight over all points.
double integrate(const SphericalGrid& grid, const ScalarField& field);

/// Identity embedding of S^2 (the round unit sphere) on the grid.
Field3 unit_sphere(const SphericalGrid& grid);

/// Surface diameter estimated from the bounding box diagonal.
double surface_diameter(const Field3& f);

/// Per-column reconstructed pole values (phi -> 0 limit if `north`,
/// phi -> pi otherwise). Interpolates each column through the pole using
/// the antipodal column (theta + pi, trig-interpolated), which is exact
/// for surfaces that close smoothly at the pole.
Field3 reconstruct_pole(const SphericalGrid& grid, const Field3& f, bool north);

/// Consistent single pole point: mean of the per-column reconstructions.
Vec3 pole_point(const SphericalGrid& grid, const Field3& f, bool north);

struct SurfaceValidation {
  double pole_spread_north = 0;  // max column deviation / diameter
  double pole_spread_south = 0;
  double seam_tail = 0;          // worst high-mode Fourier amplitude / diameter
  int bad_row = -1;
  int bad_col = -1;
};

/// Checks the SurfaceGrid invariants: wrap-around periodicity in theta
/// (via the Fourier tail of each row) and pole consistency (reconstructed
/// pole limits agree across theta within 1e-8 * diameter).
/// Throws ValidationError naming the offending rows/columns.
SurfaceValidation validate_surface(const SphericalGrid& grid, const Field3& f);

/// Tolerances used by validate_surface.
inline constexpr double kPoleTolPerDiameter = 1e-8;
inline constexpr double kSeamTailTolPerDiameter = 1e-5;

/// Evaluates the trigonometric interpolant of a periodic sequence
/// (values at theta_j = j*2pi/n) at all points theta_j + pi.
/// Exact for bandlimited rows; for even n it is a half-roll.
Eigen::VectorXd trig_shift_half_turn(const Eigen::VectorXd& row);

}  // namespace surfelastic
