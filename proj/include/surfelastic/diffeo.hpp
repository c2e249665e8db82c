#pragma once

#include "surfelastic/harmonics.hpp"

namespace surfelastic {

/// Coefficients X^v of a tangent vector field in a VectorFieldBasis,
/// parametrizing gamma = Proj(Id + sum X^v_k v_k).
struct DiffeoCoefficients {
  Eigen::VectorXd xv;
  const VectorFieldBasis* basis = nullptr;
};

/// A map S^2 -> S^2 sampled on the grid (unit vector per point).
struct SphereMap {
  Field3 gamma;

  static SphereMap identity(const SphericalGrid& grid) {
    return {unit_sphere(grid)};
  }
};

/// gamma = Proj(Id + t U). Throws if Id + tU nearly vanishes anywhere.
SphereMap build_map(const SphericalGrid& grid, const DiffeoCoefficients& c,
                    double t = 1.0);

/// Largest certified step: -1 / inf(lambda_1(sym grad U)), or +infinity
/// when the infimum vanishes (Killing fields). Always positive.
double step_bound(const SphericalGrid& grid, const DiffeoCoefficients& c);

/// Jacobian determinant field of Proj(Id + tU) in the closed algebraic
/// form D = det(1 + tM) + t^2 <JU, (1+tM) JU>.
ScalarField jacobian_det(const SphericalGrid& grid,
                         const DiffeoCoefficients& c, double t);

/// Same determinant through the geometric route
/// |W . (W_phi x W_theta)| / (sin(phi) |W|^3), W = Id + tU, with analytic
/// derivatives of W. Used as the independent cross-check.
ScalarField jacobian_det_geometric(const SphericalGrid& grid,
                                   const DiffeoCoefficients& c, double t);

/// Jacobian determinant of an arbitrary sampled sphere map, via stencil
/// derivatives of the gamma field. For diagnostics on composed maps.
ScalarField jacobian_of_map(const SphericalGrid& grid, const SphereMap& map);

/// Bicubic sampler of a grid field with periodic theta and through-pole
/// phi extension (the antipodal-column continuation), so interpolation
/// keeps full order near the poles. Samples and their derivatives with
/// respect to the evaluation angles are available.
class SurfaceSampler {
 public:
  SurfaceSampler(const SphericalGrid& grid, const Field3& f);

  Vec3 value(double theta, double phi) const;
  /// Value plus partial derivatives with respect to theta and phi.
  void value_and_jacobian(double theta, double phi, Vec3& val, Vec3& d_theta,
                          Vec3& d_phi) const;

 private:
  const SphericalGrid& grid_;
  Eigen::MatrixXd ext_;  // (n_phi + 4) x (3 n_theta), pole-extended values
  template <bool WithDerivs>
  void sample(double theta, double phi, Vec3& val, Vec3* dth, Vec3* dph) const;
};

/// f composed with gamma: evaluates f at the image points of the map.
/// The identity map returns f bit-identically.
Field3 resample(const SphericalGrid& grid, const Field3& f,
                const SphereMap& gamma);

/// Composition gamma_a after gamma_b: p -> gamma_a(gamma_b(p)), evaluated
/// by resampling the gamma_a field at gamma_b's image points (renormalized).
SphereMap compose(const SphericalGrid& grid, const SphereMap& gamma_a,
                  const SphereMap& gamma_b);

/// Fixed-point numerical inverse of a near-identity map (diagnostics).
SphereMap invert_map(const SphericalGrid& grid, const SphereMap& gamma,
                     int iterations = 30);

/// Angles of a unit vector: theta in [0, 2pi), phi in [0, pi].
void unit_to_angles(const Vec3& x, double& theta, double& phi);

}  // namespace surfelastic
